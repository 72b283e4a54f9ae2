#include "calabi/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "calabi/lattice_ops.hpp"

namespace calabi {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DegenerateInput("Gauss rule needs at least one point");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

double integrate_over(const DelzantPolytope& poly, const std::function<double(const Vec2&)>& fn, int order) {
  const auto g = gauss_legendre(order);
  const auto& v = poly.vertices();
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const Vec2 a = v[0], b = v[k], c = v[k + 1];
    const double jac = std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    // Duffy map: (s,t) in [0,1]^2 -> a + s(b-a) + s t (c-b), Jacobian s * jac
    for (int i = 0; i < order; ++i) {
      const double s = 0.5 * (g.nodes[i] + 1.0);
      for (int j = 0; j < order; ++j) {
        const double t = 0.5 * (g.nodes[j] + 1.0);
        const Vec2 x = a + s * (b - a) + (s * t) * (c - b);
        total += 0.25 * g.weights[i] * g.weights[j] * s * jac * fn(x);
      }
    }
  }
  return total;
}

std::vector<Vec2> clip_to_polytope(const std::vector<Vec2>& polygon, const DelzantPolytope& poly) {
  std::vector<Vec2> cur = polygon;
  for (const auto& f : poly.facets()) {
    if (cur.empty()) break;
    std::vector<Vec2> next;
    const std::size_t n = cur.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2& p = cur[k];
      const Vec2& q = cur[(k + 1) % n];
      const double lp = f.eval(p), lq = f.eval(q);
      if (lp >= 0.0) next.push_back(p);
      if ((lp >= 0.0) != (lq >= 0.0)) {
        const double t = lp / (lp - lq);
        next.push_back(p + t * (q - p));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

double polygon_area(const std::vector<Vec2>& p) {
  double a = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& u = p[k];
    const auto& w = p[(k + 1) % p.size()];
    a += u[0] * w[1] - w[0] * u[1];
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& p) {
  double cx = 0.0, cy = 0.0, a = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& u = p[k];
    const auto& w = p[(k + 1) % p.size()];
    const double c = u[0] * w[1] - w[0] * u[1];
    a += c;
    cx += (u[0] + w[0]) * c;
    cy += (u[1] + w[1]) * c;
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

namespace {

// Second moments of a polygon about the origin: {int x^2, int xy, int y^2}.
Mat2 polygon_second_moment(const std::vector<Vec2>& p) {
  double xx = 0.0, xy = 0.0, yy = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& u = p[k];
    const auto& w = p[(k + 1) % p.size()];
    const double c = u[0] * w[1] - w[0] * u[1];
    xx += c * (u[0] * u[0] + u[0] * w[0] + w[0] * w[0]);
    yy += c * (u[1] * u[1] + u[1] * w[1] + w[1] * w[1]);
    xy += c * (u[0] * w[1] + 2.0 * u[0] * u[1] + 2.0 * w[0] * w[1] + w[0] * u[1]);
  }
  return {{{xx / 12.0, xy / 24.0}, {xy / 24.0, yy / 12.0}}};
}

}  // namespace

InteriorQuadrature::InteriorQuadrature(const DelzantPolytope& poly, const Grid& grid) : grid_(&grid) {
  weight_.assign(grid.size(), 0.0);
  moment_.assign(grid.size(), Vec2{0.0, 0.0});
  moment2_.assign(grid.size(), Mat2{});
  const double h = grid.h();
  const int span = grid.n();
  for (int j = -1; j <= span + 1; ++j) {
    for (int i = -1; i <= span + 1; ++i) {
      const Vec2 c{grid.anchor()[0] + h * i, grid.anchor()[1] + h * j};
      const double hh = 0.5 * h;
      std::vector<Vec2> cell{{c[0] - hh, c[1] - hh}, {c[0] + hh, c[1] - hh}, {c[0] + hh, c[1] + hh}, {c[0] - hh, c[1] + hh}};
      const auto piece = clip_to_polytope(cell, poly);
      if (piece.size() < 3) continue;
      const double a = polygon_area(piece);
      if (a <= 0.0) continue;
      const Vec2 centroid = polygon_centroid(piece);
      long k = grid.find(i, j);
      if (k < 0) k = long(grid.nearest(centroid));
      weight_[k] += a;
      moment_[k] = moment_[k] + a * (centroid - grid.node(k).x);
      std::vector<Vec2> local(piece.size());
      for (std::size_t q = 0; q < piece.size(); ++q) local[q] = piece[q] - grid.node(k).x;
      const Mat2 m2 = polygon_second_moment(local);
      for (int r = 0; r < 2; ++r)
        for (int c2 = 0; c2 < 2; ++c2) moment2_[k][r][c2] += m2[r][c2];
    }
  }
}

double InteriorQuadrature::integrate(std::span<const double> values) const {
  const auto grad = lattice_gradient(*grid_, values);
  const auto hess = lattice_hessian(*grid_, values);
  double s = 0.0;
  for (std::size_t k = 0; k < weight_.size(); ++k) {
    const Mat2& m = moment2_[k];
    s += weight_[k] * values[k] + dot(moment_[k], grad[k]) +
         0.5 * (m[0][0] * hess[k][0][0] + 2.0 * m[0][1] * hess[k][0][1] + m[1][1] * hess[k][1][1]);
  }
  return s;
}

double InteriorQuadrature::integrate2(std::span<const double> values) const {
  const auto grad = lattice_gradient(*grid_, values);
  return integrate(values, grad);
}

double InteriorQuadrature::integrate(std::span<const double> values, std::span<const Vec2> gradients) const {
  double s = 0.0;
  for (std::size_t k = 0; k < weight_.size(); ++k) s += weight_[k] * values[k] + dot(moment_[k], gradients[k]);
  return s;
}

double InteriorQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weight_) s += w;
  return s;
}

}  // namespace calabi
