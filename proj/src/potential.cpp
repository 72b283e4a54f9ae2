#include "calabi/potential.hpp"

#include <algorithm>
#include <cmath>

#include "calabi/lattice_ops.hpp"

namespace calabi {

Jet& Jet::operator+=(const Jet& o) {
  value += o.value;
  for (int i = 0; i < 2; ++i) {
    d1[i] += o.d1[i];
    for (int j = 0; j < 2; ++j) {
      d2[i][j] += o.d2[i][j];
      for (int k = 0; k < 2; ++k) {
        d3[i][j][k] += o.d3[i][j][k];
        for (int l = 0; l < 2; ++l) d4[i][j][k][l] += o.d4[i][j][k][l];
      }
    }
  }
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }

Jet operator*(double s, Jet a) {
  a.value *= s;
  for (int i = 0; i < 2; ++i) {
    a.d1[i] *= s;
    for (int j = 0; j < 2; ++j) {
      a.d2[i][j] *= s;
      for (int k = 0; k < 2; ++k) {
        a.d3[i][j][k] *= s;
        for (int l = 0; l < 2; ++l) a.d4[i][j][k][l] *= s;
      }
    }
  }
  return a;
}

Jet shift_jet(const Jet& j, const Vec2& d) {
  Jet r = j;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        r.d3[i][k][l] = j.d3[i][k][l];
        for (int m = 0; m < 2; ++m) r.d3[i][k][l] += j.d4[i][k][l][m] * d[m];
      }
    }
  }
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      double s = j.d2[i][k];
      for (int l = 0; l < 2; ++l) {
        s += j.d3[i][k][l] * d[l];
        for (int m = 0; m < 2; ++m) s += 0.5 * j.d4[i][k][l][m] * d[l] * d[m];
      }
      r.d2[i][k] = s;
    }
  for (int i = 0; i < 2; ++i) {
    double s = j.d1[i];
    for (int k = 0; k < 2; ++k) {
      s += j.d2[i][k] * d[k];
      for (int l = 0; l < 2; ++l) {
        s += 0.5 * j.d3[i][k][l] * d[k] * d[l];
        for (int m = 0; m < 2; ++m) s += j.d4[i][k][l][m] * d[k] * d[l] * d[m] / 6.0;
      }
    }
    r.d1[i] = s;
  }
  double v = j.value;
  for (int i = 0; i < 2; ++i) {
    v += j.d1[i] * d[i];
    for (int k = 0; k < 2; ++k) {
      v += 0.5 * j.d2[i][k] * d[i] * d[k];
      for (int l = 0; l < 2; ++l) {
        v += j.d3[i][k][l] * d[i] * d[k] * d[l] / 6.0;
        for (int m = 0; m < 2; ++m) v += j.d4[i][k][l][m] * d[i] * d[k] * d[l] * d[m] / 24.0;
      }
    }
  }
  r.value = v;
  return r;
}

// ---------------------------------------------------------------------------

void Polynomial2::resize(int deg) {
  if (deg <= degree()) return;
  const int old = degree();
  coef_.resize(deg + 1);
  for (int a = 0; a <= deg; ++a) coef_[a].resize(deg + 1 - a, 0.0);
  (void)old;
}

Polynomial2 Polynomial2::constant(double c) { return monomial(0, 0, c); }

Polynomial2 Polynomial2::monomial(int a, int b, double c) {
  Polynomial2 p;
  p.resize(a + b);
  p.coef_[a][b] = c;
  return p;
}

Polynomial2 Polynomial2::affine(double cx, double cy, double c0) {
  return monomial(1, 0, cx) + monomial(0, 1, cy) + constant(c0);
}

double Polynomial2::coefficient(int a, int b) const {
  if (a < 0 || b < 0 || a + b > degree()) return 0.0;
  return coef_[a][b];
}

Polynomial2 Polynomial2::operator+(const Polynomial2& o) const {
  Polynomial2 r = *this;
  r.resize(std::max(degree(), o.degree()));
  for (int a = 0; a <= o.degree(); ++a)
    for (int b = 0; a + b <= o.degree(); ++b) r.coef_[a][b] += o.coef_[a][b];
  return r;
}

Polynomial2 Polynomial2::operator*(const Polynomial2& o) const {
  Polynomial2 r;
  if (degree() < 0 || o.degree() < 0) return r;
  r.resize(degree() + o.degree());
  for (int a = 0; a <= degree(); ++a)
    for (int b = 0; a + b <= degree(); ++b)
      for (int c = 0; c <= o.degree(); ++c)
        for (int d = 0; c + d <= o.degree(); ++d) r.coef_[a + c][b + d] += coef_[a][b] * o.coef_[c][d];
  return r;
}

Polynomial2 Polynomial2::operator*(double s) const {
  Polynomial2 r = *this;
  for (auto& row : r.coef_)
    for (auto& c : row) c *= s;
  return r;
}

Jet Polynomial2::jet(const Vec2& x) const {
  Jet j;
  const int deg = degree();
  if (deg < 0) return j;
  // falling factorial powers: D^i x^a = a!/(a-i)! x^(a-i)
  auto dpow = [](double t, int a, int i) {
    if (i > a) return 0.0;
    double c = 1.0;
    for (int k = 0; k < i; ++k) c *= double(a - k);
    return c * std::pow(t, a - i);
  };
  double part[5][5] = {};
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; a + b <= deg; ++b) {
      const double c = coef_[a][b];
      if (c == 0.0) continue;
      for (int i = 0; i <= 4; ++i)
        for (int k = 0; i + k <= 4; ++k) part[i][k] += c * dpow(x[0], a, i) * dpow(x[1], b, k);
    }
  j.value = part[0][0];
  for (int i = 0; i < 2; ++i) {
    j.d1[i] = part[i == 0][i == 1];
    for (int k = 0; k < 2; ++k) {
      const int nx2 = (i == 0) + (k == 0);
      j.d2[i][k] = part[nx2][2 - nx2];
      for (int l = 0; l < 2; ++l) {
        const int nx3 = nx2 + (l == 0);
        j.d3[i][k][l] = part[nx3][3 - nx3];
        for (int m = 0; m < 2; ++m) {
          const int nx4 = nx3 + (m == 0);
          j.d4[i][k][l][m] = part[nx4][4 - nx4];
        }
      }
    }
  }
  return j;
}

ClosedForm closed_form(Polynomial2 p) {
  return [p = std::move(p)](const Vec2& x) { return p.jet(x); };
}

ClosedForm scaled(ClosedForm f, double s) {
  return [f = std::move(f), s](const Vec2& x) { return s * f(x); };
}

ClosedForm sum(ClosedForm a, ClosedForm b) {
  return [a = std::move(a), b = std::move(b)](const Vec2& x) { return a(x) + b(x); };
}

ClosedForm gaussian_bump(const Vec2& center, double width) {
  if (!(width > 0.0)) throw DegenerateInput("bump width must be positive");
  return [center, width](const Vec2& x) {
    // 1-D factors: g^(n)(d) = (-1/w)^n He_n(d/w) g(d)
    double part[2][5];
    for (int a = 0; a < 2; ++a) {
      const double t = (x[a] - center[a]) / width;
      const double g = std::exp(-0.5 * t * t);
      const double he[5] = {1.0, t, t * t - 1.0, t * t * t - 3.0 * t, t * t * t * t - 6.0 * t * t + 3.0};
      double sgn = 1.0;
      for (int n = 0; n <= 4; ++n, sgn *= -1.0 / width) part[a][n] = sgn * he[n] * g;
    }
    auto P = [&](int nx, int ny) { return part[0][nx] * part[1][ny]; };
    Jet j;
    j.value = P(0, 0);
    for (int i = 0; i < 2; ++i) {
      j.d1[i] = P(i == 0, i == 1);
      for (int k = 0; k < 2; ++k) {
        const int x2 = (i == 0) + (k == 0);
        j.d2[i][k] = P(x2, 2 - x2);
        for (int l = 0; l < 2; ++l) {
          const int x3 = x2 + (l == 0);
          j.d3[i][k][l] = P(x3, 3 - x3);
          for (int m = 0; m < 2; ++m) {
            const int x4 = x3 + (m == 0);
            j.d4[i][k][l][m] = P(x4, 4 - x4);
          }
        }
      }
    }
    return j;
  };
}

Polynomial2 facet_bump(const DelzantPolytope& poly) {
  Polynomial2 prod = Polynomial2::constant(1.0);
  for (const auto& f : poly.facets()) prod = prod * Polynomial2::affine(f.normal[0], f.normal[1], f.offset);
  const double c = prod(poly.centroid());
  prod = prod * (1.0 / c);
  return prod * prod;
}

// ---------------------------------------------------------------------------

Jet guillemin_part(const DelzantPolytope& poly, const Vec2& x, int order) {
  if (order < 0 || order > 4) throw Error("derivative order above 4 unsupported");
  Jet j;
  for (const auto& f : poly.facets()) {
    const double l = f.eval(x);
    if (!(l > 0.0)) throw DomainError("point is not in the interior of the polytope");
    const Vec2 v = f.normal_vec();
    const double ln = std::log(l);
    j.value += 0.5 * l * ln;
    if (order < 1) continue;
    const double inv = 1.0 / l;
    for (int a = 0; a < 2; ++a) {
      j.d1[a] += 0.5 * v[a] * (ln + 1.0);
      if (order < 2) continue;
      for (int b = 0; b < 2; ++b) {
        j.d2[a][b] += 0.5 * v[a] * v[b] * inv;
        if (order < 3) continue;
        for (int c = 0; c < 2; ++c) {
          j.d3[a][b][c] += -0.5 * v[a] * v[b] * v[c] * inv * inv;
          if (order < 4) continue;
          for (int d = 0; d < 2; ++d) j.d4[a][b][c][d] += v[a] * v[b] * v[c] * v[d] * inv * inv * inv;
        }
      }
    }
  }
  return j;
}

Mat2 fs_inverse_hessian(const Vec2& p) {
  const double x = p[0], y = p[1];
  if (!(1.0 + x > 0.0 && 1.0 + y > 0.0 && 1.0 - x - y > 0.0))
    throw DomainError("point is not in the interior of the standard triangle");
  const double c = 2.0 / 3.0;
  return {{{c * (2.0 - x) * (1.0 + x), -c * (1.0 + x) * (1.0 + y)},
           {-c * (1.0 + x) * (1.0 + y), c * (2.0 - y) * (1.0 + y)}}};
}

// ---------------------------------------------------------------------------

SymplecticPotential SymplecticPotential::analytic(std::shared_ptr<const DelzantPolytope> poly,
                                                  std::shared_ptr<const Grid> grid, ClosedForm correction,
                                                  bool canonical) {
  SymplecticPotential u;
  u.poly_ = std::move(poly);
  u.grid_ = std::move(grid);
  u.provider_ = DerivativeProvider::Analytic;
  u.canonical_ = canonical;
  u.f_.resize(u.grid_->size());
  for (std::size_t k = 0; k < u.grid_->size(); ++k) u.f_[k] = correction(u.grid_->node(k).x).value;
  u.closed_ = std::move(correction);
  return u;
}

SymplecticPotential SymplecticPotential::analytic(std::shared_ptr<const DelzantPolytope> poly,
                                                  std::shared_ptr<const Grid> grid, const Polynomial2& correction,
                                                  bool canonical) {
  return analytic(std::move(poly), std::move(grid), closed_form(correction), canonical);
}

SymplecticPotential SymplecticPotential::sampled(std::shared_ptr<const DelzantPolytope> poly,
                                                 std::shared_ptr<const Grid> grid, std::vector<double> f,
                                                 bool canonical) {
  if (f.size() != grid->size()) throw Error("correction field size does not match the grid");
  SymplecticPotential u;
  u.poly_ = std::move(poly);
  u.grid_ = std::move(grid);
  u.provider_ = DerivativeProvider::FiniteDifference;
  u.canonical_ = canonical;
  u.f_ = std::move(f);
  u.build_fd();
  return u;
}

SymplecticPotential SymplecticPotential::sampled(std::shared_ptr<const DelzantPolytope> poly,
                                                 std::shared_ptr<const Grid> grid, const ClosedForm& correction,
                                                 bool canonical) {
  std::vector<double> f(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) f[k] = correction(grid->node(k).x).value;
  return sampled(std::move(poly), std::move(grid), std::move(f), canonical);
}

SymplecticPotential SymplecticPotential::sampled(std::shared_ptr<const DelzantPolytope> poly,
                                                 std::shared_ptr<const Grid> grid, const Polynomial2& correction,
                                                 bool canonical) {
  return sampled(std::move(poly), std::move(grid), closed_form(correction), canonical);
}

void SymplecticPotential::build_fd() {
  const Grid& g = *grid_;
  std::vector<double> part[5][5];
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      if (a + b > 0) part[a][b] = lattice_partial(g, f_, a, b);
  f_jets_.assign(g.size(), Jet{});
  for (std::size_t n = 0; n < g.size(); ++n) {
    Jet& j = f_jets_[n];
    j.value = f_[n];
    for (int i = 0; i < 2; ++i) {
      j.d1[i] = part[i == 0][i == 1][n];
      for (int k = 0; k < 2; ++k) {
        const int x2 = (i == 0) + (k == 0);
        j.d2[i][k] = part[x2][2 - x2][n];
        for (int l = 0; l < 2; ++l) {
          const int x3 = x2 + (l == 0);
          j.d3[i][k][l] = part[x3][3 - x3][n];
          for (int m = 0; m < 2; ++m) {
            const int x4 = x3 + (m == 0);
            j.d4[i][k][l][m] = part[x4][4 - x4][n];
          }
        }
      }
    }
  }
}

Jet SymplecticPotential::correction_jet(std::size_t node) const {
  if (closed_) return closed_(grid_->node(node).x);
  return f_jets_.at(node);
}

Jet SymplecticPotential::evaluate(std::size_t node, int order) const {
  if (order < 0 || order > 4) throw Error("derivative order above 4 unsupported");
  Jet j = correction_jet(node);
  if (canonical_) j += guillemin_part(*poly_, grid_->node(node).x, order);
  return j;
}

Jet SymplecticPotential::correction_jet_at(const Vec2& x) const {
  if (closed_) return closed_(x);
  const std::size_t k = grid_->nearest(x);
  return shift_jet(f_jets_[k], x - grid_->node(k).x);
}

Jet SymplecticPotential::jet_at(const Vec2& x) const {
  if (!(poly_->min_facet_value(x) > 0.0)) throw DomainError("point is not in the interior of the polytope");
  Jet j = correction_jet_at(x);
  if (canonical_) j += guillemin_part(*poly_, x, 4);
  return j;
}

double SymplecticPotential::value_at_closed(const Vec2& x) const {
  double v = correction_jet_at(x).value;
  if (canonical_) {
    for (const auto& f : poly_->facets()) {
      const double l = f.eval(x);
      if (l < -1e-12) throw DomainError("point is outside the polytope");
      if (l > 0.0) v += 0.5 * l * std::log(l);
    }
  }
  return v;
}

double SymplecticPotential::min_hessian_eigenvalue(std::size_t node) const {
  return sym_eigenvalues(evaluate(node, 2).d2)[0];
}

void SymplecticPotential::require_positive(std::size_t node) const {
  const auto ev = sym_eigenvalues(evaluate(node, 2).d2);
  if (!(ev[0] > 1e-12 * std::abs(ev[1])) || !(ev[1] > 0.0))
    throw CurvatureUndefined("Hessian of the potential is not positive definite at node " + std::to_string(node));
}

// ---------------------------------------------------------------------------

ComplexDual legendre_dual(const SymplecticPotential& u, const Vec2& x) {
  const Jet j = u.jet_at(x);
  if (!(sym_eigenvalues(j.d2)[0] > 0.0)) throw CurvatureUndefined("Hessian not positive definite");
  return {j.d1, dot(x, j.d1) - j.value};
}

LegendrePreimage legendre_inverse(const SymplecticPotential& u, const Vec2& xi, std::optional<Vec2> start,
                                  double tol, int max_iter) {
  const auto& poly = u.polytope();
  Vec2 x = start.value_or(poly.centroid());
  auto residual = [&](const Vec2& p) { return u.jet_at(p).d1 - xi; };
  Vec2 r = residual(x);
  double rn = norm(r);
  for (int it = 0; it < max_iter; ++it) {
    if (rn <= tol * std::max(1.0, norm(xi))) return {x, u.jet_at(x).value, it};
    const Jet j = u.jet_at(x);
    const Vec2 step = inverse(j.d2) * r;
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Vec2 cand = x - t * step;
      if (!(poly.min_facet_value(cand) > 0.0)) continue;
      const Vec2 rc = residual(cand);
      if (norm(rc) < (1.0 - 1e-4 * t) * rn || ls == 59) {
        x = cand;
        r = rc;
        rn = norm(rc);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (rn <= tol * std::max(1.0, norm(xi)) * 10.0) return {x, u.jet_at(x).value, max_iter};
  throw NumericError("Legendre inversion did not converge (residual " + std::to_string(rn) + ")", rn);
}

}  // namespace calabi
