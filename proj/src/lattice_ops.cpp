#include "calabi/lattice_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace calabi {

namespace {

struct FitStencil {
  std::vector<long> nodes;
  std::array<std::array<std::vector<double>, 5>, 5> w;  // w[a][b][i] multiplies f[nodes[i]]
  bool ok = false;
};

// Weights of the least-squares polynomial fit of the given degree over the nearest nodes;
// the partial [a][b] at node k is sum_i w[a][b][i] f[nodes[i]].
FitStencil build_fit(const Grid& g, std::size_t k, int degree) {
  const auto& idx = g.node(k).index;
  std::vector<std::array<int, 2>> exps;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exps.push_back({a, d - a});
  const std::size_t M = exps.size();
  const std::size_t want = 2 * M + 4;
  std::vector<std::pair<int, long>> near;
  for (int r = 2; r <= 12; ++r) {
    near.clear();
    for (int dj = -r; dj <= r; ++dj)
      for (int di = -r; di <= r; ++di) {
        const long q = g.find(idx[0] + di, idx[1] + dj);
        if (q >= 0) near.push_back({di * di + dj * dj, q});
      }
    if (near.size() >= want) break;
  }
  std::stable_sort(near.begin(), near.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  if (near.size() > want) near.resize(want);
  FitStencil st;
  if (near.size() < M) return st;
  const std::size_t P = near.size();
  std::vector<double> B(P * M);
  for (std::size_t i = 0; i < P; ++i) {
    const auto& qi = g.node(std::size_t(near[i].second)).index;
    const double s = qi[0] - idx[0], t = qi[1] - idx[1];
    for (std::size_t c = 0; c < M; ++c) B[i * M + c] = std::pow(s, exps[c][0]) * std::pow(t, exps[c][1]);
  }
  // [B^T B | I] -> [I | (B^T B)^-1] by Gauss-Jordan with partial pivoting
  const std::size_t W = 2 * M;
  std::vector<double> A(M * W, 0.0);
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < M; ++c) {
      double v = 0.0;
      for (std::size_t i = 0; i < P; ++i) v += B[i * M + r] * B[i * M + c];
      A[r * W + c] = v;
    }
    A[r * W + M + r] = 1.0;
  }
  for (std::size_t c = 0; c < M; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < M; ++r)
      if (std::abs(A[r * W + c]) > std::abs(A[piv * W + c])) piv = r;
    if (std::abs(A[piv * W + c]) < 1e-13) return st;
    for (std::size_t j = 0; j < W; ++j) std::swap(A[c * W + j], A[piv * W + j]);
    const double d = A[c * W + c];
    for (std::size_t j = 0; j < W; ++j) A[c * W + j] /= d;
    for (std::size_t r = 0; r < M; ++r) {
      if (r == c) continue;
      const double fac = A[r * W + c];
      if (fac == 0.0) continue;
      for (std::size_t j = 0; j < W; ++j) A[r * W + j] -= fac * A[c * W + j];
    }
  }
  const double h = g.h();
  for (std::size_t i = 0; i < P; ++i) st.nodes.push_back(near[i].second);
  for (std::size_t c = 0; c < M; ++c) {
    const int a = exps[c][0], b = exps[c][1];
    if (a + b > 4) continue;
    double fact = 1.0;
    for (int i = 2; i <= a; ++i) fact *= i;
    for (int i = 2; i <= b; ++i) fact *= i;
    const double scale = fact / std::pow(h, a + b);
    auto& w = st.w[a][b];
    w.assign(P, 0.0);
    for (std::size_t i = 0; i < P; ++i) {
      double v = 0.0;
      for (std::size_t r = 0; r < M; ++r) v += A[c * W + M + r] * B[i * M + r];
      w[i] = v * scale;
    }
  }
  st.ok = true;
  return st;
}

struct FitTable {
  std::vector<char> clean;
  std::vector<FitStencil> fit;
};

// Fit weights depend only on the node layout, so they are cached per layout signature.
const FitTable& fit_table(const Grid& g) {
  static std::mutex mu;
  static std::map<std::vector<double>, std::shared_ptr<FitTable>> cache;
  std::vector<double> key{double(g.n()), g.h(), g.delta_min(), g.anchor()[0], g.anchor()[1], double(g.size())};
  double sig = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) sig += (k + 1.0) * (g.node(k).index[0] * 7919.0 + g.node(k).index[1]);
  key.push_back(sig);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto t = std::make_shared<FitTable>();
  t->clean.resize(g.size());
  t->fit.resize(g.size());
  constexpr int rad = 2, deg = 5;
  for (std::size_t k = 0; k < g.size(); ++k) {
    t->clean[k] = lattice_clean(g, k, rad);
    if (!t->clean[k]) t->fit[k] = build_fit(g, k, deg);
  }
  if (cache.size() > 32) cache.clear();
  return *cache.emplace(key, t).first->second;
}

double apply_fit(const FitStencil& st, std::span<const double> f, int a, int b) {
  if (!st.ok) return 0.0;
  double v = 0.0;
  const auto& w = st.w[a][b];
  for (std::size_t i = 0; i < st.nodes.size(); ++i) v += w[i] * f[st.nodes[i]];
  return v;
}

// Up to four consecutive nodes starting at k walking in direction dir; returns count.
int walk(const Grid& g, std::size_t k, int axis, int dir, std::array<long, 4>& out) {
  out[0] = long(k);
  int n = 1;
  while (n < 4) {
    const long nx = g.neighbour(std::size_t(out[n - 1]), axis, dir);
    if (nx < 0) break;
    out[n++] = nx;
  }
  return n;
}

}  // namespace

std::vector<double> lattice_d1(const Grid& g, std::span<const double> f, int axis) {
  const double h = g.h();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const long l = g.neighbour(k, axis, -1), r = g.neighbour(k, axis, +1);
    if (l >= 0 && r >= 0) {
      out[k] = (f[r] - f[l]) / (2.0 * h);
      continue;
    }
    const int dir = l < 0 ? +1 : -1;
    std::array<long, 4> s{};
    const int n = walk(g, k, axis, dir, s);
    if (n >= 3)
      out[k] = dir * (-3.0 * f[s[0]] + 4.0 * f[s[1]] - f[s[2]]) / (2.0 * h);
    else
      out[k] = apply_fit(fit_table(g).fit[k], f, axis == 0 ? 1 : 0, axis == 0 ? 0 : 1);
  }
  return out;
}

std::vector<double> lattice_d2(const Grid& g, std::span<const double> f, int axis) {
  const double h2 = g.h() * g.h();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const long l = g.neighbour(k, axis, -1), r = g.neighbour(k, axis, +1);
    if (l >= 0 && r >= 0) {
      out[k] = (f[l] - 2.0 * f[k] + f[r]) / h2;
      continue;
    }
    std::array<long, 4> s{};
    const int n = walk(g, k, axis, l < 0 ? +1 : -1, s);
    if (n >= 4)
      out[k] = (2.0 * f[s[0]] - 5.0 * f[s[1]] + 4.0 * f[s[2]] - f[s[3]]) / h2;
    else
      out[k] = apply_fit(fit_table(g).fit[k], f, axis == 0 ? 2 : 0, axis == 0 ? 0 : 2);
  }
  return out;
}

namespace {

std::vector<double> axis_power(const Grid& g, std::vector<double> f, int axis, int order) {
  switch (order) {
    case 0: return f;
    case 1: return lattice_d1(g, f, axis);
    case 2: return lattice_d2(g, f, axis);
    case 3: return lattice_d1(g, lattice_d2(g, f, axis), axis);
    case 4: {
      auto s = lattice_d2(g, f, axis);
      return lattice_d2(g, s, axis);
    }
    default: throw Error("derivative order above 4 unsupported");
  }
}

}  // namespace

bool lattice_clean(const Grid& g, std::size_t k, int radius) {
  const auto& idx = g.node(k).index;
  for (int dj = -radius; dj <= radius; ++dj)
    for (int di = -radius; di <= radius; ++di)
      if (g.find(idx[0] + di, idx[1] + dj) < 0) return false;
  return true;
}

PartialTable lattice_fit_partials(const Grid& g, std::span<const double> f, std::size_t k, int degree) {
  const FitStencil st = build_fit(g, k, degree);
  PartialTable out{};
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) out[a][b] = apply_fit(st, f, a, b);
  return out;
}

std::vector<double> lattice_partial(const Grid& g, std::span<const double> f, int a, int b) {
  if (a < 0 || b < 0 || a + b > 4) throw Error("derivative order above 4 unsupported");
  std::vector<double> v(f.begin(), f.end());
  auto out = axis_power(g, axis_power(g, std::move(v), 0, a), 1, b);
  if (a + b >= 2) {
    const auto& t = fit_table(g);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (!t.clean[k]) out[k] = apply_fit(t.fit[k], f, a, b);
  }
  return out;
}

std::vector<Vec2> lattice_gradient(const Grid& g, std::span<const double> f) {
  const auto dx = lattice_d1(g, f, 0);
  const auto dy = lattice_d1(g, f, 1);
  std::vector<Vec2> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = {dx[k], dy[k]};
  return out;
}

std::vector<Mat2> lattice_hessian(const Grid& g, std::span<const double> f) {
  const auto xx = lattice_partial(g, f, 2, 0);
  const auto yy = lattice_partial(g, f, 0, 2);
  const auto xy = lattice_partial(g, f, 1, 1);
  std::vector<Mat2> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = {{{xx[k], xy[k]}, {xy[k], yy[k]}}};
  return out;
}

}  // namespace calabi
