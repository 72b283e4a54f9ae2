// Independent reference values for the curvature operators. Works from point values of the
// closed-form potential only: nested central differences at steps 3/512, 3/256 and 3/128,
// combined by two-level Richardson extrapolation. Does not link the library.
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "../perturbations.hpp"

using Real = long double;
using Fn = std::function<Real(Real, Real)>;

namespace {

struct Sym {
  Real xx, xy, yy;
};

Fn potential(const perturb::Spec& p) {
  return [p](Real x, Real y) {
    const Real l[3] = {x + 1, y + 1, 1 - x - y};
    Real u = 0;
    for (Real li : l) u += 0.5L * li * std::log(li);
    for (const auto& g : p.gauss) {
      const Real dx = x - g.cx, dy = y - g.cy;
      u += g.amp * std::exp(-(dx * dx + dy * dy) / (2 * Real(g.width) * g.width));
    }
    for (const auto& m : p.mono) u += m.coef * std::pow(x, m.a) * std::pow(y, m.b);
    return u;
  };
}

Sym hessian(const Fn& u, Real x, Real y, Real s) {
  const Real c = u(x, y);
  return {(u(x + s, y) - 2 * c + u(x - s, y)) / (s * s),
          (u(x + s, y + s) - u(x + s, y - s) - u(x - s, y + s) + u(x - s, y - s)) / (4 * s * s),
          (u(x, y + s) - 2 * c + u(x, y - s)) / (s * s)};
}

Sym inv(const Sym& h) {
  const Real d = h.xx * h.yy - h.xy * h.xy;
  return {h.yy / d, -h.xy / d, h.xx / d};
}

// second partials (xx, xy, yy) of a scalar field g
Sym second(const std::function<Real(Real, Real)>& g, Real x, Real y, Real s) {
  const Real c = g(x, y);
  return {(g(x + s, y) - 2 * c + g(x - s, y)) / (s * s),
          (g(x + s, y + s) - g(x + s, y - s) - g(x - s, y + s) + g(x - s, y - s)) / (4 * s * s),
          (g(x, y + s) - 2 * c + g(x, y - s)) / (s * s)};
}

struct Values {
  Real R, rm2, Rw;
};

Values evaluate(const Fn& u, Real x, Real y, Real s) {
  auto W = [&](int comp) {
    return [&, comp](Real a, Real b) {
      const Sym w = inv(hessian(u, a, b, s));
      return comp == 0 ? w.xx : comp == 1 ? w.xy : w.yy;
    };
  };
  const Sym dxx = second(W(0), x, y, s), dxy = second(W(1), x, y, s), dyy = second(W(2), x, y, s);
  Values v;
  v.R = -(dxx.xx + 2 * dxy.xy + dyy.yy);
  // D[i][j] = second-derivative matrix of W_ij
  const Sym D[2][2] = {{dxx, dxy}, {dxy, dyy}};
  auto comp = [](const Sym& m, int k, int l) { return k == 0 && l == 0 ? m.xx : (k == 1 && l == 1 ? m.yy : m.xy); };
  Real q = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) q += comp(D[i][j], k, l) * comp(D[k][l], i, j);
  v.rm2 = q / 4;
  // class p = (1, 1), c_S = 12, Scal_S = -1, m = 1
  auto L = [](Real a, Real b) { return a + b + 12; };
  auto PW = [&](int c) { return [&, c](Real a, Real b) { return L(a, b) * W(c)(a, b); }; };
  const Sym pxx = second(PW(0), x, y, s), pxy = second(PW(1), x, y, s), pyy = second(PW(2), x, y, s);
  v.Rw = -1 / L(x, y) - (pxx.xx + 2 * pxy.xy + pyy.yy) / L(x, y);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "oracle.json";
  const int N = 48;
  const Real h = 3.0L / N;
  const Real s1 = 3.0L / 512, s2 = 3.0L / 256, s3 = 3.0L / 128;
  nlohmann::json j;
  j["grid_N"] = N;
  j["steps"] = {double(s1), double(s2), double(s3)};
  j["class"] = {{"p", {1, 1}}, {"c_S", 12}, {"scal_S", -1}, {"m", 1}};
  j["potentials"] = nlohmann::json::array();
  for (const auto& p : perturb::oracle_set()) {
    const Fn u = potential(p);
    nlohmann::json pts = nlohmann::json::array();
    for (int i = 0; i <= N; i += 5)
      for (int k = 0; k <= N; k += 5) {
        const Real x = -1 + i * h, y = -1 + k * h;
        const Real dist = std::min({x + 1, y + 1, (1 - x - y) / std::sqrt(2.0L)});
        if (dist < 0.25) continue;
        const Values a = evaluate(u, x, y, s1), b = evaluate(u, x, y, s2), c = evaluate(u, x, y, s3);
        // errors are even in the step: cancel the s^2 and s^4 terms
        auto rich = [](Real f1, Real f2, Real f4) { return double((64 * f1 - 20 * f2 + f4) / 45); };
        pts.push_back({{"i", i},
                       {"j", k},
                       {"x", double(x)},
                       {"y", double(y)},
                       {"R_fiber", rich(a.R, b.R, c.R)},
                       {"rm2_fiber", rich(a.rm2, b.rm2, c.rm2)},
                       {"R_weighted", rich(a.Rw, b.Rw, c.Rw)}});
      }
    j["potentials"].push_back({{"name", p.name}, {"points", pts}});
    std::printf("oracle %-16s %zu points\n", p.name, pts.size());
  }
  std::ofstream(out) << j.dump(1) << '\n';
  return 0;
}
