// Acceptance suite: one PASS/FAIL line per criterion.
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "calabi/flow.hpp"
#include "calabi/parallel.hpp"
#include "calabi/quadrature.hpp"
#include "calabi/sobolev.hpp"
#include "common.hpp"
#include "perturbations.hpp"

using namespace calabi;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] criterion %2d  %-36s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

void timed(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = body();
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, title, pass, detail, s);
}

ClosedForm from_spec(const perturb::Spec& p) {
  ClosedForm f = closed_form(Polynomial2{});
  for (const auto& g : p.gauss) f = sum(f, scaled(gaussian_bump({g.cx, g.cy}, g.width), g.amp));
  for (const auto& m : p.mono) f = sum(f, closed_form(Polynomial2::monomial(m.a, m.b, m.coef)));
  return f;
}

AdmissibleClass regime_class() { return {{1.0, 1.0}, 12.0, -1.0, 1, -2}; }

// max |FD - analytic| of R_fiber and rm2_fiber over all nodes
double fd_error(const ClosedForm& f, int n) {
  auto p = testing::triangle();
  auto g = testing::grid(*p, n);
  const auto a = SymplecticPotential::analytic(p, g, f), s = SymplecticPotential::sampled(p, g, f);
  double e = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k) {
    e = std::max(e, std::abs(abreu_scalar(a, k) - abreu_scalar(s, k)));
    e = std::max(e, std::abs(fiber_riemann_norm(a, k) - fiber_riemann_norm(s, k)));
  }
  return e;
}

std::pair<bool, std::string> criterion1() {
  const auto u = testing::fs(48);
  double ea = 0.0;
  for (std::size_t k = 0; k < u.grid().size(); ++k) {
    ea = std::max(ea, std::abs(abreu_scalar(u, k) - 4.0));
    ea = std::max(ea, std::abs(fiber_riemann_norm(u, k) - 4.0 / 3.0));
  }
  auto p = testing::triangle();
  const auto fd = SymplecticPotential::sampled(p, testing::grid(*p, 96), Polynomial2{});
  double ef = 0.0;
  for (std::size_t k = 0; k < fd.grid().size(); ++k) {
    ef = std::max(ef, std::abs(abreu_scalar(fd, k) - 4.0));
    ef = std::max(ef, std::abs(fiber_riemann_norm(fd, k) - 4.0 / 3.0));
  }
  // FD of f = 0 is exact, so the convergence order is measured on FS + 0.01 bump
  const auto bump = scaled(gaussian_bump({0.0, 0.0}, 0.7), 0.01);
  const double e48 = fd_error(bump, 48), e96 = fd_error(bump, 96);
  const double ratio = e48 / e96;
  const bool pass = ea <= 1e-10 && ef <= 2e-3 && ratio >= 3.5 && ratio <= 4.5;
  return {pass, fmt("analytic N=48 err %.2e; FD N=96 err %.2e; perturbed FD err %.2e -> %.2e, ratio %.2f", ea, ef,
                    e48, e96, ratio)};
}

std::pair<bool, std::string> criterion2() {
  const auto u = testing::fs(48);
  const Mat2 H = u.jet_at({0.0, 0.0}).d2;
  const Mat2 W = inverse(H);
  double e = std::max({std::abs(H[0][0] - 1.0), std::abs(H[0][1] - 0.5), std::abs(H[1][0] - 0.5),
                       std::abs(H[1][1] - 1.0), std::abs(W[0][0] - 4.0 / 3.0), std::abs(W[0][1] + 2.0 / 3.0),
                       std::abs(W[1][1] - 4.0 / 3.0), std::abs(det(H) - 0.75)});
  const Mat2 Wc = fs_inverse_hessian({0.0, 0.0});
  e = std::max({e, std::abs(Wc[0][0] - 4.0 / 3.0), std::abs(Wc[0][1] + 2.0 / 3.0)});
  double vxx = 0.0, vxy = 0.0, vxx_x = 0.0;
  for (std::size_t k = 0; k < u.grid().size(); ++k) {
    const auto j = inverse_hessian_jet(u.evaluate(k, 3));
    vxx = std::max(vxx, std::abs(j.W[0][0]));
    vxy = std::max(vxy, std::abs(j.W[0][1]));
    vxx_x = std::max(vxx_x, std::abs(j.dW[0][0][0]));
  }
  const bool pass = e <= 1e-12 && vxx < 3.0 && vxy < 6.0 && vxx_x <= 2.0;
  return {pass, fmt("matrix err %.1e; max|v^xx| %.4f, max|v^xy| %.4f, max|v^xx_x| %.4f", e, vxx, vxy, vxx_x)};
}

std::pair<bool, std::string> criterion3() {
  auto p = testing::triangle();
  auto g = testing::grid(*p, 96);
  const InteriorQuadrature q(*p, *g);
  const double area = q.total_weight();
  double bdry = 0.0;
  for (const auto& s : boundary_quadrature(*p, 8)) bdry += s.weight;
  const double rbar = average_scalar(*p, AdmissibleClass::trivial());
  const double vol = ClassTopology::projective_plane().volume;
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> amp(0.002, 0.01), width(0.6, 1.0), c(-0.3, 0.3);
  double worst = std::abs(energy_report(SymplecticPotential::analytic(p, g, Polynomial2{}), AdmissibleClass::trivial())
                              .integral_r -
                          18.0);
  for (int i = 0; i < 5; ++i) {
    const auto f = scaled(gaussian_bump({c(rng), c(rng)}, width(rng)), amp(rng));
    const auto r = energy_report(SymplecticPotential::analytic(p, g, f), AdmissibleClass::trivial());
    worst = std::max(worst, std::abs(r.integral_r - 18.0));
  }
  const bool pass = std::abs(area - 4.5) <= 1e-6 && std::abs(bdry - 9.0) <= 1e-12 && std::abs(rbar - 4.0) <= 1e-6 &&
                    std::abs(vol - 9.0 * kPi2) <= 1e-6 && worst <= 1e-4;
  return {pass, fmt("area %.9f, |dP| %.12f, R_bar %.9f, vol/pi^2 %.9f, max |int R - 18| %.2e (FS + 5 random, N=96)",
                    area, bdry, rbar, vol / kPi2, worst)};
}

std::pair<bool, std::string> criterion4() {
  const auto t = ClassTopology::projective_plane();
  const auto c = certify(0.0, t);
  const double ey = std::abs(c.yamabe_lower - 12.0 * kPi) / (12.0 * kPi);
  const double ec = c.sobolev_bound ? std::abs(*c.sobolev_bound - 1.0) : 1.0;
  const double thr = eq_cs_threshold(t) / kPi2;
  bool mono = true;
  double prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto ci = certify(48.0 * kPi2 * i / 20.0, t);
    if (!ci.sobolev_bound || *ci.sobolev_bound < prev) mono = false;
    if (ci.sobolev_bound) prev = *ci.sobolev_bound;
  }
  const bool pass = ey <= 1e-12 && ec <= 1e-12 && std::abs(thr - 48.0) <= 1e-12 && mono;
  return {pass, fmt("Y_lb rel err %.1e, C_s rel err %.1e, threshold %.12f pi^2, monotone on 20 points: %s", ey, ec,
                    thr, mono ? "yes" : "no")};
}

std::pair<bool, std::string> criterion5() {
  const auto b = fiber_energy_bound(regime_class(), ClassTopology::projective_plane(-2));
  const bool pass = b.sup_rm2 < 0.5 + 4.0 / 3.0 && std::abs(b.fiber_rm2_bound - 11.55) <= 1e-10 &&
                    std::abs(b.ca_bound - 44.4 * kPi2) <= 1e-10 && b.certificate.eq_cs_satisfied &&
                    b.certificate.sobolev_bound && std::isfinite(*b.certificate.sobolev_bound);
  return {pass, fmt("sup|Rm|^2 %.6f < %.6f, int bound %.12f, Ca bound %.12f pi^2, eq_cs %s, C_s %.6f", b.sup_rm2,
                    0.5 + 4.0 / 3.0, b.fiber_rm2_bound, b.ca_bound / kPi2,
                    b.certificate.eq_cs_satisfied ? "passes" : "fails", b.certificate.sobolev_bound.value_or(NAN))};
}

std::pair<bool, std::string> criterion6() {
  RunConfig cfg;
  cfg.N = 48;
  cfg.t_end = 1.0;
  cfg.max_steps = 100;
  cfg.monitor_every = 10;
  const auto res = run(cfg);
  double fmax = 0.0, camax = 0.0;
  for (double v : res.final_state->u.f()) fmax = std::max(fmax, std::abs(v));
  for (const auto& m : res.records) camax = std::max(camax, m.calabi);
  const bool pass = res.final_state->step_count == 100 && fmax <= 1e-8 && camax <= 1e-12;
  return {pass, fmt("%ld steps, max|f| %.2e, max calabi %.2e", res.final_state->step_count, fmax, camax)};
}

struct FlowRun {
  RunResult res;
  std::vector<double> sobolev_ratio;
  std::vector<double> certificate;
};

FlowRun criterion7_run() {
  RunConfig cfg;
  cfg.N = 48;
  cfg.perturbation = "bump";
  cfg.amplitude = 0.05;
  cfg.t_end = 1.0;
  cfg.max_steps = 200;
  cfg.monitor_every = 1;
  FlowRun out;
  std::vector<TestFunction> fns;
  RunHooks hooks;
  hooks.on_record = [&](const FlowState& s, const MonitorRecord& m) {
    if (fns.empty()) fns = builtin_test_functions(s.u.polytope());
    out.sobolev_ratio.push_back(sobolev_inequality_test(s.u, cfg.cls, fns).worst);
    const auto c = certify(riemannian_calabi(m.calabi), ClassTopology::projective_plane());
    out.certificate.push_back(c.sobolev_bound.value_or(NAN));
  };
  out.res = run(cfg, hooks);
  return out;
}

std::pair<bool, std::string> criterion7(const FlowRun& fr) {
  const auto& r = fr.res.records;
  bool mono = true;
  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i].calabi > r[i - 1].calabi) mono = false;
  double res_max = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) res_max = std::max(res_max, r[i].calabi_rate_residual);
  std::vector<double> tail;
  for (std::size_t i = 1; i < r.size(); ++i) tail.push_back(r[i].calabi_rate_residual);
  std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
  const double res_median = tail.empty() ? 0.0 : tail[tail.size() / 2];
  double jdrift = 0.0;
  for (const auto& m : r) jdrift = std::max(jdrift, std::abs(m.invariant_j - r.front().invariant_j) / r.front().invariant_j);
  bool pos = true;
  for (const auto& m : r) pos = pos && m.positivity_ok;
  const long steps = fr.res.final_state ? fr.res.final_state->step_count : 0;
  const bool pass = steps == 200 && !fr.res.stiff && mono && res_max <= 0.05 && jdrift <= 0.01 && pos &&
                    fr.res.band_violations.empty();
  return {pass, fmt("%ld steps (%ld rejections); (a) monotone %s; (b) rate residual max %.4f, median %.4f; (c) J drift %.3f%%; "
                    "(d) positivity %s, band violations %zu; Ca %.4f -> %.4f",
                    steps, fr.res.rejections, mono ? "yes" : "no", res_max, res_median, 100.0 * jdrift, pos ? "ok" : "lost",
                    fr.res.band_violations.size(), r.front().calabi, r.back().calabi)};
}

std::pair<bool, std::string> criterion8() {
  auto p = testing::triangle();
  auto g = testing::grid(*p, 48);
  const auto u = SymplecticPotential::analytic(p, g, sum(scaled(gaussian_bump({0.1, -0.2}, 0.7), 0.03),
                                                         closed_form(Polynomial2::monomial(2, 1, 0.01))));
  const std::vector<AdmissibleClass> classes = {regime_class(), {{1.0, 0.0}, 6.0, 1.0, 1, 2}, {{0.5, 0.5}, 4.0, 0.0, 1, 0}};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 2.0);
  double worst = 0.0;
  for (const auto& cls : classes) {
    int n = 0;
    while (n < 50) {
      const Vec2 x{d(rng), d(rng)};
      if (p->min_facet_value(x) < 0.02) continue;
      ++n;
      const auto s = sample_at(u, cls, x);
      const Mat2 G = u.jet_at(x).d2;
      const double L = cls.affine(x);
      double tr = 2.0 * s.ric_00 / (2.0 * L);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) tr += 2.0 * (2.0 * G[i][j]) * s.ric_ij[i][j];
      worst = std::max(worst, std::abs(tr - s.R_weighted) / std::max(1.0, std::abs(s.R_weighted)));
    }
  }
  const auto fs = testing::fs(48);
  const auto cls = regime_class();
  double margin = INFINITY;
  for (std::size_t k = 0; k < g->size(); ++k)
    margin = std::min(margin, control_rm_rhs(cls, g->node(k).x) - admissible_blocks(fs, cls, k).rm2_total);
  const bool pass = worst <= 1e-6 && margin >= 0.0;
  return {pass, fmt("trace identity max rel err %.2e (150 points, 3 classes); Control_Rm min margin %.4f", worst, margin)};
}

bool same_3_digits(double a, double ref) {
  if (ref == 0.0) return std::abs(a) < 5e-4;
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(ref))) - 2.0);
  return std::abs(a - ref) <= 0.5 * unit;
}

std::pair<bool, std::string> criterion9(const std::string& oracle_path) {
  std::ifstream in(oracle_path);
  if (!in) return {false, "oracle file missing: " + oracle_path};
  const auto j = nlohmann::json::parse(in);
  const auto specs = perturb::oracle_set();
  if (j.at("potentials").size() != specs.size()) return {false, "oracle does not match the perturbation set"};
  auto p = testing::triangle();
  auto g = testing::grid(*p, j.at("grid_N").get<int>());
  const auto cls = regime_class();
  std::size_t total = 0, bad = 0;
  double worst = 0.0;
  std::string worst_at;
  for (std::size_t n = 0; n < specs.size(); ++n) {
    const auto u = SymplecticPotential::sampled(p, g, from_spec(specs[n]));
    for (const auto& pt : j["potentials"][n]["points"]) {
      const long k = g->find(pt["i"].get<int>(), pt["j"].get<int>());
      if (k < 0) return {false, "oracle point is not a grid node"};
      const double vals[3] = {abreu_scalar(u, k), fiber_riemann_norm(u, k), weighted_scalar(u, cls, k)};
      const char* keys[3] = {"R_fiber", "rm2_fiber", "R_weighted"};
      for (int q = 0; q < 3; ++q) {
        const double ref = pt[keys[q]].get<double>();
        ++total;
        if (!same_3_digits(vals[q], ref)) ++bad;
        const double rel = std::abs(vals[q] - ref) / std::abs(ref);
        if (rel > worst) {
          worst = rel;
          worst_at = std::string(specs[n].name) + " " + keys[q];
        }
      }
    }
  }
  return {bad == 0, fmt("%zu/%zu comparisons agree to 3 significant digits; worst rel err %.2e (%s)", total - bad,
                        total, worst, worst_at.c_str())};
}

std::pair<bool, std::string> criterion10(const FlowRun& fr) {
  if (fr.sobolev_ratio.empty()) return {false, "no records"};
  double worst_ratio = 0.0, min_c = INFINITY, worst_slack = INFINITY;
  bool ok = true;
  for (std::size_t i = 0; i < fr.sobolev_ratio.size(); ++i) {
    const double c = fr.certificate[i];
    if (!std::isfinite(c) || fr.sobolev_ratio[i] > c) ok = false;
    worst_ratio = std::max(worst_ratio, fr.sobolev_ratio[i]);
    min_c = std::min(min_c, c);
    worst_slack = std::min(worst_slack, c - fr.sobolev_ratio[i]);
  }
  return {ok, fmt("%zu records; max ratio %.4f, min certified C %.4f, min slack %.4f", fr.sobolev_ratio.size(),
                  worst_ratio, min_c, worst_slack)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string oracle = argc > 1 ? argv[1] : "oracle.json";
  set_threads(0);
  timed(1, "FS golden values", criterion1);
  timed(2, "Hessian golden matrices", criterion2);
  timed(3, "class constants", criterion3);
  timed(4, "Yamabe/Sobolev chain", criterion4);
  timed(5, "fiber energy pipeline", criterion5);
  timed(6, "flow fixed point", criterion6);
  FlowRun fr;
  timed(7, "gradient-flow properties", [&] {
    fr = criterion7_run();
    return criterion7(fr);
  });
  timed(8, "curvature self-consistency", criterion8);
  timed(9, "oracle equivalence", [&] { return criterion9(oracle); });
  timed(10, "Sobolev inequality corroboration", [&] { return criterion10(fr); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
