#include "calabi/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "calabi/parallel.hpp"

namespace calabi {

std::vector<double> rhs(const FlowState& state, const EnergyEvaluator& ev) {
  auto R = weighted_scalar_field(state.u, ev.cls());
  for (auto& r : R) r = ev.r_bar() - r;
  return R;
}

double cfl_dt(const SymplecticPotential& u, double sigma) {
  double wmax = 0.0;
  for (std::size_t k = 0; k < u.grid().size(); ++k) {
    const double lo = u.min_hessian_eigenvalue(k);
    if (!(lo > 0.0)) throw CurvatureUndefined("Hessian of the potential is not positive definite");
    wmax = std::max(wmax, 1.0 / lo);
  }
  const double h = u.grid().h();
  return sigma * std::pow(h, 4) / ((1.0 + wmax) * (1.0 + wmax));
}

FlowState initial_state(const SymplecticPotential& u) {
  if (u.provider() == DerivativeProvider::FiniteDifference) return {0.0, u, 0.0, 0};
  return {0.0, SymplecticPotential::sampled(u.polytope_ptr(), u.grid_ptr(), u.f(), u.canonical()), 0.0, 0};
}

namespace {

SymplecticPotential with_f(const SymplecticPotential& u, std::vector<double> f) {
  return SymplecticPotential::sampled(u.polytope_ptr(), u.grid_ptr(), std::move(f), u.canonical());
}

std::vector<double> axpy(const std::vector<double>& f, double a, const std::vector<double>& k) {
  std::vector<double> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i] + a * k[i];
  return r;
}

}  // namespace

FlowState step(const FlowState& state, const EnergyEvaluator& ev, const FlowPolicy& policy, StepInfo* info) {
  const double rbar = ev.r_bar();
  const auto R0 = weighted_scalar_field(state.u, ev.cls());
  const double ca0 = ev.calabi(R0);
  std::vector<double> k1(R0.size());
  for (std::size_t i = 0; i < R0.size(); ++i) k1[i] = rbar - R0[i];
  auto stage = [&](const SymplecticPotential& v) {
    auto R = weighted_scalar_field(v, ev.cls());
    for (auto& r : R) r = rbar - r;
    return R;
  };

  double dt = cfl_dt(state.u, policy.sigma);
  if (policy.dt_max > 0.0) dt = std::min(dt, policy.dt_max);
  const auto& f = state.u.f();
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt, dt *= 0.5) {
    try {
      const auto k2 = stage(with_f(state.u, axpy(f, 0.5 * dt, k1)));
      const auto k3 = stage(with_f(state.u, axpy(f, 0.5 * dt, k2)));
      const auto k4 = stage(with_f(state.u, axpy(f, dt, k3)));
      std::vector<double> fn(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) fn[i] = f[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      auto un = with_f(state.u, std::move(fn));
      const double ca1 = ev.calabi(weighted_scalar_field(un, ev.cls()));
      if (!(ca1 <= ca0 + 1e-18)) continue;
      if (info) *info = {attempt, dt, ca0, ca1};
      return {state.t + dt, std::move(un), dt, state.step_count + 1};
    } catch (const CurvatureUndefined&) {
    } catch (const DomainError&) {
    }
  }
  throw StiffnessError("step rejected " + std::to_string(policy.max_retries + 1) + " times at t = " + std::to_string(state.t),
                       state);
}

namespace {

Mat2 midpoint_hessian(const SymplecticPotential& u, std::size_t a, std::size_t b) {
  const auto& g = u.grid();
  const Vec2 mid = 0.5 * (g.node(a).x + g.node(b).x);
  const Mat2 fa = u.correction_jet(a).d2, fb = u.correction_jet(b).d2;
  Mat2 h{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) h[i][j] = 0.5 * (fa[i][j] + fb[i][j]);
  if (u.canonical()) {
    const Mat2 c = guillemin_part(u.polytope(), mid, 2).d2;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h[i][j] += c[i][j];
  }
  return h;
}

}  // namespace

std::vector<double> distance_field(const SymplecticPotential& u, const std::vector<std::size_t>& sources) {
  const auto& g = u.grid();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(g.size(), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto s : sources) {
    d[s] = 0.0;
    pq.push({0.0, s});
  }
  while (!pq.empty()) {
    const auto [dk, k] = pq.top();
    pq.pop();
    if (dk > d[k]) continue;
    const auto& idx = g.node(k).index;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const long q = g.find(idx[0] + di, idx[1] + dj);
        if (q < 0) continue;
        const Vec2 dx = g.node(std::size_t(q)).x - g.node(k).x;
        const Mat2 H = midpoint_hessian(u, k, std::size_t(q));
        const double len = std::sqrt(std::max(0.0, dot(dx, H * dx)));
        if (dk + len < d[q]) {
          d[q] = dk + len;
          pq.push({d[q], std::size_t(q)});
        }
      }
  }
  return d;
}

double riemannian_distance(const SymplecticPotential& u, const std::vector<std::size_t>& A,
                           const std::vector<std::size_t>& B) {
  if (A.empty() || B.empty()) throw DegenerateInput("distance between empty node sets");
  const auto d = distance_field(u, A);
  double best = std::numeric_limits<double>::infinity();
  for (auto b : B) best = std::min(best, d[b]);
  if (!std::isfinite(best)) throw Error("node sets are not connected in the grid graph");
  return best;
}

MonitorRecord monitor(const FlowState& state, const EnergyEvaluator& ev, double eps) {
  const auto& u = state.u;
  const auto& g = u.grid();
  MonitorRecord m;
  m.t = state.t;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (!(u.min_hessian_eigenvalue(k) > 0.0)) m.positivity_ok = false;
  if (!m.positivity_ok) return m;

  const auto rep = ev.report(u);
  m.calabi = rep.calabi;
  m.dissipation = rep.dissipation;
  m.l2_u = rep.l2_u;
  m.boundary_u = rep.boundary_u;
  m.invariant_j = rep.invariant_j;

  const auto region = eps_region(u.polytope(), g, eps);
  const auto inner = eps_region(u.polytope(), g, 2.0 * eps);
  m.min_hess_eig = std::numeric_limits<double>::infinity();
  for (auto k : region) {
    m.min_hess_eig = std::min(m.min_hess_eig, u.min_hessian_eigenvalue(k));
    const Jet j = u.correction_jet(k);
    for (int a = 0; a < 2; ++a) {
      m.max_d[0] = std::max(m.max_d[0], std::abs(j.d1[a]));
      for (int b = 0; b < 2; ++b) {
        m.max_d[1] = std::max(m.max_d[1], std::abs(j.d2[a][b]));
        for (int c = 0; c < 2; ++c) {
          m.max_d[2] = std::max(m.max_d[2], std::abs(j.d3[a][b][c]));
          for (int d = 0; d < 2; ++d) m.max_d[3] = std::max(m.max_d[3], std::abs(j.d4[a][b][c][d]));
        }
      }
    }
  }
  if (!region.empty()) {
    const auto ring = region_ring(g, region);
    const auto dist = distance_field(u, ring);
    if (!inner.empty()) {
      m.dist_eps = std::numeric_limits<double>::infinity();
      for (auto k : inner) m.dist_eps = std::min(m.dist_eps, dist[k]);
    }
    std::vector<double> q(region.size());
    parallel_for(region.size(), [&](std::size_t i) {
      const auto s = admissible_blocks(u, ev.cls(), region[i]);
      q[i] = std::sqrt(s.rm2_total) * dist[region[i]] * dist[region[i]];
    });
    for (double v : q) m.q_d2_max = std::max(m.q_d2_max, v);
  }
  return m;
}

void fill_rate_residuals(std::vector<MonitorRecord>& r, double floor) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (n < 2) {
      r[i].calabi_rate_residual = 0.0;
      continue;
    }
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    const double rate = (r[hi].calabi - r[lo].calabi) / (r[hi].t - r[lo].t);
    r[i].calabi_rate_residual = std::abs(rate + 2.0 * r[i].dissipation) / std::max(r[i].dissipation, floor);
  }
}

SymplecticPotential initial_potential(const RunConfig& cfg) {
  auto poly = std::make_shared<const DelzantPolytope>(cfg.polytope_path.empty() ? standard_triangle()
                                                                                 : load_polytope(cfg.polytope_path));
  const auto box = poly->bounding_box();
  const double h = (box[1][0] - box[0][0]) / cfg.N;
  auto grid = std::make_shared<const Grid>(*poly, cfg.N, cfg.delta_min_factor * h);
  if (cfg.perturbation == "none") return SymplecticPotential::analytic(poly, grid, Polynomial2{});
  if (cfg.perturbation == "bump")
    return SymplecticPotential::analytic(poly, grid,
                                         scaled(gaussian_bump(poly->centroid(), cfg.bump_width), cfg.amplitude));
  if (cfg.perturbation == "facet_bump")
    return SymplecticPotential::analytic(poly, grid, facet_bump(*poly) * cfg.amplitude);
  throw ConfigError("unknown perturbation kind '" + cfg.perturbation + "'");
}

RunResult run(const RunConfig& cfg, const FlowState& start, const RunHooks& hooks) {
  const EnergyEvaluator ev(start.u.polytope_ptr(), start.u.grid_ptr(), cfg.cls);
  RunResult res;
  FlowState state = start;
  auto record = [&] {
    res.records.push_back(monitor(state, ev, cfg.epsilon));
    if (hooks.on_record) hooks.on_record(state, res.records.back());
  };
  record();
  const MonitorRecord band = res.records.front();
  auto check_bands = [&](const MonitorRecord& m) {
    auto flag = [&](const std::string& what) {
      for (const auto& v : res.band_violations)
        if (v.rfind(what, 0) == 0) return;
      res.band_violations.push_back(what + " left its band at t = " + std::to_string(m.t));
    };
    if (!m.positivity_ok) flag("positivity");
    if (m.min_hess_eig < band.min_hess_eig / cfg.band_slack) flag("min_hess_eig");
    for (int k = 0; k < 4; ++k)
      if (m.max_d[k] > cfg.band_slack * band.max_d[k] + 1e-6) flag("max_d" + std::to_string(k + 1));
  };

  FlowPolicy policy;
  policy.sigma = cfg.cfl_sigma;
  long since_monitor = 0, since_snapshot = 0;
  bool recorded_last = true;
  while (state.t < cfg.t_end * (1.0 - 1e-12) && (cfg.max_steps <= 0 || state.step_count < cfg.max_steps)) {
    policy.dt_max = cfg.t_end - state.t;
    StepInfo info;
    try {
      state = step(state, ev, policy, &info);
    } catch (const StiffnessError& e) {
      res.stiff = true;
      res.error = e.what();
      break;
    }
    res.rejections += info.rejections;
    recorded_last = false;
    if (++since_monitor >= cfg.monitor_every) {
      since_monitor = 0;
      record();
      check_bands(res.records.back());
      recorded_last = true;
    }
    if (cfg.snapshot_every > 0 && ++since_snapshot >= cfg.snapshot_every) {
      since_snapshot = 0;
      if (hooks.on_snapshot) hooks.on_snapshot(state);
    }
  }
  if (!recorded_last) {
    record();
    check_bands(res.records.back());
  }
  if (hooks.on_snapshot) hooks.on_snapshot(state);
  fill_rate_residuals(res.records);
  res.final_state = state;
  return res;
}

RunResult run(const RunConfig& cfg, const RunHooks& hooks) {
  const auto u0 = initial_potential(cfg);
  cfg.cls.validate(u0.polytope());
  return run(cfg, initial_state(u0), hooks);
}

}  // namespace calabi
