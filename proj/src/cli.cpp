#include "calabi/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "calabi/io.hpp"
#include "calabi/parallel.hpp"

namespace calabi {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

BaselineCheck check(std::string name, double value, double expected, double tol, bool relative = false) {
  const double err = std::abs(value - expected) / (relative ? std::abs(expected) : 1.0);
  return {std::move(name), value, expected, tol, err <= tol};
}

void print_table(const std::vector<BaselineCheck>& checks) {
  std::printf("%-34s %22s %22s %10s  %s\n", "check", "value", "expected", "tol", "result");
  for (const auto& c : checks)
    std::printf("%-34s %22.15g %22.15g %10.1e  %s\n", c.name.c_str(), c.value, c.expected, c.tolerance,
                c.pass ? "PASS" : "FAIL");
}

struct Globals {
  bool json = false;
  bool emit_plots = false;
  int threads = 0;
  std::string fault;
};

void emit(const Globals& g, const json& j) {
  if (g.json)
    std::cout << j.dump(2) << '\n';
  else
    for (const auto& [k, v] : j.items()) std::cout << k << ": " << v.dump() << '\n';
}

int cmd_baseline(const Globals& g) {
  const auto checks = baseline_checks(g.fault);
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.pass;
  if (g.json) {
    json arr = json::array();
    for (const auto& c : checks)
      arr.push_back({{"name", c.name}, {"value", c.value}, {"expected", c.expected}, {"tolerance", c.tolerance},
                     {"pass", c.pass}});
    std::cout << json{{"checks", arr}, {"pass", ok}}.dump(2) << '\n';
  } else {
    print_table(checks);
    for (const auto& c : checks)
      if (!c.pass)
        std::printf("FAILED %s: value %.17g expected %.17g (diff %.3e)\n", c.name.c_str(), c.value, c.expected,
                    c.value - c.expected);
    std::printf("%s\n", ok ? "all checks passed" : "baseline FAILED");
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_flow(const Globals& g, const std::string& config_path) {
  const RunConfig cfg = load_run_config(config_path);
  fs::create_directories(cfg.out_dir);
  long snap = 0;
  RunHooks hooks;
  hooks.on_snapshot = [&](const FlowState& s) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06ld.csv", snap++);
    write_snapshot((fs::path(cfg.out_dir) / name).string(), s.u, s.t);
  };
  if (cfg.verbosity > 0)
    hooks.on_record = [](const FlowState& s, const MonitorRecord& r) {
      std::fprintf(stderr, "step %ld t %.6e calabi %.10e\n", s.step_count, r.t, r.calabi);
    };
  const RunResult res = run(cfg, hooks);
  {
    MonitorWriter mw((fs::path(cfg.out_dir) / "monitor.csv").string());
    for (const auto& r : res.records) mw.write(r);
  }
  if (g.emit_plots) write_plot_files((fs::path(cfg.out_dir) / "plots").string(), res.records);

  json out;
  if (res.final_state) {
    const EnergyEvaluator ev(res.final_state->u.polytope_ptr(), res.final_state->u.grid_ptr(), cfg.cls);
    out["final"] = to_json(ev.report(res.final_state->u));
    out["t"] = res.final_state->t;
    out["steps"] = res.final_state->step_count;
  }
  out["records"] = res.records.size();
  out["rejections"] = res.rejections;
  out["band_violations"] = res.band_violations;
  out["stiff"] = res.stiff;
  if (!res.error.empty()) out["error"] = res.error;
  emit(g, out);
  for (const auto& v : res.band_violations) std::fprintf(stderr, "warning: %s\n", v.c_str());
  if (res.stiff) {
    std::fprintf(stderr, "error: %s\n", res.error.c_str());
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_curvature(const Globals& g, const std::string& snapshot, const std::vector<double>& at,
                  const std::string& class_path) {
  const Snapshot s = read_snapshot(snapshot);
  const AdmissibleClass cls = class_path.empty() ? AdmissibleClass::trivial() : load_class(class_path);
  cls.validate(s.u.polytope());
  emit(g, to_json(sample_at(s.u, cls, {at[0], at[1]})));
  return kExitOk;
}

int cmd_energy(const Globals& g, const std::string& snapshot, const std::string& class_path) {
  const Snapshot s = read_snapshot(snapshot);
  const AdmissibleClass cls = class_path.empty() ? AdmissibleClass::trivial() : load_class(class_path);
  cls.validate(s.u.polytope());
  json j = to_json(energy_report(s.u, cls));
  j["t"] = s.t;
  emit(g, j);
  return kExitOk;
}

int cmd_sobolev(const Globals& g, double ca, const std::string& class_path) {
  const AdmissibleClass cls = class_path.empty() ? AdmissibleClass::trivial() : load_class(class_path);
  emit(g, to_json(certify(ca, ClassTopology::projective_plane(cls.chi_S))));
  return kExitOk;
}

int cmd_fiber(const Globals& g, const std::string& class_path) {
  const AdmissibleClass cls = load_class(class_path);
  emit(g, to_json(fiber_energy_bound(cls, ClassTopology::projective_plane(cls.chi_S))));
  return kExitOk;
}

}  // namespace

std::vector<BaselineCheck> baseline_checks(const std::string& fault) {
  if (!fault.empty() && fault != "fs_inverse_hessian_sign") throw ConfigError("unknown fault '" + fault + "'");
  const double sign = fault == "fs_inverse_hessian_sign" ? -1.0 : 1.0;
  auto fs_w = [&](const Vec2& x) {
    Mat2 w = fs_inverse_hessian(x);
    for (auto& row : w)
      for (auto& v : row) v *= sign;
    return w;
  };

  auto poly = std::make_shared<const DelzantPolytope>(standard_triangle());
  auto grid = std::make_shared<const Grid>(*poly, 48, 0.5 * 3.0 / 48);
  const auto u = SymplecticPotential::analytic(poly, grid, Polynomial2{});
  const auto samples = curvature_field(u, AdmissibleClass::trivial());
  double r_err = 0.0, rm_err = 0.0, w_err = 0.0;
  for (std::size_t k = 0; k < grid->size(); ++k) {
    r_err = std::max(r_err, std::abs(samples[k].R_fiber - 4.0));
    rm_err = std::max(rm_err, std::abs(samples[k].rm2_fiber - 4.0 / 3.0));
    w_err = std::max(w_err, max_abs_diff(inverse(u.evaluate(k, 2).d2), fs_w(grid->node(k).x)));
  }
  const Mat2 H = u.jet_at({0.0, 0.0}).d2;
  const double lattice_len = poly->lattice_length(0) + poly->lattice_length(1) + poly->lattice_length(2);
  const auto topo = ClassTopology::projective_plane();
  const auto cert = certify(0.0, topo);
  const auto rep = energy_report(u, AdmissibleClass::trivial());
  double max_vxx = 0.0, max_vxy = 0.0, max_vxx_x = 0.0;
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const auto ih = inverse_hessian_jet(u.evaluate(k, 3));
    max_vxx = std::max(max_vxx, std::abs(ih.W[0][0]));
    max_vxy = std::max(max_vxy, std::abs(ih.W[0][1]));
    max_vxx_x = std::max(max_vxx_x, std::abs(ih.dW[0][0][0]));
  }

  std::vector<BaselineCheck> c;
  c.push_back(check("abreu_scalar_max_error", r_err, 0.0, 1e-10));
  c.push_back(check("fiber_rm2_max_error", rm_err, 0.0, 1e-10));
  c.push_back(check("hessian_00_at_origin", H[0][0], 1.0, 1e-12));
  c.push_back(check("hessian_01_at_origin", H[0][1], 0.5, 1e-12));
  c.push_back(check("hessian_11_at_origin", H[1][1], 1.0, 1e-12));
  c.push_back(check("hessian_det_at_origin", det(H), 0.75, 1e-12));
  c.push_back(check("fs_inverse_hessian_at_origin",
                    max_abs_diff(fs_w({0.0, 0.0}), {{{4.0 / 3.0, -2.0 / 3.0}, {-2.0 / 3.0, 4.0 / 3.0}}}), 0.0, 1e-12));
  c.push_back(check("fs_inverse_hessian_vs_inverse", w_err, 0.0, 1e-10));
  c.push_back(check("max_abs_vxx_below_3", max_vxx < 3.0 ? 0.0 : max_vxx, 0.0, 0.0));
  c.push_back(check("max_abs_vxy_below_6", max_vxy < 6.0 ? 0.0 : max_vxy, 0.0, 0.0));
  c.push_back(check("max_abs_vxx_x_at_most_2", max_vxx_x <= 2.0 ? 0.0 : max_vxx_x, 0.0, 0.0));
  c.push_back(check("area", poly->area(), 4.5, 1e-12));
  c.push_back(check("quadrature_area", rep.area, 4.5, 1e-9));
  c.push_back(check("boundary_lattice_length", lattice_len, 9.0, 1e-12));
  c.push_back(check("r_bar", average_scalar(*poly, AdmissibleClass::trivial()), 4.0, 1e-12));
  c.push_back(check("calabi_energy", rep.calabi, 0.0, 1e-12));
  c.push_back(check("fiber_volume", topo.volume, 9.0 * kPi * kPi, 1e-12, true));
  c.push_back(check("yamabe_lower_bound", cert.yamabe_lower, 12.0 * kPi, 1e-12, true));
  c.push_back(check("sobolev_bound", cert.sobolev_bound.value_or(NAN), 1.0, 1e-12, true));
  c.push_back(check("eq_cs_threshold", eq_cs_threshold(topo), 48.0 * kPi * kPi, 1e-12, true));
  return c;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"calabi_lab: toric Calabi flow on the projective plane"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_flag("--emit-plots", g.emit_plots, "write per-series plot data files");
  app.add_option("--threads", g.threads, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--inject-fault", g.fault)->group("");

  auto* baseline = app.add_subcommand("baseline", "Fubini-Study golden suite");

  auto* flow = app.add_subcommand("flow", "run the Calabi flow from a JSON config");
  std::string config;
  flow->add_option("config", config, "run config (JSON)")->required();

  auto* curv = app.add_subcommand("curvature", "curvature blocks at a point of a snapshot");
  std::string snapshot, class_path;
  std::vector<double> at;
  curv->add_option("--snapshot", snapshot)->required();
  curv->add_option("--at", at)->expected(2)->required();
  curv->add_option("--class", class_path);

  auto* energy = app.add_subcommand("energy", "energy report of a snapshot");
  energy->add_option("--snapshot", snapshot)->required();
  energy->add_option("--class", class_path);

  auto* sob = app.add_subcommand("sobolev-bound", "Yamabe/Sobolev certificate for a Calabi energy");
  double ca = 0.0;
  sob->add_option("--ca", ca)->required();
  sob->add_option("--class", class_path);

  auto* fiber = app.add_subcommand("fiber-bound", "fiber Calabi-energy bound for an admissible class");
  fiber->add_option("--class", class_path)->required();

  for (auto* sc : {baseline, flow, curv, energy, sob, fiber}) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    set_threads(g.threads);
    if (*baseline) return cmd_baseline(g);
    if (*flow) return cmd_flow(g, config);
    if (*curv) return cmd_curvature(g, snapshot, at, class_path);
    if (*energy) return cmd_energy(g, snapshot, class_path);
    if (*sob) return cmd_sobolev(g, ca, class_path);
    if (*fiber) return cmd_fiber(g, class_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitConfig;
  } catch (const DegenerateInput& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const RegimeError& e) {
    std::fprintf(stderr, "regime error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical termination: %s\n", e.what());
    return kExitNumeric;
  } catch (const CurvatureUndefined& e) {
    std::fprintf(stderr, "numerical termination: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
  return kExitConfig;
}

}  // namespace calabi
