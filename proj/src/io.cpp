#include "calabi/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

namespace calabi {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

long integer(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return j.at(key).get<long>();
}

}  // namespace

std::uint64_t polytope_hash(const DelzantPolytope& poly) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : polytope_to_json(poly)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_snapshot(const std::string& path, const SymplecticPotential& u, double t) {
  const Grid& g = u.grid();
  {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write snapshot: " + path);
    out << "i,j,x,y,f\n";
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto& n = g.node(k);
      out << n.index[0] << ',' << n.index[1] << ',' << g17(n.x[0]) << ',' << g17(n.x[1]) << ','
          << g17(u.correction_jet(k).value) << '\n';
    }
  }
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(polytope_hash(u.polytope())));
  json side;
  side["grid"] = {{"N", g.n()}, {"delta_min", g.delta_min()}};
  side["polytope_hash"] = hash;
  side["polytope"] = json::parse(polytope_to_json(u.polytope()));
  side["t"] = t;
  side["canonical"] = u.canonical();
  std::ofstream out(path + ".json");
  if (!out) throw ConfigError("cannot write snapshot sidecar: " + path + ".json");
  out << side.dump(2) << '\n';
}

Snapshot read_snapshot(const std::string& path) {
  const json side = parse(read_file(path + ".json", "snapshot sidecar"), "snapshot sidecar");
  std::shared_ptr<const DelzantPolytope> poly;
  std::shared_ptr<const Grid> grid;
  double t = 0.0;
  bool canonical = true;
  try {
    poly = std::make_shared<const DelzantPolytope>(polytope_from_json(side.at("polytope").dump()));
    grid = std::make_shared<const Grid>(*poly, side.at("grid").at("N").get<int>(),
                                        side.at("grid").at("delta_min").get<double>());
    t = side.at("t").get<double>();
    if (side.contains("canonical")) canonical = side["canonical"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("snapshot sidecar: ") + e.what());
  } catch (const DegenerateInput& e) {
    throw ConfigError(std::string("snapshot sidecar: ") + e.what());
  }
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(polytope_hash(*poly)));
  if (side.value("polytope_hash", std::string(hash)) != hash) throw ConfigError("snapshot polytope hash mismatch");

  std::istringstream in(read_file(path, "snapshot"));
  std::string line;
  if (!std::getline(in, line) || line != "i,j,x,y,f") throw ConfigError("snapshot header must be i,j,x,y,f");
  std::vector<double> f(grid->size(), 0.0);
  std::vector<char> seen(grid->size(), 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int i = 0, j = 0;
    double x = 0.0, y = 0.0, v = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &i, &j, &x, &y, &v) != 5)
      throw ConfigError("malformed snapshot row: " + line);
    const long k = grid->find(i, j);
    if (k < 0) throw ConfigError("snapshot node (" + std::to_string(i) + "," + std::to_string(j) + ") not on the grid");
    f[k] = v;
    seen[k] = 1;
  }
  for (char s : seen)
    if (!s) throw ConfigError("snapshot does not cover every grid node");
  return {SymplecticPotential::sampled(poly, grid, std::move(f), canonical), t};
}

const char* const kMonitorColumns =
    "t,calabi,dissipation,calabi_rate_residual,l2_u,boundary_u,min_hess_eig,max_d1,max_d2,max_d3,max_d4,"
    "dist_eps,q_d2_max,invariant_j,positivity_ok";

std::string monitor_row(const MonitorRecord& r) {
  std::string s = g17(r.t) + ',' + g17(r.calabi) + ',' + g17(r.dissipation) + ',' + g17(r.calabi_rate_residual) +
                  ',' + g17(r.l2_u) + ',' + g17(r.boundary_u) + ',' + g17(r.min_hess_eig);
  for (double d : r.max_d) s += ',' + g17(d);
  s += ',' + g17(r.dist_eps) + ',' + g17(r.q_d2_max) + ',' + g17(r.invariant_j) + ',' + (r.positivity_ok ? "1" : "0");
  return s;
}

MonitorWriter::MonitorWriter(const std::string& path) : out_(path) {
  if (!out_) throw ConfigError("cannot write monitor file: " + path);
  out_ << kMonitorColumns << '\n' << std::flush;
}

void MonitorWriter::write(const MonitorRecord& r) { out_ << monitor_row(r) << '\n' << std::flush; }

void write_plot_files(const std::string& dir, const std::vector<MonitorRecord>& records) {
  fs::create_directories(dir);
  std::map<std::string, std::function<double(const MonitorRecord&)>> series = {
      {"calabi", [](const MonitorRecord& r) { return r.calabi; }},
      {"dissipation", [](const MonitorRecord& r) { return r.dissipation; }},
      {"calabi_rate_residual", [](const MonitorRecord& r) { return r.calabi_rate_residual; }},
      {"l2_u", [](const MonitorRecord& r) { return r.l2_u; }},
      {"boundary_u", [](const MonitorRecord& r) { return r.boundary_u; }},
      {"min_hess_eig", [](const MonitorRecord& r) { return r.min_hess_eig; }},
      {"max_d1", [](const MonitorRecord& r) { return r.max_d[0]; }},
      {"max_d2", [](const MonitorRecord& r) { return r.max_d[1]; }},
      {"max_d3", [](const MonitorRecord& r) { return r.max_d[2]; }},
      {"max_d4", [](const MonitorRecord& r) { return r.max_d[3]; }},
      {"dist_eps", [](const MonitorRecord& r) { return r.dist_eps; }},
      {"q_d2_max", [](const MonitorRecord& r) { return r.q_d2_max; }},
      {"invariant_j", [](const MonitorRecord& r) { return r.invariant_j; }},
  };
  for (const auto& [name, get] : series) {
    std::ofstream out(fs::path(dir) / (name + ".dat"));
    if (!out) throw ConfigError("cannot write plot file for " + name);
    out << "# t " << name << '\n';
    for (const auto& r : records) out << g17(r.t) << ' ' << g17(get(r)) << '\n';
  }
}

AdmissibleClass class_from_json(const json& j) {
  only_keys(j, {"p", "c_S", "scal_S", "m", "chi_S"}, "class");
  AdmissibleClass c;
  try {
    if (j.contains("p")) {
      if (!j["p"].is_array() || j["p"].size() != 2) throw ConfigError("class.p must be [p1, p2]");
      c.p = {j["p"][0].get<double>(), j["p"][1].get<double>()};
    }
    if (j.contains("c_S")) c.c_S = number(j, "c_S", "class");
    if (j.contains("scal_S")) c.scal_S = number(j, "scal_S", "class");
    if (j.contains("m")) c.m = static_cast<int>(integer(j, "m", "class"));
    if (j.contains("chi_S")) c.chi_S = static_cast<int>(integer(j, "chi_S", "class"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("class: ") + e.what());
  }
  if (c.m < 0) throw ConfigError("class.m must be nonnegative");
  if (c.p[0] < c.p[1]) throw ConfigError("class.p must satisfy p1 >= p2");
  return c;
}

AdmissibleClass load_class(const std::string& path) {
  return class_from_json(parse(read_file(path, "class file"), "class file " + path));
}

RunConfig run_config_from_json(const std::string& text, const std::string& base_dir) {
  const json j = parse(text, "run config");
  only_keys(j,
            {"polytope", "class", "grid", "perturbation", "t_end", "max_steps", "cfl_sigma", "monitor_every",
             "snapshot_every", "epsilon", "band_slack", "out_dir", "verbosity"},
            "run config");
  RunConfig c;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).string(); };
  try {
    if (j.contains("polytope")) {
      if (!j["polytope"].is_string()) throw ConfigError("polytope must be a path string");
      c.polytope_path = resolve(j["polytope"].get<std::string>());
      if (!fs::exists(c.polytope_path)) throw ConfigError("polytope file not found: " + c.polytope_path);
    }
    if (j.contains("class")) c.cls = class_from_json(j["class"]);
    if (j.contains("grid")) {
      only_keys(j["grid"], {"N", "delta_min_factor"}, "grid");
      if (j["grid"].contains("N")) c.N = static_cast<int>(integer(j["grid"], "N", "grid"));
      if (j["grid"].contains("delta_min_factor"))
        c.delta_min_factor = number(j["grid"], "delta_min_factor", "grid");
    }
    if (j.contains("perturbation")) {
      only_keys(j["perturbation"], {"kind", "amplitude", "width"}, "perturbation");
      if (j["perturbation"].contains("kind")) c.perturbation = j["perturbation"]["kind"].get<std::string>();
      if (j["perturbation"].contains("amplitude"))
        c.amplitude = number(j["perturbation"], "amplitude", "perturbation");
      if (j["perturbation"].contains("width")) c.bump_width = number(j["perturbation"], "width", "perturbation");
    }
    if (j.contains("t_end")) c.t_end = number(j, "t_end", "run config");
    if (j.contains("max_steps")) c.max_steps = integer(j, "max_steps", "run config");
    if (j.contains("cfl_sigma")) c.cfl_sigma = number(j, "cfl_sigma", "run config");
    if (j.contains("monitor_every")) c.monitor_every = static_cast<int>(integer(j, "monitor_every", "run config"));
    if (j.contains("snapshot_every")) c.snapshot_every = static_cast<int>(integer(j, "snapshot_every", "run config"));
    if (j.contains("epsilon")) c.epsilon = number(j, "epsilon", "run config");
    if (j.contains("band_slack")) c.band_slack = number(j, "band_slack", "run config");
    if (j.contains("out_dir")) c.out_dir = resolve(j["out_dir"].get<std::string>());
    if (j.contains("verbosity")) c.verbosity = static_cast<int>(integer(j, "verbosity", "run config"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  if (c.N < 8 || c.N > 1024) throw ConfigError("grid.N must lie in [8, 1024]");
  if (!(c.delta_min_factor > 0.0 && c.delta_min_factor < 1.0)) throw ConfigError("grid.delta_min_factor must lie in (0, 1)");
  if (c.perturbation != "none" && c.perturbation != "bump" && c.perturbation != "facet_bump")
    throw ConfigError("perturbation.kind must be none, bump or facet_bump");
  if (!std::isfinite(c.amplitude)) throw ConfigError("perturbation.amplitude must be finite");
  if (!(c.bump_width > 0.0)) throw ConfigError("perturbation.width must be positive");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (c.max_steps < 0) throw ConfigError("max_steps must be nonnegative");
  if (!(c.cfl_sigma > 0.0 && c.cfl_sigma <= 1.0)) throw ConfigError("cfl_sigma must lie in (0, 1]");
  if (c.monitor_every < 1) throw ConfigError("monitor_every must be at least 1");
  if (c.snapshot_every < 0) throw ConfigError("snapshot_every must be nonnegative");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(c.band_slack >= 1.0)) throw ConfigError("band_slack must be at least 1");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(read_file(path, "run config"), fs::path(path).parent_path().string().empty()
                                                                  ? std::string(".")
                                                                  : fs::path(path).parent_path().string());
}

json to_json(const EnergyReport& r) {
  return {{"area", r.area},
          {"weighted_volume", r.weighted_volume},
          {"r_bar", r.r_bar},
          {"calabi", r.calabi},
          {"total_rm2", r.total_rm2},
          {"fiber_rm2_unweighted", r.fiber_rm2_unweighted},
          {"dissipation", r.dissipation},
          {"boundary_u", r.boundary_u},
          {"l2_u", r.l2_u},
          {"invariant_j", r.invariant_j},
          {"integral_r", r.integral_r},
          {"trace_term", r.trace_term}};
}

json to_json(const CurvatureSample& s) {
  auto mat = [](const Mat2& m) { return json{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}; };
  json rm = json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) rm.push_back(mat(s.rm_ijkl[i][j]));
  return {{"x", {s.x[0], s.x[1]}},
          {"R_fiber", s.R_fiber},
          {"R_weighted", s.R_weighted},
          {"rm2_fiber", s.rm2_fiber},
          {"rm2_base", s.rm2_base},
          {"rm2_mixed", s.rm2_mixed},
          {"rm2_total", s.rm2_total},
          {"rm_blocks", {{"rm_0000", s.rm_0000}, {"rm_00ij", mat(s.rm_00ij)}, {"rm_ijkl", rm}}},
          {"ric_blocks", {{"ric_00", s.ric_00}, {"ric_ij", mat(s.ric_ij)}}}};
}

json to_json(const SobolevCertificate& c) {
  json j = {{"eq_cs_satisfied", c.eq_cs_satisfied},
            {"ca", c.ca},
            {"yamabe_lower", c.yamabe_lower},
            {"calabi_l2", c.calabi_l2},
            {"sobolev_bound", nullptr},
            {"derivation_log", c.derivation_log}};
  if (c.sobolev_bound) j["sobolev_bound"] = *c.sobolev_bound;
  return j;
}

json to_json(const FiberEnergyBound& b) {
  return {{"weight_interval", {b.weight_min, b.weight_max}},
          {"sup_rm2", b.sup_rm2},
          {"sup_rm2_bound", b.sup_rm2_bound},
          {"total_rm2_bound", b.total_rm2_bound},
          {"fiber_rm2_bound", b.fiber_rm2_bound},
          {"ca_bound", b.ca_bound},
          {"certificate", to_json(b.certificate)}};
}

json to_json(const MonitorRecord& r) {
  return {{"t", r.t},
          {"calabi", r.calabi},
          {"dissipation", r.dissipation},
          {"calabi_rate_residual", r.calabi_rate_residual},
          {"l2_u", r.l2_u},
          {"boundary_u", r.boundary_u},
          {"min_hess_eig", r.min_hess_eig},
          {"max_d", r.max_d},
          {"dist_eps", r.dist_eps},
          {"q_d2_max", r.q_d2_max},
          {"invariant_j", r.invariant_j},
          {"positivity_ok", r.positivity_ok}};
}

}  // namespace calabi
