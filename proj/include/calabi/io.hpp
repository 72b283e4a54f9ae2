#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "calabi/flow.hpp"
#include "calabi/sobolev.hpp"

namespace calabi {

/// FNV-1a over the canonical JSON of the polytope.
std::uint64_t polytope_hash(const DelzantPolytope& poly);

/// Writes `path` (header i,j,x,y,f) and the sidecar `path + ".json"`.
void write_snapshot(const std::string& path, const SymplecticPotential& u, double t);

struct Snapshot {
  SymplecticPotential u;
  double t = 0.0;
};

/// Reads a snapshot and its sidecar; the potential uses lattice derivatives.
/// Throws ConfigError on missing or inconsistent files.
Snapshot read_snapshot(const std::string& path);

extern const char* const kMonitorColumns;

/// Monitor CSV, one row per record, flushed after each row.
class MonitorWriter {
 public:
  explicit MonitorWriter(const std::string& path);
  void write(const MonitorRecord& r);

 private:
  std::ofstream out_;
};

std::string monitor_row(const MonitorRecord& r);

/// One whitespace-separated "t value" file per monitored series in `dir`.
void write_plot_files(const std::string& dir, const std::vector<MonitorRecord>& records);

/// Parses the run config; relative paths resolve against base_dir. Unknown keys and
/// out-of-range values throw ConfigError.
RunConfig run_config_from_json(const std::string& text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

AdmissibleClass class_from_json(const nlohmann::json& j);
AdmissibleClass load_class(const std::string& path);

nlohmann::json to_json(const EnergyReport& r);
nlohmann::json to_json(const CurvatureSample& s);
nlohmann::json to_json(const SobolevCertificate& c);
nlohmann::json to_json(const FiberEnergyBound& b);
nlohmann::json to_json(const MonitorRecord& r);

}  // namespace calabi
