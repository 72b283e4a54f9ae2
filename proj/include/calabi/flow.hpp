#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "calabi/energy.hpp"

namespace calabi {

struct FlowState {
  double t = 0.0;
  SymplecticPotential u;
  double dt_last = 0.0;
  long step_count = 0;
};

struct FlowPolicy {
  double sigma = 0.1;
  int max_retries = 10;
  double dt_max = 0.0;  // 0: no cap besides the CFL value
};

/// Raised after max_retries consecutive rejected steps; carries the last accepted state.
class StiffnessError : public NumericError {
 public:
  StiffnessError(const std::string& what, FlowState last) : NumericError(what, 0.0), last_(std::move(last)) {}
  const FlowState& last_state() const { return last_; }

 private:
  FlowState last_;
};

/// dF/dt at the nodes: R_bar - R(u).
std::vector<double> rhs(const FlowState& state, const EnergyEvaluator& ev);

/// sigma h^4 / (1 + max_k |Hess u(k)^-1|)^2.
double cfl_dt(const SymplecticPotential& u, double sigma);

struct StepInfo {
  int rejections = 0;
  double dt = 0.0;
  double calabi_before = 0.0;
  double calabi_after = 0.0;
};

/// One classical RK4 step on f. The step is halved and retried when the Calabi energy
/// increases or positivity fails at any stage.
FlowState step(const FlowState& state, const EnergyEvaluator& ev, const FlowPolicy& policy, StepInfo* info = nullptr);

/// Switches an analytic potential to node samples so it can be evolved.
FlowState initial_state(const SymplecticPotential& u);

/// Geodesic distances on the 8-neighbour node graph with edge length sqrt(dx^T Hess u(mid) dx),
/// from the nearest of `sources` to every node.
std::vector<double> distance_field(const SymplecticPotential& u, const std::vector<std::size_t>& sources);

/// min over a in A, b in B of the graph distance.
double riemannian_distance(const SymplecticPotential& u, const std::vector<std::size_t>& A,
                           const std::vector<std::size_t>& B);

struct MonitorRecord {
  double t = 0.0;
  double calabi = 0.0;
  double dissipation = 0.0;
  double calabi_rate_residual = 0.0;
  double l2_u = 0.0;
  double boundary_u = 0.0;
  double min_hess_eig = 0.0;
  std::array<double, 4> max_d{};  // max |d^k f|, k = 1..4, on P_eps
  double dist_eps = 0.0;
  double q_d2_max = 0.0;
  double invariant_j = 0.0;
  bool positivity_ok = true;
};

/// Monitor record at one state (calabi_rate_residual is filled by fill_rate_residuals).
MonitorRecord monitor(const FlowState& state, const EnergyEvaluator& ev, double eps);

/// |dCa/dt + 2 dissipation| / max(dissipation, floor) with centred differences inside the
/// series and one-sided differences at its ends.
void fill_rate_residuals(std::vector<MonitorRecord>& records, double floor = 1e-12);

struct RunConfig {
  std::string polytope_path;  // empty: standard triangle
  AdmissibleClass cls;
  int N = 48;
  double delta_min_factor = 0.5;
  std::string perturbation = "none";  // none | bump | facet_bump
  double amplitude = 0.0;
  double bump_width = 0.7;
  double t_end = 0.01;
  long max_steps = 0;  // 0: unlimited
  double cfl_sigma = 0.1;
  int monitor_every = 5;
  int snapshot_every = 50;
  double epsilon = 0.25;
  double band_slack = 2.0;
  std::string out_dir = ".";
  int verbosity = 0;
};

struct RunResult {
  std::vector<MonitorRecord> records;
  std::optional<FlowState> final_state;
  bool stiff = false;
  std::string error;
  std::vector<std::string> band_violations;
  long rejections = 0;
};

struct RunHooks {
  std::function<void(const FlowState&, const MonitorRecord&)> on_record;
  std::function<void(const FlowState&)> on_snapshot;
};

/// Builds the initial potential described by the config (FS plus optional perturbation).
SymplecticPotential initial_potential(const RunConfig& cfg);

/// Steps from `start` until t_end or max_steps, recording monitors every monitor_every
/// accepted steps (and at the start and end).
RunResult run(const RunConfig& cfg, const FlowState& start, const RunHooks& hooks = {});
RunResult run(const RunConfig& cfg, const RunHooks& hooks = {});

}  // namespace calabi
