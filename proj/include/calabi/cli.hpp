#pragma once

#include <string>
#include <vector>

namespace calabi {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitNumeric = 3 };

struct BaselineCheck {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Fubini-Study golden suite. `fault` names an injected corruption ("fs_inverse_hessian_sign")
/// used to exercise the failure path; empty for none.
std::vector<BaselineCheck> baseline_checks(const std::string& fault = "");

/// Entry point of calabi_lab; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace calabi
