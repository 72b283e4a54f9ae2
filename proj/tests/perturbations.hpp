#pragma once

#include <array>
#include <vector>

// Perturbations f of the Fubini-Study potential shared by the oracle generator and the
// acceptance suite. Each is a sum of Gaussian bumps and monomials.
namespace perturb {

struct Gauss {
  double amp, cx, cy, width;
};
struct Mono {
  double coef;
  int a, b;
};
struct Spec {
  const char* name;
  std::vector<Gauss> gauss;
  std::vector<Mono> mono;
};

inline std::vector<Spec> oracle_set() {
  return {
      {"gauss_centroid", {{0.01, 0.0, 0.0, 0.7}}, {}},
      {"gauss_offset", {{0.008, 0.2, -0.3, 0.6}}, {}},
      {"gauss_pair", {{0.006, -0.3, 0.1, 0.8}, {-0.004, 0.4, -0.2, 0.7}}, {}},
      {"x4", {}, {{0.01, 4, 0}}},
      {"x2y2", {}, {{0.01, 2, 2}}},
      {"quartic_mix", {}, {{0.006, 3, 1}, {-0.004, 1, 3}, {0.003, 0, 4}}},
      {"quintic", {}, {{0.004, 5, 0}, {0.004, 2, 3}}},
      {"x2y_plus_gauss", {{0.005, 0.1, 0.1, 0.7}}, {{0.01, 2, 1}}},
      {"sextic", {}, {{0.002, 3, 3}, {0.002, 6, 0}}},
      {"wide_gauss", {{0.02, -0.1, 0.2, 1.0}}, {}},
  };
}

}  // namespace perturb
