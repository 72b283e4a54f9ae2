#pragma once

#include <memory>

#include "calabi/polytope.hpp"
#include "calabi/potential.hpp"

namespace testing {

inline std::shared_ptr<const calabi::DelzantPolytope> triangle() {
  return std::make_shared<const calabi::DelzantPolytope>(calabi::standard_triangle());
}

inline std::shared_ptr<const calabi::Grid> grid(const calabi::DelzantPolytope& p, int n) {
  const auto box = p.bounding_box();
  return std::make_shared<const calabi::Grid>(p, n, 0.5 * (box[1][0] - box[0][0]) / n);
}

inline calabi::SymplecticPotential fs(int n = 48) {
  auto p = triangle();
  return calabi::SymplecticPotential::analytic(p, grid(*p, n), calabi::Polynomial2{});
}

}  // namespace testing
