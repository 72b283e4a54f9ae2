#include <doctest.h>

#include <cmath>

#include "calabi/energy.hpp"
#include "calabi/quadrature.hpp"
#include "common.hpp"

using namespace calabi;

TEST_CASE("class averages") {
  const auto p = standard_triangle();
  CHECK(average_scalar(p, AdmissibleClass::trivial()) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(fiber_average_scalar(p) == doctest::Approx(4.0).epsilon(1e-13));
  // int (x+y+12) dmu = 54; boundary: lattice length 3 per facet times L at the facet midpoints
  const double bdry = 3.0 * (11.5 + 11.5 + 13.0);
  const AdmissibleClass c{{1.0, 1.0}, 12.0, -1.0, 1, -2};
  CHECK(average_scalar(p, c) == doctest::Approx((-4.5 + 2.0 * bdry) / 54.0).epsilon(1e-12));
  const AdmissibleClass flat{{0.0, 0.0}, 2.0, 1.0, 1, 0};
  CHECK(average_scalar(p, flat) == doctest::Approx(0.5 + 4.0).epsilon(1e-12));
}

TEST_CASE("Fubini-Study energy report") {
  const auto u = testing::fs();
  const auto r = energy_report(u, AdmissibleClass::trivial());
  CHECK(r.area == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(r.r_bar == doctest::Approx(4.0));
  CHECK(r.calabi < 1e-20);
  CHECK(std::abs(r.dissipation) < 1e-12);
  CHECK(r.integral_r == doctest::Approx(18.0).epsilon(1e-10));
  CHECK(r.fiber_rm2_unweighted == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(r.invariant_j == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(std::abs(r.trace_term) < 1e-9);
}

TEST_CASE("perturbations keep the class invariants") {
  auto p = testing::triangle();
  auto g = testing::grid(*p, 96);
  const auto u = SymplecticPotential::analytic(p, g, scaled(gaussian_bump({0.1, -0.1}, 0.7), 0.01));
  const auto r = energy_report(u, AdmissibleClass::trivial());
  CHECK(r.calabi > 0.0);
  CHECK(r.dissipation > 0.0);
  CHECK(r.integral_r == doctest::Approx(18.0).epsilon(1e-4));
  CHECK(r.invariant_j == doctest::Approx(6.0).epsilon(1e-3));
}

TEST_CASE("calabi energy is quadrature of the squared deviation") {
  auto p = testing::triangle();
  auto g = testing::grid(*p, 24);
  const EnergyEvaluator ev(p, g, AdmissibleClass::trivial());
  std::vector<double> R(g->size(), 5.0);
  CHECK(ev.calabi(R) == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("mixed trace") {
  const auto u = testing::fs(24);
  const auto [a, b] = mixed_trace(u, u);
  CHECK(a == doctest::Approx(9.0).epsilon(1e-10));
  CHECK(b == doctest::Approx(9.0).epsilon(1e-10));
  CHECK_THROWS_AS(mixed_trace(u, testing::fs(30)), DegenerateInput);
}
