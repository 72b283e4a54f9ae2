#include <doctest.h>

#include <cmath>
#include <numbers>

#include "calabi/sobolev.hpp"
#include "common.hpp"

using namespace calabi;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
}  // namespace

TEST_CASE("Fubini-Study chain") {
  const auto t = ClassTopology::projective_plane();
  CHECK(t.volume == doctest::Approx(9.0 * kPi2).epsilon(1e-14));
  const auto c = certify(0.0, t);
  CHECK(c.eq_cs_satisfied);
  CHECK(c.yamabe_lower == doctest::Approx(12.0 * kPi).epsilon(1e-14));
  REQUIRE(c.sobolev_bound);
  CHECK(*c.sobolev_bound == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eq_cs_threshold(t) == doctest::Approx(48.0 * kPi2).epsilon(1e-14));
}

TEST_CASE("eq_cs boundary and failure") {
  const auto t = ClassTopology::projective_plane();
  CHECK(yamabe_lower_bound(48.0 * kPi2 * (1.0 - 1e-12), t).eq_cs_satisfied);
  CHECK_FALSE(yamabe_lower_bound(48.0 * kPi2 * (1.0 + 1e-12), t).eq_cs_satisfied);
  const auto c = certify(100.0 * kPi2, t);
  CHECK_FALSE(c.eq_cs_satisfied);
  CHECK_FALSE(c.sobolev_bound);
  CHECK(c.derivation_log.find("no Sobolev bound") != std::string::npos);
  CHECK_THROWS_AS(yamabe_lower_bound(-1.0, t), DegenerateInput);
}

TEST_CASE("Sobolev bound formula at Ca = 45 pi^2") {
  const auto c = certify(45.0 * kPi2, ClassTopology::projective_plane());
  REQUIRE(c.sobolev_bound);
  CHECK(*c.sobolev_bound == doctest::Approx(12.0 / (std::sqrt(54.0) - std::sqrt(45.0))).epsilon(1e-12));
}

TEST_CASE("Sobolev bound is monotone in Ca") {
  const auto t = ClassTopology::projective_plane();
  double prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto c = certify(48.0 * kPi2 * i / 20.0, t);
    REQUIRE(c.sobolev_bound);
    CHECK(*c.sobolev_bound >= prev);
    prev = *c.sobolev_bound;
  }
}

TEST_CASE("fiber energy bound") {
  const auto t = ClassTopology::projective_plane(-2);
  const AdmissibleClass c{{1.0, 1.0}, 12.0, -1.0, 1, -2};
  const auto b = fiber_energy_bound(c, t);
  CHECK(b.sup_rm2 < 0.5 + 4.0 / 3.0);
  CHECK(b.fiber_rm2_bound == doctest::Approx(11.55).epsilon(1e-13));
  CHECK(b.ca_bound == doctest::Approx(44.4 * kPi2).epsilon(1e-13));
  CHECK(b.certificate.eq_cs_satisfied);
  CHECK(b.certificate.sobolev_bound);

  AdmissibleClass low = c;
  low.c_S = 11.0;
  CHECK_THROWS_WITH_AS(fiber_energy_bound(low, t), doctest::Contains("c_S >= 12 p1"), RegimeError);
  AdmissibleClass torus = c;
  torus.scal_S = 0.0;
  torus.chi_S = 0;
  CHECK_THROWS_AS(fiber_energy_bound(torus, t), RegimeError);
}

TEST_CASE("Sobolev inequality tester") {
  const auto u = testing::fs();
  const auto ones = std::vector<TestFunction>{{"one", closed_form(Polynomial2::constant(1.0))}};
  const auto r = sobolev_inequality_test(u, AdmissibleClass::trivial(), ones);
  CHECK(r.worst == doctest::Approx(std::pow(4.5, 1.0 / 3.0) / std::sqrt(4.5)).epsilon(1e-9));

  const auto fns = builtin_test_functions(u.polytope());
  const auto a = sobolev_inequality_test(u, AdmissibleClass::trivial(), fns);
  std::vector<TestFunction> scaled_fns;
  for (const auto& f : fns) scaled_fns.push_back({f.name, scaled(f.f, 3.5)});
  const auto b = sobolev_inequality_test(u, AdmissibleClass::trivial(), scaled_fns);
  REQUIRE(a.ratios.size() == b.ratios.size());
  for (std::size_t i = 0; i < a.ratios.size(); ++i) CHECK(b.ratios[i] == doctest::Approx(a.ratios[i]).epsilon(1e-12));
}
