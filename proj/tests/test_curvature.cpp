#include <doctest.h>

#include <cmath>

#include "calabi/curvature.hpp"
#include "common.hpp"

using namespace calabi;

namespace {

AdmissibleClass regime_class() { return {{1.0, 1.0}, 12.0, -1.0, 1, -2}; }

}  // namespace

TEST_CASE("Fubini-Study golden curvature") {
  const auto u = testing::fs();
  for (std::size_t k = 0; k < u.grid().size(); k += 5) {
    CHECK(abreu_scalar(u, k) == doctest::Approx(4.0).epsilon(1e-11));
    CHECK(fiber_riemann_norm(u, k) == doctest::Approx(4.0 / 3.0).epsilon(1e-11));
  }
}

TEST_CASE("flat quadratic has zero curvature") {
  auto p = std::make_shared<const DelzantPolytope>(standard_square());
  auto g = testing::grid(*p, 16);
  const auto u = SymplecticPotential::analytic(p, g, Polynomial2::monomial(2, 0, 0.5) + Polynomial2::monomial(0, 2, 0.5),
                                               false);
  for (std::size_t k = 0; k < g->size(); k += 3) {
    CHECK(std::abs(abreu_scalar(u, k)) < 1e-12);
    CHECK(std::abs(fiber_riemann_norm(u, k)) < 1e-12);
  }
}

TEST_CASE("weighted scalar reductions") {
  const auto u = testing::fs(24);
  const auto k = u.grid().nearest({0.2, -0.1});
  CHECK(weighted_scalar(u, AdmissibleClass::trivial(), k) == doctest::Approx(abreu_scalar(u, k)));
  const AdmissibleClass c{{0.0, 0.0}, 3.0, 1.0, 1, 0};
  CHECK(weighted_scalar(u, c, k) == doctest::Approx(1.0 / 3.0 + 4.0).epsilon(1e-11));
}

TEST_CASE("curvature errors") {
  auto p = testing::triangle();
  auto g = testing::grid(*p, 24);
  const auto bad = SymplecticPotential::analytic(p, g, Polynomial2::monomial(2, 0, -5.0));
  CHECK_THROWS_AS(abreu_scalar(bad, g->nearest({0.0, 0.0})), CurvatureUndefined);
  AdmissibleClass big = regime_class();
  big.m = 2;
  CHECK_THROWS_AS(admissible_blocks(testing::fs(24), big, 0), RegimeError);
  AdmissibleClass neg{{1.0, 0.0}, 0.5, 0.0, 1, 0};
  CHECK_THROWS_AS(neg.validate(*p), DegenerateInput);
}

TEST_CASE("admissible block invariants") {
  auto p = testing::triangle();
  auto g = testing::grid(*p, 24);
  const auto u = SymplecticPotential::analytic(p, g, scaled(gaussian_bump({0.1, 0.0}, 0.7), 0.03));
  const auto cls = regime_class();
  for (std::size_t k = 0; k < g->size(); k += 11) {
    const auto s = admissible_blocks(u, cls, k);
    CHECK(s.rm2_fiber >= 0.0);
    CHECK(s.rm2_total >= s.rm2_fiber);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) CHECK(s.rm_ijkl[i][j][a][b] == doctest::Approx(s.rm_ijkl[a][b][i][j]));
    CHECK(s.rm_00ij[0][1] == doctest::Approx(s.rm_00ij[1][0]));
  }
}

TEST_CASE("sample_at off the grid") {
  const auto u = testing::fs(24);
  const auto s = sample_at(u, AdmissibleClass::trivial(), {0.123, -0.456});
  CHECK(s.R_fiber == doctest::Approx(4.0).epsilon(1e-11));
  CHECK_THROWS_AS(sample_at(u, AdmissibleClass::trivial(), {5.0, 5.0}), DomainError);
}

TEST_CASE("control bound dominates the full curvature at FS") {
  const auto u = testing::fs(24);
  const auto cls = regime_class();
  for (std::size_t k = 0; k < u.grid().size(); ++k) {
    const auto s = admissible_blocks(u, cls, k);
    CHECK(s.rm2_total <= control_rm_rhs(cls, u.grid().node(k).x));
  }
}
