#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "calabi/polytope.hpp"

namespace calabi {

/// Value and all partial derivatives up to fourth order of a function of two variables.
/// Tensors are stored fully (symmetric in every index pair).
struct Jet {
  double value = 0.0;
  Vec2 d1{};
  Mat2 d2{};
  Tensor3 d3{};
  Tensor4 d4{};

  Jet& operator+=(const Jet& o);
};

Jet operator+(Jet a, const Jet& b);
Jet operator*(double s, Jet a);

/// Taylor re-expansion of a jet about the point displaced by `d`, truncated at fourth order.
Jet shift_jet(const Jet& j, const Vec2& d);

/// Dense bivariate polynomial sum c[a][b] x^a y^b with exact jets.
class Polynomial2 {
 public:
  Polynomial2() = default;
  static Polynomial2 constant(double c);
  static Polynomial2 monomial(int a, int b, double c = 1.0);
  static Polynomial2 affine(double cx, double cy, double c0);

  int degree() const { return int(coef_.size()) - 1; }
  double coefficient(int a, int b) const;
  double operator()(const Vec2& x) const { return jet(x).value; }
  Jet jet(const Vec2& x) const;

  Polynomial2 operator+(const Polynomial2& o) const;
  Polynomial2 operator*(const Polynomial2& o) const;
  Polynomial2 operator*(double s) const;

 private:
  void resize(int deg);
  std::vector<std::vector<double>> coef_;  // coef_[a][b], a + b <= degree
};

/// A smooth function given by its exact jet.
using ClosedForm = std::function<Jet(const Vec2&)>;

ClosedForm closed_form(Polynomial2 p);
ClosedForm scaled(ClosedForm f, double s);
ClosedForm sum(ClosedForm a, ClosedForm b);

/// exp(-|x - center|^2 / (2 width^2)); equals 1 at the center.
ClosedForm gaussian_bump(const Vec2& center, double width);

/// Squared product of the facet functions, normalised to 1 at the polytope centroid.
/// Vanishes to second order on the boundary.
Polynomial2 facet_bump(const DelzantPolytope& poly);

/// Jet of the canonical part 1/2 sum_i l_i ln l_i at an interior point; `order` <= 4
/// controls which entries are filled. Throws DomainError outside the open polytope.
Jet guillemin_part(const DelzantPolytope& poly, const Vec2& x, int order = 4);

/// Closed-form inverse Hessian of the Fubini-Study potential on the standard triangle.
Mat2 fs_inverse_hessian(const Vec2& x);

enum class DerivativeProvider { Analytic, FiniteDifference };

/// u = (canonical ? 1/2 sum l ln l : 0) + f. The correction f is either a registered
/// closed form (analytic provider) or node samples differentiated on the lattice.
class SymplecticPotential {
 public:
  static SymplecticPotential analytic(std::shared_ptr<const DelzantPolytope> poly,
                                      std::shared_ptr<const Grid> grid, ClosedForm correction,
                                      bool canonical = true);
  static SymplecticPotential analytic(std::shared_ptr<const DelzantPolytope> poly,
                                      std::shared_ptr<const Grid> grid, const Polynomial2& correction,
                                      bool canonical = true);
  static SymplecticPotential sampled(std::shared_ptr<const DelzantPolytope> poly,
                                     std::shared_ptr<const Grid> grid, std::vector<double> f,
                                     bool canonical = true);
  /// Samples a closed form on the grid and switches to lattice derivatives.
  static SymplecticPotential sampled(std::shared_ptr<const DelzantPolytope> poly,
                                     std::shared_ptr<const Grid> grid, const ClosedForm& correction,
                                     bool canonical = true);
  static SymplecticPotential sampled(std::shared_ptr<const DelzantPolytope> poly,
                                     std::shared_ptr<const Grid> grid, const Polynomial2& correction,
                                     bool canonical = true);

  const DelzantPolytope& polytope() const { return *poly_; }
  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const DelzantPolytope> polytope_ptr() const { return poly_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  DerivativeProvider provider() const { return provider_; }
  bool canonical() const { return canonical_; }

  /// Correction values at the nodes.
  const std::vector<double>& f() const { return f_; }

  /// Jet of u at node k; order above 4 throws.
  Jet evaluate(std::size_t node, int order = 4) const;
  /// Jet of the correction f alone at node k.
  Jet correction_jet(std::size_t node) const;
  /// Jet of u at an arbitrary interior point (closed form, or Taylor expansion from the
  /// nearest node for sampled corrections).
  Jet jet_at(const Vec2& x) const;
  Jet correction_jet_at(const Vec2& x) const;

  /// u on the closed polytope (0 ln 0 = 0 on the boundary).
  double value_at_closed(const Vec2& x) const;

  /// Throws CurvatureUndefined if Hess u(node) is not numerically positive definite.
  void require_positive(std::size_t node) const;
  double min_hessian_eigenvalue(std::size_t node) const;

 private:
  SymplecticPotential() = default;
  void build_fd();

  std::shared_ptr<const DelzantPolytope> poly_;
  std::shared_ptr<const Grid> grid_;
  DerivativeProvider provider_ = DerivativeProvider::FiniteDifference;
  bool canonical_ = true;
  std::vector<double> f_;
  ClosedForm closed_;
  std::vector<Jet> f_jets_;  // lattice jets of f (finite-difference provider)
};

/// Complex-side data at a point: xi = grad u, phi = <x, xi> - u.
struct ComplexDual {
  Vec2 xi;
  double phi;
};

ComplexDual legendre_dual(const SymplecticPotential& u, const Vec2& x);

struct LegendrePreimage {
  Vec2 x;
  double u;
  int iterations;
};

/// Solves grad u(x) = xi by damped Newton iteration starting from `start`
/// (the polytope centroid if absent). Throws NumericError on non-convergence.
LegendrePreimage legendre_inverse(const SymplecticPotential& u, const Vec2& xi,
                                  std::optional<Vec2> start = std::nullopt, double tol = 1e-13,
                                  int max_iter = 200);

}  // namespace calabi
