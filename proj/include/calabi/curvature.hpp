#pragma once

#include <vector>

#include "calabi/potential.hpp"

namespace calabi {

/// Scalar data of an admissible class: weight p(z) = (<p,z> + c_S)^m.
struct AdmissibleClass {
  Vec2 p{0.0, 0.0};
  double c_S = 1.0;
  double scal_S = 0.0;
  int m = 0;
  int chi_S = 0;

  static AdmissibleClass trivial() { return {}; }

  double affine(const Vec2& z) const { return p[0] * z[0] + p[1] * z[1] + c_S; }
  double weight(const Vec2& z) const;
  double a() const { return -0.5 * scal_S; }

  /// Throws DegenerateInput unless the weight is positive at every vertex.
  void validate(const DelzantPolytope& poly) const;
};

/// W = (Hess u)^-1 with its first and second derivatives, by the chain rule from the jet of u.
struct InverseHessianJet {
  Mat2 G;                                // Hess u
  Mat2 W;                                // inverse Hessian
  std::array<Mat2, 2> dW;                // dW[k] = d_k W
  std::array<std::array<Mat2, 2>, 2> ddW;  // ddW[k][l] = d_k d_l W
};

/// Throws CurvatureUndefined when Hess u is numerically semidefinite.
InverseHessianJet inverse_hessian_jet(const Jet& u);

double abreu_scalar(const InverseHessianJet& h);
double fiber_riemann_norm(const InverseHessianJet& h);
double weighted_scalar(const InverseHessianJet& h, const AdmissibleClass& cls, const Vec2& z);

struct CurvatureSample {
  Vec2 x{};
  double R_fiber = 0.0;
  double R_weighted = 0.0;
  double rm2_fiber = 0.0;
  double rm_0000 = 0.0;   // Rm_{0 0bar 0 0bar}
  Mat2 rm_00ij{};         // Rm_{0 0bar i jbar}
  Tensor4 rm_ijkl{};      // Rm_{i jbar k lbar}
  double ric_00 = 0.0;
  Mat2 ric_ij{};
  double rm2_base = 0.0;   // (g^{00})^4 Rm_0000^2
  double rm2_mixed = 0.0;  // 4 (g^{00})^2 g^{ik} g^{jl} Rm_00ij Rm_00kl
  double rm2_total = 0.0;  // rm2_base + rm2_mixed + rm2_fiber
};

/// All curvature quantities at a point from the jet of u there. The bundle blocks are
/// filled for m = 1; for m = 0 they are zero and rm2_total = rm2_fiber. m > 1 throws RegimeError.
CurvatureSample curvature_sample(const Jet& u, const AdmissibleClass& cls, const Vec2& x);

double abreu_scalar(const SymplecticPotential& u, std::size_t node);
double fiber_riemann_norm(const SymplecticPotential& u, std::size_t node);
double weighted_scalar(const SymplecticPotential& u, const AdmissibleClass& cls, std::size_t node);
CurvatureSample admissible_blocks(const SymplecticPotential& u, const AdmissibleClass& cls, std::size_t node);
/// Curvature at an arbitrary interior point; DomainError outside.
CurvatureSample sample_at(const SymplecticPotential& u, const AdmissibleClass& cls, const Vec2& x);

/// Node fields, evaluated in parallel.
std::vector<double> weighted_scalar_field(const SymplecticPotential& u, const AdmissibleClass& cls);
std::vector<CurvatureSample> curvature_field(const SymplecticPotential& u, const AdmissibleClass& cls);

/// Pointwise upper bound for |Rm|^2 of the Fubini-Study fiber in an admissible class with m = 1.
double control_rm_rhs(const AdmissibleClass& cls, const Vec2& x);
/// Same bound as a function of the weight value L = <p,z> + c_S.
double control_rm_rhs(const AdmissibleClass& cls, double L);

}  // namespace calabi
