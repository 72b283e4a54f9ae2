#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calabi/curvature.hpp"

namespace calabi {

/// Topological and volume data of the fiber class.
struct ClassTopology {
  double c1_squared = 4.5;
  double volume = 0.0;
  double r_bar = 4.0;
  int euler_char_base = 0;

  /// The O(3)-normalised projective plane: c1^2 = 9/2, volume 9 pi^2, R_bar = 4.
  static ClassTopology projective_plane(int euler_char_base = 0);
  void validate() const;
};

struct SobolevCertificate {
  bool eq_cs_satisfied = false;
  double ca = 0.0;
  double yamabe_lower = 0.0;  // 0 when the radicand is not positive
  double calabi_l2 = 0.0;     // sqrt(ca)
  std::optional<double> sobolev_bound;
  std::string derivation_log;
};

/// Riemannian Calabi energy on the fiber from the polytope integral int (R - R_bar)^2 dmu.
double riemannian_calabi(double polytope_calabi);

/// Largest ca with 96 pi^2 c1^2 - 2 int R^2 >= ca.
double eq_cs_threshold(const ClassTopology& topo);

SobolevCertificate yamabe_lower_bound(double ca, const ClassTopology& topo);
SobolevCertificate sobolev_bound(SobolevCertificate cert, const ClassTopology& topo);
inline SobolevCertificate certify(double ca, const ClassTopology& topo) {
  return sobolev_bound(yamabe_lower_bound(ca, topo), topo);
}

struct FiberEnergyBound {
  double weight_min = 0.0;  // interval enclosure of p(z) on the closed triangle
  double weight_max = 0.0;
  double sup_rm2 = 0.0;        // max of the pointwise |Rm|^2 bound over the enclosure
  double sup_rm2_bound = 0.0;  // sup_rm2 rounded up to 4/3 + k/2
  double total_rm2_bound = 0.0;
  double fiber_rm2_bound = 0.0;  // bound on int_P |Rm|^2 dmu of the fiber
  double ca_bound = 0.0;
  SobolevCertificate certificate;
};

/// Fiber Calabi-energy bound along the flow in the regime c_S >= 12 p1 on the standard triangle.
/// Throws RegimeError naming the failed hypothesis.
FiberEnergyBound fiber_energy_bound(const AdmissibleClass& cls, const ClassTopology& topo);

struct TestFunction {
  std::string name;
  ClosedForm f;
};

/// Constants, affine and quadratic monomials and a few Gaussian bumps on P.
std::vector<TestFunction> builtin_test_functions(const DelzantPolytope& poly);

struct SobolevRatio {
  double worst = 0.0;
  std::string worst_name;
  std::vector<double> ratios;
};

/// max over f of |f|_L3 / (|f|_L2 + |grad f|_L2), measure p(z) dmu and gradient norm u^{ij} f_i f_j.
SobolevRatio sobolev_inequality_test(const SymplecticPotential& u, const AdmissibleClass& cls,
                                     const std::vector<TestFunction>& fns);

}  // namespace calabi
