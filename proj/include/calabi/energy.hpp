#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "calabi/curvature.hpp"
#include "calabi/quadrature.hpp"

namespace calabi {

/// Class average of the weighted scalar curvature, from class data alone:
/// [scal_S int p/L dmu + 2 int_dP p dsigma] / int p dmu.
double average_scalar(const DelzantPolytope& poly, const AdmissibleClass& cls);

/// Average of the unweighted fiber scalar curvature: 2 |dP|_sigma / area.
double fiber_average_scalar(const DelzantPolytope& poly);

struct EnergyReport {
  double area = 0.0;
  double weighted_volume = 0.0;
  double r_bar = 0.0;
  double calabi = 0.0;
  double total_rm2 = 0.0;
  double fiber_rm2_unweighted = 0.0;
  double dissipation = 0.0;
  double boundary_u = 0.0;
  double l2_u = 0.0;
  double invariant_j = 0.0;
  double integral_r = 0.0;      // int R p dmu
  double trace_term = 0.0;      // int W^{ij} R_ij p dmu
};

/// Reusable integration context for one (polytope, grid, class).
class EnergyEvaluator {
 public:
  EnergyEvaluator(std::shared_ptr<const DelzantPolytope> poly, std::shared_ptr<const Grid> grid,
                  AdmissibleClass cls, int boundary_segments = 64);

  const InteriorQuadrature& quadrature() const { return quad_; }
  const AdmissibleClass& cls() const { return cls_; }
  double r_bar() const { return r_bar_; }
  const std::vector<double>& weight() const { return weight_; }  // p(z) at the nodes

  EnergyReport report(const SymplecticPotential& u) const;
  /// int (R - R_bar)^2 p dmu for a precomputed weighted scalar field.
  double calabi(const std::vector<double>& R) const;
  /// int u^{ir} u^{js} R_ij R_rs p dmu with R_ij from second differences of R.
  double dissipation(const SymplecticPotential& u, const std::vector<double>& R) const;
  double boundary_integral(const SymplecticPotential& u) const;
  double integrate(const std::vector<double>& values) const { return quad_.integrate(values); }

 private:
  std::shared_ptr<const DelzantPolytope> poly_;
  std::shared_ptr<const Grid> grid_;
  AdmissibleClass cls_;
  InteriorQuadrature quad_;
  std::vector<BoundarySample> boundary_;
  std::vector<double> weight_;
  double r_bar_;
  double r_bar_fiber_;
};

EnergyReport energy_report(const SymplecticPotential& u, const AdmissibleClass& cls);

/// (int u0_ij u1^ij dmu, int u1_ij u0^ij dmu); throws DegenerateInput on grid mismatch.
std::pair<double, double> mixed_trace(const SymplecticPotential& u0, const SymplecticPotential& u1);

}  // namespace calabi
