#include "calabi/energy.hpp"

#include "calabi/lattice_ops.hpp"
#include "calabi/parallel.hpp"

namespace calabi {

double average_scalar(const DelzantPolytope& poly, const AdmissibleClass& cls) {
  cls.validate(poly);
  const double vol = integrate_over(poly, [&](const Vec2& z) { return cls.weight(z); }, 12);
  const double base = cls.scal_S == 0.0
                          ? 0.0
                          : integrate_over(poly, [&](const Vec2& z) { return cls.weight(z) / cls.affine(z); }, 12);
  double bdry = 0.0;
  for (const auto& s : boundary_quadrature(poly, 1, 12)) bdry += s.weight * cls.weight(s.x);
  return (cls.scal_S * base + 2.0 * bdry) / vol;
}

double fiber_average_scalar(const DelzantPolytope& poly) {
  double len = 0.0;
  for (std::size_t i = 0; i < poly.facets().size(); ++i) len += poly.lattice_length(i);
  return 2.0 * len / poly.area();
}

EnergyEvaluator::EnergyEvaluator(std::shared_ptr<const DelzantPolytope> poly, std::shared_ptr<const Grid> grid,
                                 AdmissibleClass cls, int boundary_segments)
    : poly_(std::move(poly)),
      grid_(std::move(grid)),
      cls_(cls),
      quad_(*poly_, *grid_),
      boundary_(boundary_quadrature(*poly_, boundary_segments)),
      r_bar_(average_scalar(*poly_, cls_)),
      r_bar_fiber_(fiber_average_scalar(*poly_)) {
  weight_.resize(grid_->size());
  for (std::size_t k = 0; k < grid_->size(); ++k) weight_[k] = cls_.weight(grid_->node(k).x);
}

double EnergyEvaluator::calabi(const std::vector<double>& R) const {
  std::vector<double> v(R.size());
  for (std::size_t k = 0; k < R.size(); ++k) v[k] = (R[k] - r_bar_) * (R[k] - r_bar_) * weight_[k];
  return quad_.integrate(v);
}

double EnergyEvaluator::dissipation(const SymplecticPotential& u, const std::vector<double>& R) const {
  const auto hess = lattice_hessian(*grid_, R);
  std::vector<double> v(R.size());
  parallel_for(R.size(), [&](std::size_t k) {
    const Mat2 W = inverse(u.evaluate(k, 2).d2);
    const Mat2 A = W * hess[k] * W;
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s += A[i][j] * hess[k][j][i];
    v[k] = s * weight_[k];
  });
  return quad_.integrate(v);
}

double EnergyEvaluator::boundary_integral(const SymplecticPotential& u) const {
  double s = 0.0;
  for (const auto& b : boundary_) s += b.weight * u.value_at_closed(b.x);
  return s;
}

EnergyReport EnergyEvaluator::report(const SymplecticPotential& u) const {
  const std::size_t n = grid_->size();
  const auto samples = curvature_field(u, cls_);
  std::vector<double> R(n), w(n), rp(n), rm(n), rf(n), dev(n), u2(n), tr(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = samples[k];
    R[k] = s.R_weighted;
    w[k] = weight_[k];
    rp[k] = s.R_weighted * weight_[k];
    rm[k] = s.rm2_total * weight_[k];
    rf[k] = s.rm2_fiber;
    dev[k] = (s.R_fiber - r_bar_fiber_) * (s.R_fiber - r_bar_fiber_);
    const double uv = u.evaluate(k, 0).value;
    u2[k] = uv * uv;
  }
  const auto hess = lattice_hessian(*grid_, R);
  for (std::size_t k = 0; k < n; ++k) {
    const Mat2 W = inverse(u.evaluate(k, 2).d2);
    tr[k] = (W[0][0] * hess[k][0][0] + 2.0 * W[0][1] * hess[k][0][1] + W[1][1] * hess[k][1][1]) * weight_[k];
  }

  EnergyReport r;
  r.area = quad_.total_weight();
  r.weighted_volume = quad_.integrate(w);
  r.r_bar = r_bar_;
  r.calabi = calabi(R);
  r.total_rm2 = quad_.integrate(rm);
  r.fiber_rm2_unweighted = quad_.integrate(rf);
  r.dissipation = dissipation(u, R);
  r.boundary_u = boundary_integral(u);
  r.l2_u = quad_.integrate(u2);
  r.invariant_j = r.fiber_rm2_unweighted - 0.25 * quad_.integrate(dev);
  r.integral_r = quad_.integrate(rp);
  r.trace_term = quad_.integrate(tr);
  return r;
}

EnergyReport energy_report(const SymplecticPotential& u, const AdmissibleClass& cls) {
  return EnergyEvaluator(u.polytope_ptr(), u.grid_ptr(), cls).report(u);
}

std::pair<double, double> mixed_trace(const SymplecticPotential& u0, const SymplecticPotential& u1) {
  if (!u0.grid().same_layout(u1.grid())) throw DegenerateInput("potentials live on different grids");
  const std::size_t n = u0.grid().size();
  std::vector<double> a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Mat2 g0 = u0.evaluate(k, 2).d2, g1 = u1.evaluate(k, 2).d2;
    const Mat2 w0 = inverse(g0), w1 = inverse(g1);
    double s = 0.0, t = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        s += g0[i][j] * w1[i][j];
        t += g1[i][j] * w0[i][j];
      }
    a[k] = s;
    b[k] = t;
  }
  InteriorQuadrature q(u0.polytope(), u0.grid());
  return {q.integrate(a), q.integrate(b)};
}

}  // namespace calabi
