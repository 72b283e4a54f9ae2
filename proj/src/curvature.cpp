#include "calabi/curvature.hpp"

#include <cmath>

#include "calabi/parallel.hpp"

namespace calabi {

double AdmissibleClass::weight(const Vec2& z) const { return m == 0 ? 1.0 : std::pow(affine(z), m); }

void AdmissibleClass::validate(const DelzantPolytope& poly) const {
  if (m < 0) throw DegenerateInput("class dimension m must be nonnegative");
  if (m == 0) return;
  for (const auto& v : poly.vertices())
    if (!(affine(v) > 0.0)) throw DegenerateInput("class weight <p,z> + c_S is not positive on the polytope");
}

InverseHessianJet inverse_hessian_jet(const Jet& u) {
  InverseHessianJet h;
  h.G = u.d2;
  const auto ev = sym_eigenvalues(h.G);
  if (!(ev[1] > 0.0) || !(ev[0] > 1e-12 * ev[1])) throw CurvatureUndefined("Hessian of the potential is not positive definite");
  h.W = inverse(h.G);
  Mat2 dH[2];
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dH[k][i][j] = u.d3[i][j][k];
    const Mat2 t = h.W * dH[k] * h.W;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h.dW[k][i][j] = -t[i][j];
  }
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      Mat2 ddH{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ddH[i][j] = u.d4[i][j][k][l];
      const Mat2 a = h.W * dH[k] * h.W * dH[l] * h.W;
      const Mat2 b = h.W * dH[l] * h.W * dH[k] * h.W;
      const Mat2 c = h.W * ddH * h.W;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) h.ddW[k][l][i][j] = a[i][j] + b[i][j] - c[i][j];
    }
  return h;
}

double abreu_scalar(const InverseHessianJet& h) {
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r -= h.ddW[i][j][i][j];
  return r;
}

double fiber_riemann_norm(const InverseHessianJet& h) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += h.ddW[k][l][i][j] * h.ddW[i][j][k][l];
  return 0.25 * s;
}

double weighted_scalar(const InverseHessianJet& h, const AdmissibleClass& cls, const Vec2& z) {
  if (cls.m == 0) return cls.scal_S / cls.affine(z) + abreu_scalar(h);
  const double L = cls.affine(z);
  if (!(L > 0.0)) throw DomainError("class weight is not positive at the evaluation point");
  const double m = cls.m;
  const double P = std::pow(L, m);
  const double P1 = m * std::pow(L, m - 1.0);
  const double P2 = m * (m - 1.0) * std::pow(L, m - 2.0);
  double div = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      div += P2 * cls.p[r] * cls.p[s] * h.W[r][s] + 2.0 * P1 * cls.p[r] * h.dW[s][r][s] + P * h.ddW[r][s][r][s];
  return cls.scal_S / L - div / P;
}

CurvatureSample curvature_sample(const Jet& u, const AdmissibleClass& cls, const Vec2& x) {
  if (cls.m > 1) throw RegimeError("bundle curvature blocks require a curve base (m = 1)");
  const InverseHessianJet h = inverse_hessian_jet(u);
  CurvatureSample s;
  s.x = x;
  s.R_fiber = abreu_scalar(h);
  s.R_weighted = weighted_scalar(h, cls, x);
  s.rm2_fiber = fiber_riemann_norm(h);
  s.rm2_total = s.rm2_fiber;
  if (cls.m == 0) return s;

  const auto& W = h.W;
  const auto& G = h.G;
  // xi-derivatives of H = W(x(xi)): d/dxi_k = W_ka d/dx_a
  double H3[2][2][2] = {};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int a = 0; a < 2; ++a) H3[k][i][j] += W[k][a] * h.dW[a][i][j];
  double H4[2][2][2][2] = {};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a)
              H4[i][j][k][l] += W[l][b] * (h.dW[b][k][a] * h.dW[a][i][j] + W[k][a] * h.ddW[a][b][i][j]);

  const double L = cls.affine(x);
  const double a = cls.a();
  const Vec2 Wp = W * cls.p;
  const double g00 = 1.0 / (2.0 * L);

  s.rm_0000 = -4.0 * a * L - 4.0 * dot(cls.p, Wp);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      s.rm_00ij[i][j] = -0.5 * (cls.p[0] * H3[0][i][j] + cls.p[1] * H3[1][i][j]) + Wp[i] * Wp[j] / (2.0 * L);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          double q = 0.0;
          for (int st = 0; st < 4; ++st) {
            const int si = st / 2, ti = st % 2;
            q += G[si][ti] * H3[i][l][ti] * H3[j][k][si];
          }
          s.rm_ijkl[i][j][k][l] = 0.125 * (-H4[i][j][k][l] + q);
        }

  s.ric_00 = g00 * s.rm_0000;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.ric_00 += 2.0 * G[i][j] * s.rm_00ij[i][j];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double r = g00 * s.rm_00ij[i][j];
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r += 2.0 * G[k][l] * s.rm_ijkl[i][j][k][l];
      s.ric_ij[i][j] = r;
    }

  s.rm2_base = std::pow(g00, 4) * s.rm_0000 * s.rm_0000;
  double mixed = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) mixed += 4.0 * G[i][k] * G[j][l] * s.rm_00ij[i][j] * s.rm_00ij[k][l];
  s.rm2_mixed = 4.0 * g00 * g00 * mixed;
  s.rm2_total = s.rm2_base + s.rm2_mixed + s.rm2_fiber;
  return s;
}

double abreu_scalar(const SymplecticPotential& u, std::size_t node) {
  return abreu_scalar(inverse_hessian_jet(u.evaluate(node)));
}

double fiber_riemann_norm(const SymplecticPotential& u, std::size_t node) {
  return fiber_riemann_norm(inverse_hessian_jet(u.evaluate(node)));
}

double weighted_scalar(const SymplecticPotential& u, const AdmissibleClass& cls, std::size_t node) {
  return weighted_scalar(inverse_hessian_jet(u.evaluate(node)), cls, u.grid().node(node).x);
}

CurvatureSample admissible_blocks(const SymplecticPotential& u, const AdmissibleClass& cls, std::size_t node) {
  return curvature_sample(u.evaluate(node), cls, u.grid().node(node).x);
}

CurvatureSample sample_at(const SymplecticPotential& u, const AdmissibleClass& cls, const Vec2& x) {
  return curvature_sample(u.jet_at(x), cls, x);
}

std::vector<double> weighted_scalar_field(const SymplecticPotential& u, const AdmissibleClass& cls) {
  std::vector<double> r(u.grid().size());
  parallel_for(r.size(), [&](std::size_t k) { r[k] = weighted_scalar(u, cls, k); });
  return r;
}

std::vector<CurvatureSample> curvature_field(const SymplecticPotential& u, const AdmissibleClass& cls) {
  std::vector<CurvatureSample> r(u.grid().size());
  parallel_for(r.size(), [&](std::size_t k) { r[k] = admissible_blocks(u, cls, k); });
  return r;
}

double control_rm_rhs(const AdmissibleClass& cls, const Vec2& x) { return control_rm_rhs(cls, cls.affine(x)); }

double control_rm_rhs(const AdmissibleClass& cls, double L) {
  const double p1 = cls.p[0];
  const double t = 4.0 * p1 + 24.0 * p1 * p1 / L;
  return (cls.scal_S * cls.scal_S + 90.0 * std::pow(p1, 4) / (L * L) + t * t) / (L * L) + 4.0 / 3.0;
}

}  // namespace calabi
