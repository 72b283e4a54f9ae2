#include "calabi/sobolev.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "calabi/quadrature.hpp"

namespace calabi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

ClassTopology ClassTopology::projective_plane(int euler_char_base) {
  ClassTopology t;
  t.c1_squared = 4.5;
  t.volume = 0.5 * 4.0 * kPi2 * 4.5;
  t.r_bar = 4.0;
  t.euler_char_base = euler_char_base;
  return t;
}

void ClassTopology::validate() const {
  if (!(volume > 0.0)) throw DegenerateInput("class volume must be positive");
  if (!(c1_squared > 0.0)) throw DegenerateInput("c1^2 must be positive");
}

double riemannian_calabi(double polytope_calabi) { return 0.5 * 4.0 * kPi2 * polytope_calabi; }

double eq_cs_threshold(const ClassTopology& topo) {
  return (96.0 * kPi2 * topo.c1_squared - 2.0 * topo.r_bar * topo.r_bar * topo.volume) / 3.0;
}

SobolevCertificate yamabe_lower_bound(double ca, const ClassTopology& topo) {
  topo.validate();
  if (!(ca >= 0.0)) throw DegenerateInput("Calabi energy must be nonnegative");
  SobolevCertificate c;
  c.ca = ca;
  c.calabi_l2 = std::sqrt(ca);
  const double int_r2 = ca + topo.r_bar * topo.r_bar * topo.volume;
  const double rad = 96.0 * kPi2 * topo.c1_squared - 2.0 * int_r2;
  c.eq_cs_satisfied = rad >= ca;
  std::ostringstream log;
  log << "int R^2 = Ca + R_bar^2 Vol = " << fmt(int_r2) << "\n";
  log << "96 pi^2 c1^2 - 2 int R^2 = " << fmt(rad) << "\n";
  log << "eq_cs: radicand >= Ca  <=>  Ca <= " << fmt(eq_cs_threshold(topo)) << " ("
      << fmt(eq_cs_threshold(topo) / kPi2) << " pi^2): " << (c.eq_cs_satisfied ? "holds" : "fails") << "\n";
  log << "stated proposition threshold 96 pi^2 (" << fmt(96.0 * kPi2) << "): Ca "
      << (ca < 96.0 * kPi2 ? "below" : "not below") << "\n";
  if (rad > 0.0) {
    c.yamabe_lower = std::sqrt(rad);
    log << "Y >= sqrt(radicand) = " << fmt(c.yamabe_lower) << "\n";
  } else {
    log << "radicand not positive: no Yamabe lower bound\n";
  }
  c.derivation_log = log.str();
  return c;
}

SobolevCertificate sobolev_bound(SobolevCertificate cert, const ClassTopology& topo) {
  topo.validate();
  std::ostringstream log;
  const double pref = std::max(6.0, topo.r_bar * std::sqrt(topo.volume));
  log << "prefactor max(6, R_bar sqrt(Vol)) = " << fmt(pref) << "\n";
  log << "subtrahend |R - R_bar|_L2 = sqrt(Ca) = " << fmt(cert.calabi_l2)
      << " (the proposition as stated subtracts Ca itself)\n";
  cert.sobolev_bound.reset();
  if (!cert.eq_cs_satisfied) {
    log << "eq_cs fails: no Sobolev bound\n";
  } else if (!(cert.yamabe_lower > cert.calabi_l2)) {
    log << "Y lower bound " << fmt(cert.yamabe_lower) << " <= sqrt(Ca): no Sobolev bound\n";
  } else {
    cert.sobolev_bound = pref / (cert.yamabe_lower - cert.calabi_l2);
    log << "C_s <= " << fmt(*cert.sobolev_bound) << "\n";
  }
  cert.derivation_log += log.str();
  return cert;
}

FiberEnergyBound fiber_energy_bound(const AdmissibleClass& cls, const ClassTopology& topo) {
  topo.validate();
  const double p1 = cls.p[0], p2 = cls.p[1];
  if (cls.m != 1) throw RegimeError("fiber bound needs m = 1 (base is a curve)");
  if (!(p1 >= p2)) throw RegimeError("fiber bound needs p1 >= p2");
  if (!(p2 >= 1.0)) throw RegimeError("fiber bound needs p2 >= 1");
  if (cls.scal_S != -1.0 && cls.scal_S != 0.0 && cls.scal_S != 1.0)
    throw RegimeError("fiber bound needs Scal_S in {-1, 0, 1}");
  if (!(cls.c_S >= 12.0 * p1)) throw RegimeError("fiber bound needs c_S >= 12 p1");
  if (cls.chi_S == 0) throw RegimeError("fiber bound needs chi(S) != 0 (base volume |4 pi chi| vanishes)");

  FiberEnergyBound b;
  // <p,z> over the triangle lies in [-p1 - p2, 2 p1 - p2] within [-2 p1, 2 p1]
  b.weight_min = cls.c_S - 2.0 * p1;
  b.weight_max = cls.c_S + 2.0 * p1;
  b.sup_rm2 = control_rm_rhs(cls, b.weight_min);
  b.sup_rm2_bound = 4.0 / 3.0 + std::ceil(2.0 * (b.sup_rm2 - 4.0 / 3.0)) / 2.0;
  const double base = 4.0 * kPi * std::abs(cls.chi_S) * (4.0 * kPi2 / 6.0);
  b.total_rm2_bound = base * topo.c1_squared * b.weight_max * b.sup_rm2_bound;
  b.fiber_rm2_bound = b.total_rm2_bound / (base * b.weight_min);
  const double fs_rm2 = 4.0 / 3.0 * topo.c1_squared;
  b.ca_bound = 8.0 * kPi2 * (b.fiber_rm2_bound - fs_rm2);
  b.certificate = certify(b.ca_bound, topo);

  std::ostringstream log;
  log << "p(z) on the closed triangle within [" << fmt(b.weight_min) << ", " << fmt(b.weight_max) << "]\n";
  log << "sup |Rm|^2 <= " << fmt(b.sup_rm2) << " < " << fmt(b.sup_rm2_bound) << "\n";
  log << "int_X |Rm|^2 < " << fmt(b.total_rm2_bound) << "\n";
  log << "int_P |Rm|^2_fiber dmu < " << fmt(b.fiber_rm2_bound) << "\n";
  log << "Ca < 8 pi^2 (" << fmt(b.fiber_rm2_bound) << " - " << fmt(fs_rm2) << ") = " << fmt(b.ca_bound) << " = "
      << fmt(b.ca_bound / kPi2) << " pi^2\n";
  b.certificate.derivation_log = log.str() + b.certificate.derivation_log;
  return b;
}

std::vector<TestFunction> builtin_test_functions(const DelzantPolytope& poly) {
  const Vec2 c = poly.centroid();
  std::vector<TestFunction> fns;
  fns.push_back({"one", closed_form(Polynomial2::constant(1.0))});
  fns.push_back({"x", closed_form(Polynomial2::affine(1.0, 0.0, 0.0))});
  fns.push_back({"y", closed_form(Polynomial2::affine(0.0, 1.0, 0.0))});
  fns.push_back({"x+y+3", closed_form(Polynomial2::affine(1.0, 1.0, 3.0))});
  fns.push_back({"x^2+y^2", closed_form(Polynomial2::monomial(2, 0) + Polynomial2::monomial(0, 2))});
  fns.push_back({"xy", closed_form(Polynomial2::monomial(1, 1))});
  fns.push_back({"facet_bump", closed_form(facet_bump(poly))});
  for (double w : {0.25, 0.5, 1.0}) fns.push_back({"gauss_centroid_" + fmt(w), gaussian_bump(c, w)});
  for (const auto& v : poly.vertices()) {
    const Vec2 x{0.7 * v[0] + 0.3 * c[0], 0.7 * v[1] + 0.3 * c[1]};
    fns.push_back({"gauss_(" + fmt(x[0]) + "," + fmt(x[1]) + ")", gaussian_bump(x, 0.3)});
  }
  return fns;
}

SobolevRatio sobolev_inequality_test(const SymplecticPotential& u, const AdmissibleClass& cls,
                                     const std::vector<TestFunction>& fns) {
  const Grid& g = u.grid();
  const InteriorQuadrature q(u.polytope(), g);
  const std::size_t n = g.size();
  std::vector<double> w(n);
  std::vector<Mat2> W(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = cls.weight(g.node(k).x);
    W[k] = inverse(u.evaluate(k, 2).d2);
  }
  SobolevRatio out;
  std::vector<double> a3(n), a2(n), ag(n);
  for (const auto& t : fns) {
    for (std::size_t k = 0; k < n; ++k) {
      const Jet j = t.f(g.node(k).x);
      const double v = std::abs(j.value);
      a3[k] = v * v * v * w[k];
      a2[k] = v * v * w[k];
      double s = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int l = 0; l < 2; ++l) s += W[k][i][l] * j.d1[i] * j.d1[l];
      ag[k] = s * w[k];
    }
    const double l3 = std::cbrt(std::max(0.0, q.integrate(a3)));
    const double l2 = std::sqrt(std::max(0.0, q.integrate(a2)));
    const double gr = std::sqrt(std::max(0.0, q.integrate(ag)));
    const double r = l2 + gr > 0.0 ? l3 / (l2 + gr) : 0.0;
    out.ratios.push_back(r);
    if (r > out.worst) {
      out.worst = r;
      out.worst_name = t.name;
    }
  }
  return out;
}

}  // namespace calabi
