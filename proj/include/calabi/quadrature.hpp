#pragma once

#include <functional>
#include <span>
#include <vector>

#include "calabi/polytope.hpp"

namespace calabi {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

GaussRule gauss_legendre(int n);

/// Integral of a smooth function over the polytope by fan triangulation and a collapsed
/// Gauss product rule with `order` points per direction (exact for polynomials of degree
/// <= 2*order - 2).
double integrate_over(const DelzantPolytope& poly, const std::function<double(const Vec2&)>& fn, int order = 8);

/// Sutherland-Hodgman clip of a convex polygon by the polytope's half-planes.
std::vector<Vec2> clip_to_polytope(const std::vector<Vec2>& polygon, const DelzantPolytope& poly);

double polygon_area(const std::vector<Vec2>& polygon);
Vec2 polygon_centroid(const std::vector<Vec2>& polygon);

/// Node-based quadrature over P. Each lattice cell [x-h/2, x+h/2]^2 is clipped against P;
/// the clipped piece is charged to its own node, or to the nearest node when its lattice
/// point is not a grid node. First- and second-moment corrections with the lattice gradient
/// and Hessian of the node field make the rule exact for quadratic integrands; the
/// first-moment-only rule (exact for affine integrands, second order) is kept as integrate2.
class InteriorQuadrature {
 public:
  InteriorQuadrature(const DelzantPolytope& poly, const Grid& grid);

  /// Integral of a node field. The gradient used for the moment correction is the
  /// lattice finite-difference gradient of `values`.
  double integrate(std::span<const double> values) const;
  /// First-moment rule only.
  double integrate2(std::span<const double> values) const;

  /// Integral with caller-supplied gradients (analytic integrands).
  double integrate(std::span<const double> values, std::span<const Vec2> gradients) const;

  const std::vector<double>& weights() const { return weight_; }
  const std::vector<Vec2>& moments() const { return moment_; }
  /// Second moments about each node.
  const std::vector<Mat2>& second_moments() const { return moment2_; }
  double total_weight() const;

 private:
  const Grid* grid_;
  std::vector<double> weight_;
  std::vector<Vec2> moment_;
  std::vector<Mat2> moment2_;
};

}  // namespace calabi
