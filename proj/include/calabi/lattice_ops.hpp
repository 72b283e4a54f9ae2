#pragma once

#include <span>
#include <vector>

#include "calabi/polytope.hpp"

namespace calabi {

// Finite-difference operators on node fields of a Grid. Rows and columns of the lattice
// restricted to a convex polytope are contiguous, so each 1-D operator walks along its
// axis: central 3-point where both neighbours exist, second-order one-sided otherwise,
// and a local least-squares cubic fit on rows too short for the one-sided stencil.

/// First derivative along `axis`.
std::vector<double> lattice_d1(const Grid& grid, std::span<const double> f, int axis);
/// Second derivative along `axis`.
std::vector<double> lattice_d2(const Grid& grid, std::span<const double> f, int axis);

/// Partial derivative d^(a+b) f / dx^a dy^b for a + b <= 4, composed from the 1-D operators.
/// Derivatives of order 2 to 4 at nodes without a complete radius-2 neighbourhood come
/// from lattice_fit_partials instead.
std::vector<double> lattice_partial(const Grid& grid, std::span<const double> f, int a, int b);

/// True if every lattice point within Chebyshev distance `radius` of node k is a node.
bool lattice_clean(const Grid& grid, std::size_t k, int radius);

using PartialTable = std::array<std::array<double, 5>, 5>;  // [a][b], a + b <= 4

/// All partials up to order 4 at node k from a least-squares polynomial fit of the given
/// degree over the nearest nodes.
PartialTable lattice_fit_partials(const Grid& grid, std::span<const double> f, std::size_t k, int degree = 5);

std::vector<Vec2> lattice_gradient(const Grid& grid, std::span<const double> f);
std::vector<Mat2> lattice_hessian(const Grid& grid, std::span<const double> f);

}  // namespace calabi
