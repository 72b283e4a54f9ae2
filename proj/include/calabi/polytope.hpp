#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calabi/types.hpp"

namespace calabi {

/// One facet l(x) = <x, normal> + offset >= 0 of a Delzant polytope.
struct Facet {
  std::array<int, 2> normal;
  double offset;

  double eval(const Vec2& x) const { return normal[0] * x[0] + normal[1] * x[1] + offset; }
  Vec2 normal_vec() const { return {double(normal[0]), double(normal[1])}; }
};

/// Two-dimensional Delzant polytope in facet form. Vertices are derived on construction
/// and the Delzant conditions are validated; an invalid presentation throws DegenerateInput.
class DelzantPolytope {
 public:
  explicit DelzantPolytope(std::vector<Facet> facets);

  const std::vector<Facet>& facets() const { return facets_; }
  /// Counter-clockwise vertex list; vertex k is the intersection of facets
  /// vertex_facets()[k][0] and vertex_facets()[k][1].
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 2>>& vertex_facets() const { return vertex_facets_; }

  /// Endpoints of facet i in counter-clockwise order.
  std::array<Vec2, 2> facet_segment(std::size_t i) const;
  /// Lattice length of facet i: Euclidean length divided by |v_i|.
  double lattice_length(std::size_t i) const;

  double area() const;
  Vec2 centroid() const;
  /// Axis-aligned bounding box {min, max}.
  std::array<Vec2, 2> bounding_box() const;

  /// min_i l_i(x); positive exactly in the interior.
  double min_facet_value(const Vec2& x) const;
  bool contains_interior(const Vec2& x) const { return min_facet_value(x) > 0.0; }
  /// Exact Euclidean distance from an interior point to the boundary.
  double distance_to_boundary(const Vec2& x) const;

 private:
  std::vector<Facet> facets_;
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 2>> vertex_facets_;
  std::vector<std::array<Vec2, 2>> segments_;
};

DelzantPolytope standard_triangle();
/// The square [-1,1]^2; used for flat test potentials.
DelzantPolytope standard_square();

DelzantPolytope polytope_from_json(const std::string& text);
DelzantPolytope load_polytope(const std::string& path);
std::string polytope_to_json(const DelzantPolytope& p);

enum class Stencil : std::uint8_t { Central, OneSided };

struct GridNode {
  std::array<int, 2> index;
  Vec2 x;
  double delta;  // min_i l_i(x)
  std::array<Stencil, 2> stencil;
};

/// Axis-aligned lattice of interior points x = anchor + h (i, j) with min_i l_i(x) >= delta_min.
class Grid {
 public:
  Grid(const DelzantPolytope& poly, int n, double delta_min);

  int n() const { return n_; }
  double h() const { return h_; }
  double delta_min() const { return delta_min_; }
  const Vec2& anchor() const { return anchor_; }
  std::size_t size() const { return nodes_.size(); }
  const GridNode& node(std::size_t k) const { return nodes_[k]; }
  const std::vector<GridNode>& nodes() const { return nodes_; }

  /// Node id at lattice index (i, j), or -1.
  long find(int i, int j) const;
  /// Neighbour along axis (0 = x, 1 = y) in direction dir (+1 or -1), or -1.
  long neighbour(std::size_t k, int axis, int dir) const { return nbr_[k][axis * 2 + (dir > 0 ? 1 : 0)]; }
  /// Nearest node to an arbitrary point (Euclidean).
  std::size_t nearest(const Vec2& x) const;

  bool same_layout(const Grid& other) const;

 private:
  int n_;
  double h_;
  double delta_min_;
  Vec2 anchor_;
  int span_;  // lattice extent per axis: indices 0..span_
  std::vector<GridNode> nodes_;
  std::vector<long> index_;  // (span_+1)^2 table
  std::vector<std::array<long, 4>> nbr_;
};

/// Node ids whose Euclidean distance to the boundary is at least eps.
std::vector<std::size_t> eps_region(const DelzantPolytope& poly, const Grid& grid, double eps);

/// Nodes of `region` having an 8-neighbour lattice point outside `region`.
std::vector<std::size_t> region_ring(const Grid& grid, const std::vector<std::size_t>& region);

struct BoundarySample {
  Vec2 x;
  double weight;
  std::size_t facet;
};

/// Composite Gauss-Legendre rule on the boundary for the lattice measure dsigma
/// (v_i wedge dsigma = dmu); the weights on facet i sum to its lattice length.
std::vector<BoundarySample> boundary_quadrature(const DelzantPolytope& poly, int segments_per_facet,
                                                int points_per_segment = 4);

}  // namespace calabi
