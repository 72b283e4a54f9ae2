#include "calabi/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "calabi/quadrature.hpp"

namespace calabi {

namespace {

constexpr double kVertexTol = 1e-9;

double segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(x - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(x - (a + t * ab));
}

}  // namespace

DelzantPolytope::DelzantPolytope(std::vector<Facet> facets) : facets_(std::move(facets)) {
  const std::size_t d = facets_.size();
  if (d < 3) throw DegenerateInput("polytope needs at least 3 facets");
  for (const auto& f : facets_) {
    if (std::gcd(std::abs(f.normal[0]), std::abs(f.normal[1])) != 1)
      throw DegenerateInput("facet normal (" + std::to_string(f.normal[0]) + "," +
                            std::to_string(f.normal[1]) + ") is not primitive");
  }

  std::vector<int> incidence(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const auto& a = facets_[i];
      const auto& b = facets_[j];
      const double dt = double(a.normal[0]) * b.normal[1] - double(a.normal[1]) * b.normal[0];
      if (dt == 0.0) continue;
      // solve <x,va> = -ca, <x,vb> = -cb
      const Vec2 x{(-a.offset * b.normal[1] + b.offset * a.normal[1]) / dt,
                   (-b.offset * a.normal[0] + a.offset * b.normal[0]) / dt};
      bool inside = true;
      int through = 0;
      for (const auto& f : facets_) {
        const double l = f.eval(x);
        if (l < -kVertexTol) inside = false;
        if (std::abs(l) <= kVertexTol) ++through;
      }
      if (!inside) continue;
      if (through != 2) throw DegenerateInput("more than two facets meet at a vertex");
      if (std::abs(dt) != 1.0) throw DegenerateInput("vertex normals do not form a lattice basis");
      vertices_.push_back(x);
      vertex_facets_.push_back({int(i), int(j)});
      ++incidence[i];
      ++incidence[j];
    }
  }
  if (vertices_.size() < 3) throw DegenerateInput("polytope is unbounded or has empty interior");
  for (std::size_t i = 0; i < d; ++i)
    if (incidence[i] != 2) throw DegenerateInput("facet " + std::to_string(i) + " is redundant or unbounded");

  Vec2 c{0.0, 0.0};
  for (const auto& v : vertices_) c = c + v;
  c = (1.0 / double(vertices_.size())) * c;
  for (const auto& f : facets_)
    if (f.eval(c) <= 0.0) throw DegenerateInput("facet normals are not inward-pointing");

  std::vector<std::size_t> order(vertices_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    return std::atan2(vertices_[p][1] - c[1], vertices_[p][0] - c[0]) <
           std::atan2(vertices_[q][1] - c[1], vertices_[q][0] - c[0]);
  });
  std::vector<Vec2> v2;
  std::vector<std::array<int, 2>> vf2;
  for (auto k : order) {
    v2.push_back(vertices_[k]);
    vf2.push_back(vertex_facets_[k]);
  }
  vertices_ = std::move(v2);
  vertex_facets_ = std::move(vf2);
  if (area() <= 0.0) throw DegenerateInput("polytope has empty interior");

  segments_.resize(d);
  const std::size_t nv = vertices_.size();
  for (std::size_t k = 0; k < nv; ++k) {
    const std::size_t k1 = (k + 1) % nv;
    // consecutive vertices share exactly one facet
    for (int a : vertex_facets_[k])
      for (int b : vertex_facets_[k1])
        if (a == b) segments_[a] = {vertices_[k], vertices_[k1]};
  }
}

std::array<Vec2, 2> DelzantPolytope::facet_segment(std::size_t i) const { return segments_.at(i); }

double DelzantPolytope::lattice_length(std::size_t i) const {
  const auto& s = segments_.at(i);
  return norm(s[1] - s[0]) / norm(facets_[i].normal_vec());
}

double DelzantPolytope::area() const {
  double a = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = vertices_[k];
    const auto& q = vertices_[(k + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

Vec2 DelzantPolytope::centroid() const {
  double cx = 0.0, cy = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = vertices_[k];
    const auto& q = vertices_[(k + 1) % n];
    const double w = p[0] * q[1] - q[0] * p[1];
    cx += (p[0] + q[0]) * w;
    cy += (p[1] + q[1]) * w;
  }
  const double a6 = 6.0 * area();
  return {cx / a6, cy / a6};
}

std::array<Vec2, 2> DelzantPolytope::bounding_box() const {
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{-lo[0], -lo[1]};
  for (const auto& v : vertices_) {
    lo = {std::min(lo[0], v[0]), std::min(lo[1], v[1])};
    hi = {std::max(hi[0], v[0]), std::max(hi[1], v[1])};
  }
  return {lo, hi};
}

double DelzantPolytope::min_facet_value(const Vec2& x) const {
  double m = std::numeric_limits<double>::max();
  for (const auto& f : facets_) m = std::min(m, f.eval(x));
  return m;
}

double DelzantPolytope::distance_to_boundary(const Vec2& x) const {
  double d = std::numeric_limits<double>::max();
  for (const auto& s : segments_) d = std::min(d, segment_distance(x, s[0], s[1]));
  return d;
}

DelzantPolytope standard_triangle() {
  return DelzantPolytope({{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{-1, -1}, 1.0}});
}

DelzantPolytope standard_square() {
  return DelzantPolytope({{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{-1, 0}, 1.0}, {{0, -1}, 1.0}});
}

DelzantPolytope polytope_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("polytope JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("facets") || !j["facets"].is_array())
    throw ConfigError("polytope JSON must be an object with a 'facets' array");
  std::vector<Facet> facets;
  for (const auto& f : j["facets"]) {
    if (!f.contains("normal") || !f.contains("offset") || !f["normal"].is_array() || f["normal"].size() != 2)
      throw ConfigError("each facet needs 'normal' [a,b] and 'offset'");
    for (const auto& c : f["normal"])
      if (!c.is_number_integer()) throw ConfigError("facet normals must be integers");
    if (!f["offset"].is_number()) throw ConfigError("facet offset must be a number");
    facets.push_back({{f["normal"][0].get<int>(), f["normal"][1].get<int>()}, f["offset"].get<double>()});
  }
  try {
    return DelzantPolytope(std::move(facets));
  } catch (const DegenerateInput& e) {
    throw ConfigError(std::string("polytope rejected: ") + e.what());
  }
}

DelzantPolytope load_polytope(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open polytope file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return polytope_from_json(ss.str());
}

std::string polytope_to_json(const DelzantPolytope& p) {
  nlohmann::json j;
  j["facets"] = nlohmann::json::array();
  for (const auto& f : p.facets())
    j["facets"].push_back({{"normal", {f.normal[0], f.normal[1]}}, {"offset", f.offset}});
  return j.dump();
}

// ---------------------------------------------------------------------------

Grid::Grid(const DelzantPolytope& poly, int n, double delta_min) : n_(n), delta_min_(delta_min) {
  if (n < 3) throw DegenerateInput("grid resolution N must be at least 3");
  const auto box = poly.bounding_box();
  const double width = std::max(box[1][0] - box[0][0], box[1][1] - box[0][1]);
  h_ = width / n;
  if (!(delta_min > 0.0) || !(delta_min < h_))
    throw DegenerateInput("delta_min must lie in (0, h)");
  anchor_ = box[0];
  span_ = n;

  index_.assign(std::size_t(span_ + 1) * (span_ + 1), -1);
  for (int j = 0; j <= span_; ++j) {
    for (int i = 0; i <= span_; ++i) {
      const Vec2 x{anchor_[0] + h_ * i, anchor_[1] + h_ * j};
      const double dl = poly.min_facet_value(x);
      if (dl >= delta_min) {
        index_[std::size_t(j) * (span_ + 1) + i] = long(nodes_.size());
        nodes_.push_back({{i, j}, x, dl, {Stencil::Central, Stencil::Central}});
      }
    }
  }
  if (nodes_.empty()) throw DegenerateInput("grid is empty for the given N and delta_min");

  nbr_.resize(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const auto [i, j] = nodes_[k].index;
    nbr_[k] = {find(i - 1, j), find(i + 1, j), find(i, j - 1), find(i, j + 1)};
    for (int axis = 0; axis < 2; ++axis) {
      int ok = 0;
      for (int dir : {-1, 1}) {
        const int di = axis == 0 ? dir : 0, dj = axis == 1 ? dir : 0;
        if (find(i + di, j + dj) >= 0 && find(i + 2 * di, j + 2 * dj) >= 0) ++ok;
      }
      nodes_[k].stencil[axis] = ok == 2 ? Stencil::Central : Stencil::OneSided;
    }
  }
}

long Grid::find(int i, int j) const {
  if (i < 0 || j < 0 || i > span_ || j > span_) return -1;
  return index_[std::size_t(j) * (span_ + 1) + i];
}

std::size_t Grid::nearest(const Vec2& x) const {
  const int ci = int(std::lround((x[0] - anchor_[0]) / h_));
  const int cj = int(std::lround((x[1] - anchor_[1]) / h_));
  long best = -1;
  double bd = std::numeric_limits<double>::max();
  for (int r = 0; r <= span_ && best < 0; ++r) {
    // search growing square rings; a hit at ring r is final after checking ring r+1
    for (int rr = r; rr <= r + 1; ++rr) {
      for (int dj = -rr; dj <= rr; ++dj) {
        for (int di = -rr; di <= rr; ++di) {
          if (std::max(std::abs(di), std::abs(dj)) != rr) continue;
          const long k = find(ci + di, cj + dj);
          if (k < 0) continue;
          const double d = norm(x - nodes_[k].x);
          if (d < bd) {
            bd = d;
            best = k;
          }
        }
      }
    }
  }
  if (best < 0) throw DomainError("no grid node near point");
  return std::size_t(best);
}

bool Grid::same_layout(const Grid& other) const {
  return n_ == other.n_ && h_ == other.h_ && delta_min_ == other.delta_min_ && anchor_ == other.anchor_ &&
         nodes_.size() == other.nodes_.size();
}

std::vector<std::size_t> eps_region(const DelzantPolytope& poly, const Grid& grid, double eps) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (poly.distance_to_boundary(grid.node(k).x) >= eps) out.push_back(k);
  return out;
}

std::vector<std::size_t> region_ring(const Grid& grid, const std::vector<std::size_t>& region) {
  std::vector<char> in(grid.size(), 0);
  for (auto k : region) in[k] = 1;
  std::vector<std::size_t> ring;
  for (auto k : region) {
    const auto [i, j] = grid.node(k).index;
    bool edge = false;
    for (int dj = -1; dj <= 1 && !edge; ++dj)
      for (int di = -1; di <= 1 && !edge; ++di) {
        if (di == 0 && dj == 0) continue;
        const long q = grid.find(i + di, j + dj);
        if (q < 0 || !in[q]) edge = true;
      }
    if (edge) ring.push_back(k);
  }
  return ring;
}

std::vector<BoundarySample> boundary_quadrature(const DelzantPolytope& poly, int segments_per_facet,
                                                int points_per_segment) {
  const auto gl = gauss_legendre(points_per_segment);
  std::vector<BoundarySample> out;
  for (std::size_t i = 0; i < poly.facets().size(); ++i) {
    const auto seg = poly.facet_segment(i);
    const double total = poly.lattice_length(i);
    const double piece = total / segments_per_facet;
    for (int s = 0; s < segments_per_facet; ++s) {
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double t = (s + 0.5 * (gl.nodes[q] + 1.0)) / segments_per_facet;
        out.push_back({seg[0] + t * (seg[1] - seg[0]), 0.5 * gl.weights[q] * piece, i});
      }
    }
  }
  return out;
}

}  // namespace calabi
