#ifndef LCM_POLYGON_HPP
#define LCM_POLYGON_HPP

#include <optional>
#include <vector>

#include "lcm/types.hpp"

namespace lcm {

/// Halfplane {x : <x, normal> <= height}. The normal is unit length.
struct Halfplane {
  Vec2 normal;
  double height = 0;
  int label = -1;
};

/// Convex polygon with a counterclockwise vertex cycle. Points and segments are
/// allowed only with `degenerate` set; an empty polygon has no vertices.
struct Polygon {
  std::vector<Vec2> vertices;
  bool degenerate = false;
  /// Optional per-edge label (edge i runs from vertex i to vertex i+1): the index of
  /// the constraint that produced it in halfplane_intersection, -1 otherwise.
  std::vector<int> edge_labels;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }
  double area() const;
  double perimeter() const;
  Vec2 centroid() const;
  double support(const Vec2& dir) const;
  bool contains(const Vec2& p, double tol = 1e-12) const;
  /// Outward unit normal and length of edge i.
  Vec2 edge_normal(std::size_t i) const;
  double edge_length(std::size_t i) const;
  double diameter() const;
  Polygon translated(const Vec2& v) const;
  Polygon scaled(double s) const;
};

/// Validating constructor: removes duplicate and collinear vertices, orients
/// counterclockwise, rejects non-convex cycles and empty interiors.
Polygon make_polygon(const std::vector<Vec2>& vertices);
Polygon make_point_polygon(const Vec2& p);
Polygon make_segment_polygon(const Vec2& a, const Vec2& b);
Polygon make_box(const Vec2& lo, const Vec2& hi);
/// Regular n-gon inscribed in the circle of radius r about c.
Polygon make_regular_polygon(int n, double r, const Vec2& c = Vec2::Zero(), double phase = 0);
Polygon convex_hull(std::vector<Vec2> points);

struct UnboundedRegion : std::runtime_error {
  explicit UnboundedRegion(const std::string& w) : std::runtime_error(w) {}
};

/// {x : <x, n_j> <= h_j for all j}. Empty or lower-dimensional results come back
/// flagged `degenerate` (empty vertex list when infeasible). Throws UnboundedRegion
/// when the region is unbounded and no bounding constraints were supplied.
Polygon halfplane_intersection(const std::vector<Halfplane>& constraints);

Polygon minkowski_sum(const Polygon& P, const Polygon& Q);
/// P minus Q in the erosion sense; degenerate/empty results flagged.
Polygon minkowski_difference(const Polygon& P, const Polygon& Q);
/// Mixed volume V_1(K, L) = (1/2) sum_e h_L(n_e) |e|.
double mixed_volume_v1(const Polygon& K, const Polygon& L);
/// |A + tB| for t >= 0 and |A minus |t|B| for t < 0.
double matheron_beta(const Polygon& A, const Polygon& B, double t);

}  // namespace lcm

#endif
