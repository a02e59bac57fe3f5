#include "lcm/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lcm {
namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double scale_of(const std::vector<Vec2>& v) {
  double s = 1;
  for (const auto& p : v) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// Drop repeated and collinear vertices of a closed cycle.
std::vector<Vec2> simplify_cycle(std::vector<Vec2> v, double tol) {
  bool changed = true;
  while (changed && v.size() >= 2) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() >= 2; ++i) {
      const Vec2& a = v[(i + v.size() - 1) % v.size()];
      const Vec2& b = v[i];
      const Vec2& c = v[(i + 1) % v.size()];
      const bool dup = (b - a).norm() <= tol;
      const bool col = v.size() >= 3 && std::abs(cross(b - a, c - b)) <= tol * ((b - a).norm() + (c - b).norm()) &&
                       (b - a).dot(c - b) >= 0;
      if (dup || col) {
        v.erase(v.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return v;
}

struct Line {
  Vec2 n;
  double h;
  int label;
};

bool intersect(const Line& a, const Line& b, Vec2& out) {
  const double det = cross(a.n, b.n);
  if (std::abs(det) < 1e-300) return false;
  out.x() = (a.h * b.n.y() - b.h * a.n.y()) / det;
  out.y() = (a.n.x() * b.h - b.n.x() * a.h) / det;
  return true;
}

}  // namespace

double Polygon::area() const {
  if (vertices.size() < 3) return 0;
  double a = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) a += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
  return 0.5 * a;
}

double Polygon::perimeter() const {
  if (vertices.size() < 2) return 0;
  double p = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) p += edge_length(i);
  return p;
}

Vec2 Polygon::centroid() const {
  if (vertices.empty()) return Vec2::Zero();
  const double A = area();
  if (vertices.size() < 3 || A <= 0) {
    Vec2 c = Vec2::Zero();
    for (const auto& v : vertices) c += v;
    return c / static_cast<double>(vertices.size());
  }
  Vec2 c = Vec2::Zero();
  const Vec2 o = vertices[0];
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2 p = vertices[i] - o, q = vertices[(i + 1) % vertices.size()] - o;
    c += cross(p, q) * (p + q);
  }
  return o + c / (6 * A);
}

double Polygon::support(const Vec2& dir) const {
  double s = -kInf;
  for (const auto& v : vertices) s = std::max(s, v.dot(dir));
  return s;
}

bool Polygon::contains(const Vec2& p, double tol) const {
  if (vertices.empty()) return false;
  if (vertices.size() == 1) return (p - vertices[0]).norm() <= tol;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if ((p - vertices[i]).dot(edge_normal(i)) > tol) return false;
  }
  if (vertices.size() == 2) {
    const Vec2 d = vertices[1] - vertices[0];
    const double t = (p - vertices[0]).dot(d) / d.squaredNorm();
    return t >= -tol && t <= 1 + tol;
  }
  return true;
}

Vec2 Polygon::edge_normal(std::size_t i) const {
  const Vec2 d = vertices[(i + 1) % vertices.size()] - vertices[i];
  return Vec2(d.y(), -d.x()).normalized();
}

double Polygon::edge_length(std::size_t i) const {
  return (vertices[(i + 1) % vertices.size()] - vertices[i]).norm();
}

double Polygon::diameter() const {
  double d = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j) d = std::max(d, (vertices[i] - vertices[j]).norm());
  return d;
}

Polygon Polygon::translated(const Vec2& v) const {
  Polygon p = *this;
  for (auto& x : p.vertices) x += v;
  return p;
}

Polygon Polygon::scaled(double s) const {
  Polygon p = *this;
  for (auto& x : p.vertices) x *= s;
  if (s == 0 && !p.vertices.empty()) p = make_point_polygon(Vec2::Zero());
  return p;
}

Polygon make_polygon(const std::vector<Vec2>& input) {
  std::vector<Vec2> v = input;
  const double tol = kPredicateTol * scale_of(v);
  v = simplify_cycle(v, tol);
  Polygon p;
  p.vertices = v;
  if (p.area() < 0) std::reverse(p.vertices.begin(), p.vertices.end());
  if (p.vertices.size() < 3 || p.area() <= tol * tol)
    throw std::invalid_argument("make_polygon: empty interior");
  const auto& w = p.vertices;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec2& a = w[i];
    const Vec2& b = w[(i + 1) % w.size()];
    const Vec2& c = w[(i + 2) % w.size()];
    if (cross(b - a, c - b) < -tol) throw std::invalid_argument("make_polygon: vertex cycle is not convex");
  }
  double turn = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec2 d1 = w[(i + 1) % w.size()] - w[i], d2 = w[(i + 2) % w.size()] - w[(i + 1) % w.size()];
    turn += std::atan2(cross(d1, d2), d1.dot(d2));
  }
  if (std::abs(turn - 2 * std::numbers::pi) > 1e-6) throw std::invalid_argument("make_polygon: self-intersecting cycle");
  return p;
}

Polygon make_point_polygon(const Vec2& p) {
  Polygon q;
  q.vertices = {p};
  q.degenerate = true;
  return q;
}

Polygon make_segment_polygon(const Vec2& a, const Vec2& b) {
  if ((a - b).norm() <= kPredicateTol * std::max(1.0, a.norm())) return make_point_polygon(a);
  Polygon q;
  q.vertices = {a, b};
  q.degenerate = true;
  return q;
}

Polygon make_box(const Vec2& lo, const Vec2& hi) {
  return make_polygon({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
}

Polygon make_regular_polygon(int n, double r, const Vec2& c, double phase) {
  std::vector<Vec2> v;
  for (int k = 0; k < n; ++k) {
    const double a = phase + 2 * std::numbers::pi * k / n;
    v.emplace_back(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
  }
  return make_polygon(v);
}

Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a == b; }), pts.end());
  if (pts.empty()) return Polygon{};
  if (pts.size() == 1) return make_point_polygon(pts[0]);
  const double tol = kPredicateTol * scale_of(pts);
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= tol * (pts[i] - h[k - 2]).norm()) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= tol * (pts[i - 1] - h[k - 2]).norm()) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  if (h.size() < 3) return make_segment_polygon(pts.front(), pts.back());
  Polygon p;
  p.vertices = h;
  if (p.area() <= tol * tol) return make_segment_polygon(pts.front(), pts.back());
  return p;
}

Polygon halfplane_intersection(const std::vector<Halfplane>& constraints) {
  if (constraints.empty()) throw std::invalid_argument("halfplane_intersection: empty constraint list");
  double hs = 1;
  for (const auto& c : constraints) hs = std::max(hs, std::abs(c.height));
  const double B = 1e6 * hs;
  std::vector<Line> lines = {{Vec2(0, -1), B, -1}, {Vec2(1, 0), B, -1}, {Vec2(0, 1), B, -1}, {Vec2(-1, 0), B, -1}};
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    const double nn = constraints[j].normal.norm();
    if (!(nn > 0)) throw std::invalid_argument("halfplane_intersection: zero normal");
    lines.push_back({constraints[j].normal / nn, constraints[j].height / nn, static_cast<int>(j)});
  }
  std::vector<int> edges = {0, 1, 2, 3};
  auto vertices_of = [&](const std::vector<int>& e) {
    std::vector<Vec2> v(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      const int a = e[(i + e.size() - 1) % e.size()], b = e[i];
      if (!intersect(lines[a], lines[b], v[i])) v[i] = Vec2::Constant(std::nan(""));
    }
    return v;
  };
  Polygon out;
  for (std::size_t k = 4; k < lines.size(); ++k) {
    const Line& L = lines[k];
    std::vector<Vec2> v = vertices_of(edges);
    const std::size_t m = v.size();
    std::vector<double> s(m), tol(m);
    bool any_in = false, any_out = false;
    for (std::size_t i = 0; i < m; ++i) {
      s[i] = v[i].dot(L.n) - L.h;
      tol[i] = kPredicateTol * (1 + std::abs(L.h) + v[i].norm());
      if (s[i] < -tol[i]) any_in = true;
      if (s[i] > tol[i]) any_out = true;
    }
    if (!any_out) continue;
    if (!any_in) {
      // Touching or disjoint: the result has empty interior.
      out.degenerate = true;
      for (std::size_t i = 0; i < m; ++i)
        if (std::abs(s[i]) <= tol[i]) out.vertices.push_back(v[i]);
      if (out.vertices.size() > 2) out.vertices.resize(2);
      return out;
    }
    std::vector<int> next;
    for (std::size_t i = 0; i < m; ++i) {
      const bool in_a = s[i] <= tol[i], in_b = s[(i + 1) % m] <= tol[(i + 1) % m];
      if (in_a || in_b) next.push_back(edges[i]);
      if (in_a && !in_b) next.push_back(static_cast<int>(k));
    }
    // Remove zero-length edges.
    bool again = true;
    while (again && next.size() >= 3) {
      again = false;
      std::vector<Vec2> w = vertices_of(next);
      for (std::size_t i = 0; i < next.size(); ++i) {
        const Vec2& a = w[i];
        const Vec2& b = w[(i + 1) % next.size()];
        if ((a - b).norm() <= kPredicateTol * (1 + a.norm())) {
          next.erase(next.begin() + static_cast<long>(i));
          again = true;
          break;
        }
      }
    }
    edges = next;
    if (edges.size() < 3) {
      out.degenerate = true;
      return out;
    }
  }
  for (int e : edges)
    if (lines[e].label < 0) throw UnboundedRegion("halfplane_intersection: unbounded feasible region");
  // Vertex i is the start of edge i: intersection of edge i-1 and edge i.
  out.vertices = vertices_of(edges);
  for (int e : edges) out.edge_labels.push_back(lines[e].label);
  const double sc = scale_of(out.vertices);
  if (out.area() <= 1e-14 * sc * sc) {
    out.degenerate = true;
    out.edge_labels.clear();
  }
  return out;
}

namespace {

// Edge vectors starting from the lowest (then leftmost) vertex, in CCW angular order.
void edge_sequence(const Polygon& P, Vec2& start, std::vector<Vec2>& edges) {
  const auto& v = P.vertices;
  std::size_t s = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].y() < v[s].y() || (v[i].y() == v[s].y() && v[i].x() < v[s].x())) s = i;
  start = v[s];
  edges.clear();
  if (v.size() < 2) return;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t i = (s + k) % v.size(), j = (s + k + 1) % v.size();
    edges.push_back(v[j] - v[i]);
  }
}

double edge_angle(const Vec2& e) {
  double a = std::atan2(e.y(), e.x());
  if (a < 0) a += 2 * std::numbers::pi;
  return a;
}

}  // namespace

Polygon minkowski_sum(const Polygon& P, const Polygon& Q) {
  if (P.empty() || Q.empty()) return Polygon{};
  Vec2 sp, sq;
  std::vector<Vec2> ep, eq;
  edge_sequence(P, sp, ep);
  edge_sequence(Q, sq, eq);
  // A segment is stored as a 2-cycle; its edge order from the lowest vertex is already angular.
  std::vector<std::pair<double, Vec2>> all;
  for (const auto& e : ep)
    if (e.norm() > 0) all.emplace_back(edge_angle(e), e);
  for (const auto& e : eq)
    if (e.norm() > 0) all.emplace_back(edge_angle(e), e);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec2> verts;
  Vec2 cur = sp + sq;
  verts.push_back(cur);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    cur += all[i].second;
    verts.push_back(cur);
  }
  if (all.empty()) return make_point_polygon(cur);
  const double tol = kPredicateTol * scale_of(verts);
  std::vector<Vec2> v = simplify_cycle(verts, tol);
  Polygon r;
  r.vertices = v;
  if (v.size() < 3 || r.area() <= tol * tol) {
    // Sum of collinear segments/points.
    return convex_hull(verts);
  }
  return r;
}

Polygon minkowski_difference(const Polygon& P, const Polygon& Q) {
  if (P.vertices.size() < 3 || P.degenerate) throw std::invalid_argument("minkowski_difference: P must have interior");
  if (Q.empty()) throw std::invalid_argument("minkowski_difference: Q empty");
  std::vector<Halfplane> hp;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vec2 n = P.edge_normal(i);
    hp.push_back({n, P.support(n) - Q.support(n), static_cast<int>(i)});
  }
  Polygon r = halfplane_intersection(hp);
  if (!r.degenerate) r.edge_labels.clear();
  return r;
}

double mixed_volume_v1(const Polygon& K, const Polygon& L) {
  if (K.vertices.size() < 2 || L.empty()) return 0;
  double s = 0;
  for (std::size_t i = 0; i < K.size(); ++i) s += L.support(K.edge_normal(i)) * K.edge_length(i);
  return 0.5 * s;
}

double matheron_beta(const Polygon& A, const Polygon& B, double t) {
  if (t >= 0) {
    if (t == 0) return A.area();
    return minkowski_sum(A, B.scaled(t)).area();
  }
  Polygon e = minkowski_difference(A, B.scaled(-t));
  if (e.empty()) throw std::domain_error("matheron_beta: erosion is empty");
  return e.degenerate ? 0.0 : e.area();
}

}  // namespace lcm
