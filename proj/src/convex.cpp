#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "lcm/cells.hpp"
#include "lcm/convex.hpp"
#include "lcm/quadrature.hpp"
#include "lcm/rng.hpp"

namespace lcm {

namespace detail {


// Domain interval of a 1D polyhedral function, with the binding facet at each end.
void domain_1d(const Polyhedral& P, double& lo, double& hi, int& jlo, int& jhi) {
  lo = -kInf;
  hi = kInf;
  jlo = jhi = -1;
  for (std::size_t j = 0; j < P.normals.size(); ++j) {
    const double t = P.normals[j](0), h = P.heights[j];
    if (t > 0) {
      if (h / t < hi) hi = h / t, jhi = static_cast<int>(j);
    } else if (t < 0) {
      if (h / t > lo) lo = h / t, jlo = static_cast<int>(j);
    }
  }
}

std::vector<Piece1D> envelope_1d(const Polyhedral& P, double lo, double hi) {
  const int N = static_cast<int>(P.slopes.size());
  auto y = [&](int i) { return P.slopes[i](0); };
  int cur = -1;
  double x = lo;
  if (lo == -kInf) {
    for (int i = 0; i < N; ++i)
      if (cur < 0 || y(i) < y(cur)) cur = i;
  } else {
    double best = -kInf;
    for (int i = 0; i < N; ++i) {
      const double v = y(i) * lo - P.offsets[i];
      const double tol = kPredicateTol * (1 + std::abs(v));
      if (cur < 0 || v > best + tol || (std::abs(v - best) <= tol && y(i) > y(cur))) {
        if (v > best) best = v;
        cur = i;
      }
    }
  }
  std::vector<Piece1D> out;
  for (int guard = 0; guard <= N + 1; ++guard) {
    double next = kInf;
    int nk = -1;
    for (int k = 0; k < N; ++k) {
      if (y(k) <= y(cur)) continue;
      const double xk = (P.offsets[k] - P.offsets[cur]) / (y(k) - y(cur));
      if (!(xk > x) && x != -kInf) {
        // A steeper piece already at least as large: it takes over immediately.
        const double vk = y(k) * x - P.offsets[k], vc = y(cur) * x - P.offsets[cur];
        if (vk >= vc - kPredicateTol * (1 + std::abs(vc))) {
          next = x;
          nk = k;
          break;
        }
        continue;
      }
      if (xk < next - kPredicateTol * (1 + std::abs(xk)) ||
          (std::abs(xk - next) <= kPredicateTol * (1 + std::abs(xk)) && nk >= 0 && y(k) > y(nk))) {
        next = xk;
        nk = k;
      }
    }
    if (nk < 0 || next >= hi) {
      out.push_back({x, hi, cur});
      break;
    }
    if (next > x) out.push_back({x, next, cur});
    x = next;
    cur = nk;
  }
  return out;
}

}  // namespace detail

using detail::v2;
using detail::vx;

// ---- Grid -----------------------------------------------------------------

Vec Grid::hi() const {
  Vec h = lo;
  for (int k = 0; k < dim(); ++k) h(k) += step(k) * (shape[k] - 1);
  return h;
}

std::size_t Grid::index(const std::vector<int>& idx) const {
  std::size_t r = 0;
  for (int k = 0; k < dim(); ++k) r = r * shape[k] + idx[k];
  return r;
}

namespace {

Vec zeros(int n) { return Vec::Zero(n); }

Analytic make_analytic(int n, decltype(Analytic::shape) shape, const Vec& center) {
  Analytic a;
  a.shape = std::move(shape);
  a.center = center.size() == n ? center : zeros(n);
  a.linear = zeros(n);
  return a;
}

void check_grid_convex(const Grid& g) {
  const int n = g.dim();
  if (n > 2) return;
  auto val = [&](int i, int j) { return g.values[n == 1 ? i : g.index({i, j})]; };
  auto second = [&](double a, double b, double c, double scale) {
    if (a == kInf || b == kInf || c == kInf) return;
    if (a - 2 * b + c < -1e-9 * (1 + scale))
      throw std::invalid_argument("make_grid: interpolant is not convex");
  };
  const int n0 = g.shape[0], n1 = n == 2 ? g.shape[1] : 1;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const double b = val(i, j);
      if (b == kInf) continue;
      const double s = std::abs(b);
      if (i > 0 && i + 1 < n0) second(val(i - 1, j), b, val(i + 1, j), s);
      if (n == 2 && j > 0 && j + 1 < n1) {
        second(val(i, j - 1), b, val(i, j + 1), s);
        if (i > 0 && i + 1 < n0 && g.step(0) == g.step(1)) {
          second(val(i - 1, j - 1), b, val(i + 1, j + 1), s);
          second(val(i - 1, j + 1), b, val(i + 1, j - 1), s);
        }
      }
    }
}

double grid_eval(const Grid& g, const Vec& x) {
  const int n = g.dim();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int k = 0; k < n; ++k) {
    const double u = (x(k) - g.lo(k)) / g.step(k);
    const double tol = 1e-12 * (1 + std::abs(u));
    if (u < -tol || u > g.shape[k] - 1 + tol) return kInf;
    int b = static_cast<int>(std::floor(std::clamp(u, 0.0, static_cast<double>(g.shape[k] - 1))));
    if (b >= g.shape[k] - 1) b = std::max(0, g.shape[k] - 2);
    base[k] = b;
    frac[k] = std::clamp(u - b, 0.0, 1.0);
    if (g.shape[k] == 1) frac[k] = 0;
  }
  double v = 0;
  std::vector<int> idx(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1;
    for (int k = 0; k < n; ++k) {
      const int bit = (corner >> k) & 1;
      idx[k] = std::min(base[k] + bit, g.shape[k] - 1);
      w *= bit ? frac[k] : 1 - frac[k];
    }
    if (w == 0) continue;
    const double c = g.values[g.index(idx)];
    if (c == kInf) return kInf;
    v += w * c;
  }
  return v;
}

double base_value(const Analytic& a, const Vec& z) {
  const int n = static_cast<int>(z.size());
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return 0.5 * z.dot(s.A * z);
        } else if constexpr (std::is_same_v<T, Cone>) {
          return s.a * std::max(z.norm() - s.r0, 0.0);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return z.norm() <= s.radius * (1 + kPredicateTol) + kPredicateTol ? 0.0 : kInf;
        } else {
          const auto& V = s.vertices;
          if (V.size() == 1) return (z - V[0]).norm() <= kPredicateTol * (1 + V[0].norm()) ? 0.0 : kInf;
          if (n == 1) {
            const double lo = std::min(V[0](0), V[1](0)), hi = std::max(V[0](0), V[1](0));
            const double tol = kPredicateTol * (1 + std::abs(lo) + std::abs(hi));
            return (z(0) >= lo - tol && z(0) <= hi + tol) ? 0.0 : kInf;
          }
          Polygon P;
          for (const auto& v : V) P.vertices.push_back(v2(v));
          return P.contains(v2(z), kPredicateTol * (1 + P.diameter())) ? 0.0 : kInf;
        }
      },
      a.shape);
}

Polygon polytope_polygon(const Polytope& p, const Vec& shift) {
  Polygon P;
  for (const auto& v : p.vertices) P.vertices.push_back(v2(v + shift));
  return P;
}

double vol_ball(int n, double r) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1) * std::pow(r, n);
}
double sphere_area(int n) { return 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0); }

}  // namespace

// ---- construction ---------------------------------------------------------

ConvexFunction make_polyhedral(std::vector<Vec> slopes, std::vector<double> offsets, std::vector<Vec> normals,
                               std::vector<double> heights) {
  if (slopes.empty()) throw std::invalid_argument("make_polyhedral: no pieces");
  if (slopes.size() != offsets.size()) throw std::invalid_argument("make_polyhedral: slopes/offsets mismatch");
  if (normals.size() != heights.size()) throw std::invalid_argument("make_polyhedral: normals/heights mismatch");
  const int n = static_cast<int>(slopes[0].size());
  if (n < 1) throw DimensionError("make_polyhedral: zero dimension");
  for (const auto& y : slopes) require_dim(y, n, "make_polyhedral");
  for (std::size_t i = 0; i < slopes.size(); ++i)
    for (std::size_t k = i + 1; k < slopes.size(); ++k)
      if ((slopes[i] - slopes[k]).norm() <= 1e-14 * (1 + slopes[i].norm()))
        throw std::invalid_argument("make_polyhedral: slopes must be pairwise distinct");
  for (std::size_t j = 0; j < normals.size(); ++j) {
    require_dim(normals[j], n, "make_polyhedral");
    const double nn = normals[j].norm();
    if (!(nn > 0)) throw std::invalid_argument("make_polyhedral: zero domain normal");
    if (std::abs(nn - 1) > 1e-12) {
      normals[j] /= nn;
      heights[j] /= nn;
    }
  }
  Polyhedral P{std::move(slopes), std::move(offsets), std::move(normals), std::move(heights)};
  if (n == 1 && P.has_domain()) {
    double lo, hi;
    int a, b;
    detail::domain_1d(P, lo, hi, a, b);
    if (!(lo < hi)) throw std::invalid_argument("make_polyhedral: domain has empty interior");
  } else if (n == 2 && P.has_domain()) {
    std::vector<Halfplane> hp;
    for (std::size_t j = 0; j < P.normals.size(); ++j) hp.push_back({v2(P.normals[j]), P.heights[j], -1});
    double s = 1;
    for (double h : P.heights) s = std::max(s, std::abs(h));
    const double B = 1e5 * s;
    for (const Vec2& d : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) hp.push_back({d, B, -1});
    if (halfplane_intersection(hp).degenerate) throw std::invalid_argument("make_polyhedral: domain has empty interior");
  }
  return ConvexFunction{n, std::move(P)};
}

ConvexFunction make_grid(Vec lo, Vec step, std::vector<int> shape, std::vector<double> values) {
  const int n = static_cast<int>(shape.size());
  if (n < 1 || lo.size() != n || step.size() != n) throw DimensionError("make_grid: inconsistent dimensions");
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) {
    if (shape[k] < 2) throw std::invalid_argument("make_grid: need at least two nodes per axis");
    if (!(step(k) > 0)) throw std::invalid_argument("make_grid: step must be positive");
    total *= shape[k];
  }
  if (values.size() != total) throw std::invalid_argument("make_grid: value count mismatch");
  Grid g{std::move(lo), std::move(step), std::move(shape), std::move(values)};
  check_grid_convex(g);
  return ConvexFunction{n, std::move(g)};
}

ConvexFunction make_quadratic(const Mat& A, const Vec& center) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || n < 1) throw DimensionError("make_quadratic: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  if (!(es.eigenvalues().minCoeff() > 0)) throw std::invalid_argument("make_quadratic: matrix not positive definite");
  return ConvexFunction{n, make_analytic(n, Quadratic{0.5 * (A + A.transpose())}, center)};
}

ConvexFunction make_cone(int n, double a, double b, const Vec& center) {
  if (!(a > 0)) throw std::invalid_argument("make_cone: slope must be positive");
  Analytic an = make_analytic(n, Cone{a, 0.0}, center);
  an.constant = b;
  return ConvexFunction{n, an};
}

ConvexFunction make_ball_indicator(int n, double radius, const Vec& center) {
  if (!(radius > 0)) throw std::invalid_argument("make_ball_indicator: radius must be positive");
  return ConvexFunction{n, make_analytic(n, Ball{radius}, center)};
}

ConvexFunction make_interval_indicator(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("make_interval_indicator: empty interval");
  Polytope p;
  p.vertices = {vec1(lo)};
  if (hi > lo) p.vertices.push_back(vec1(hi));
  return ConvexFunction{1, make_analytic(1, p, Vec())};
}

ConvexFunction make_polygon_indicator(const Polygon& P) {
  if (P.empty()) throw std::invalid_argument("make_polygon_indicator: empty polygon");
  Polytope p;
  if (P.degenerate && P.size() != 1)
    throw std::invalid_argument("make_polygon_indicator: polygon has empty interior");
  for (const auto& v : P.vertices) p.vertices.push_back(vx(v));
  return ConvexFunction{2, make_analytic(2, p, Vec())};
}

ConvexFunction make_point_indicator(const Vec& p) {
  Polytope t;
  t.vertices = {zeros(static_cast<int>(p.size()))};
  return ConvexFunction{static_cast<int>(p.size()), make_analytic(static_cast<int>(p.size()), t, p)};
}

ConvexFunction add_affine(const ConvexFunction& phi, const Vec& linear, double constant) {
  require_dim(linear, phi.dim, "add_affine");
  ConvexFunction out = phi;
  if (auto* P = std::get_if<Polyhedral>(&out.rep)) {
    for (std::size_t i = 0; i < P->slopes.size(); ++i) {
      P->slopes[i] += linear;
      P->offsets[i] -= constant;
    }
  } else if (auto* g = std::get_if<Grid>(&out.rep)) {
    const int n = g->dim();
    std::vector<int> idx(n, 0);
    for (std::size_t f = 0; f < g->values.size(); ++f) {
      std::size_t r = f;
      Vec x(n);
      for (int k = n - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(r % g->shape[k]);
        r /= g->shape[k];
        x(k) = g->lo(k) + g->step(k) * idx[k];
      }
      if (g->values[f] != kInf) g->values[f] += linear.dot(x) + constant;
    }
  } else {
    auto& a = std::get<Analytic>(out.rep);
    a.linear += linear;
    a.constant += constant;
  }
  return out;
}

ConvexFunction translate(const ConvexFunction& phi, const Vec& v) {
  require_dim(v, phi.dim, "translate");
  ConvexFunction out = phi;
  if (auto* P = std::get_if<Polyhedral>(&out.rep)) {
    for (std::size_t i = 0; i < P->slopes.size(); ++i) P->offsets[i] += P->slopes[i].dot(v);
    for (std::size_t j = 0; j < P->normals.size(); ++j) P->heights[j] += P->normals[j].dot(v);
  } else if (auto* g = std::get_if<Grid>(&out.rep)) {
    g->lo += v;
  } else {
    auto& a = std::get<Analytic>(out.rep);
    a.center += v;
    a.constant -= a.linear.dot(v);
  }
  return out;
}

std::optional<ConvexFunction> as_polyhedral(const ConvexFunction& phi) {
  if (phi.is_polyhedral()) return phi;
  if (!phi.is_analytic()) return std::nullopt;
  const Analytic& a = phi.analytic();
  const int n = phi.dim;
  const Vec& c = a.center;
  if (const auto* p = std::get_if<Polytope>(&a.shape)) {
    if (p->vertices.size() < 2) return std::nullopt;
    std::vector<Vec> normals;
    std::vector<double> heights;
    if (n == 1) {
      const double lo = std::min(p->vertices[0](0), p->vertices[1](0)) + c(0);
      const double hi = std::max(p->vertices[0](0), p->vertices[1](0)) + c(0);
      normals = {vec1(1), vec1(-1)};
      heights = {hi, -lo};
    } else if (n == 2) {
      const Polygon P = polytope_polygon(*p, c);
      for (std::size_t e = 0; e < P.size(); ++e) {
        const Vec2 nn = P.edge_normal(e);
        normals.push_back(vx(nn));
        heights.push_back(nn.dot(P.vertices[e]));
      }
    } else {
      return std::nullopt;
    }
    return make_polyhedral({a.linear}, {-a.constant}, normals, heights);
  }
  if (const auto* k = std::get_if<Cone>(&a.shape); k && n == 1) {
    const double l = a.linear(0), c0 = c(0), K = a.constant, A = k->a, r0 = k->r0;
    // a*max(|z| - r0, 0) = max(a(z - r0), -a(z + r0), 0) with z = x - c.
    std::vector<Vec> s = {vec1(l + A), vec1(l - A)};
    std::vector<double> o = {A * (c0 + r0) - K, -A * (c0 - r0) - K};
    if (r0 > 0) {
      s.push_back(vec1(l));
      o.push_back(-K);
    }
    return make_polyhedral(s, o);
  }
  return std::nullopt;
}

// ---- evaluation -----------------------------------------------------------

bool in_domain(const Polyhedral& P, const Vec& x, double tol) {
  for (std::size_t j = 0; j < P.normals.size(); ++j)
    if (x.dot(P.normals[j]) > P.heights[j] + tol * (1 + std::abs(P.heights[j]))) return false;
  return true;
}

int active_piece(const Polyhedral& P, const Vec& x) {
  if (!in_domain(P, x)) return -1;
  int best = -1;
  double bv = -kInf;
  for (std::size_t i = 0; i < P.slopes.size(); ++i) {
    const double v = x.dot(P.slopes[i]) - P.offsets[i];
    if (v > bv) bv = v, best = static_cast<int>(i);
  }
  return best;
}

double evaluate(const ConvexFunction& phi, const Vec& x) {
  require_dim(x, phi.dim, "evaluate");
  if (const auto* P = std::get_if<Polyhedral>(&phi.rep)) {
    if (!in_domain(*P, x)) return kInf;
    double m = -kInf;
    for (std::size_t i = 0; i < P->slopes.size(); ++i) m = std::max(m, x.dot(P->slopes[i]) - P->offsets[i]);
    return m;
  }
  if (const auto* g = std::get_if<Grid>(&phi.rep)) return grid_eval(*g, x);
  const Analytic& a = phi.analytic();
  const double b = base_value(a, x - a.center);
  if (b == kInf) return kInf;
  return b + a.linear.dot(x) + a.constant;
}

Vec subgradient(const ConvexFunction& phi, const Vec& x) {
  require_dim(x, phi.dim, "subgradient");
  if (const auto* P = std::get_if<Polyhedral>(&phi.rep)) {
    int best = -1;
    double bv = -kInf;
    for (std::size_t i = 0; i < P->slopes.size(); ++i) {
      const double v = x.dot(P->slopes[i]) - P->offsets[i];
      if (v > bv + kPredicateTol * (1 + std::abs(v))) bv = v, best = static_cast<int>(i);
    }
    return P->slopes[best];
  }
  if (const auto* g = std::get_if<Grid>(&phi.rep)) {
    Vec d(phi.dim);
    for (int k = 0; k < phi.dim; ++k) {
      const double h = 0.5 * g->step(k);
      Vec xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      double fp = grid_eval(*g, xp), fm = grid_eval(*g, xm), f0 = grid_eval(*g, x);
      if (fp != kInf && fm != kInf)
        d(k) = (fp - fm) / (2 * h);
      else if (fp != kInf && f0 != kInf)
        d(k) = (fp - f0) / h;
      else if (fm != kInf && f0 != kInf)
        d(k) = (f0 - fm) / h;
      else
        d(k) = 0;
    }
    return d;
  }
  const Analytic& a = phi.analytic();
  const Vec z = x - a.center;
  Vec g = a.linear;
  if (const auto* q = std::get_if<Quadratic>(&a.shape)) g += q->A * z;
  if (const auto* k = std::get_if<Cone>(&a.shape)) {
    const double r = z.norm();
    if (r > k->r0 && r > 0) g += k->a * z / r;
  }
  return g;
}

std::pair<double, double> line_domain(const ConvexFunction& phi, const Vec& p, const Vec& d) {
  require_dim(p, phi.dim, "line_domain");
  require_dim(d, phi.dim, "line_domain");
  double lo = -kInf, hi = kInf;
  auto clip = [&](const Vec& nrm, double h) {
    const double nd = nrm.dot(d), r = h - nrm.dot(p);
    if (nd > 0)
      hi = std::min(hi, r / nd);
    else if (nd < 0)
      lo = std::max(lo, r / nd);
    else if (r < -kPredicateTol * (1 + std::abs(h)))
      lo = 1, hi = 0;
  };
  if (const auto* P = std::get_if<Polyhedral>(&phi.rep)) {
    for (std::size_t j = 0; j < P->normals.size(); ++j) clip(P->normals[j], P->heights[j]);
    return {lo, hi};
  }
  if (const auto* g = std::get_if<Grid>(&phi.rep)) {
    const Vec H = g->hi();
    for (int k = 0; k < phi.dim; ++k) {
      Vec e = zeros(phi.dim);
      e(k) = 1;
      clip(e, H(k));
      clip(-e, -g->lo(k));
    }
    // Shrink to the finite part of the interpolant.
    if (lo <= hi) {
      auto finite = [&](double s) { return grid_eval(*g, p + s * d) != kInf; };
      const int M = 400;
      double flo = kInf, fhi = -kInf;
      for (int i = 0; i <= M; ++i) {
        const double s = lo + (hi - lo) * i / M;
        if (finite(s)) flo = std::min(flo, s), fhi = std::max(fhi, s);
      }
      if (flo > fhi) return {1, 0};
      const double h = (hi - lo) / M;
      double a = std::max(lo, flo - h), b = flo;
      for (int it = 0; it < 60 && !finite(a); ++it) {
        const double m = 0.5 * (a + b);
        (finite(m) ? b : a) = m;
      }
      lo = finite(a) ? a : b;
      a = fhi, b = std::min(hi, fhi + h);
      for (int it = 0; it < 60 && !finite(b); ++it) {
        const double m = 0.5 * (a + b);
        (finite(m) ? a : b) = m;
      }
      hi = finite(b) ? b : a;
    }
    return {lo, hi};
  }
  const Analytic& a = phi.analytic();
  const Vec q = p - a.center;
  if (const auto* B = std::get_if<Ball>(&a.shape)) {
    const double A = d.squaredNorm(), Bq = q.dot(d), C = q.squaredNorm() - B->radius * B->radius;
    if (A == 0) return C <= 0 ? std::pair{-kInf, kInf} : std::pair{1.0, 0.0};
    const double disc = Bq * Bq - A * C;
    if (disc < 0) return {1, 0};
    const double sq = std::sqrt(disc);
    return {(-Bq - sq) / A, (-Bq + sq) / A};
  }
  if (const auto* t = std::get_if<Polytope>(&a.shape)) {
    const auto& V = t->vertices;
    if (V.size() == 1) {
      // Point: the line meets it at most once.
      const Vec w = V[0] - q;
      const double dd = d.squaredNorm();
      if (dd == 0) return w.norm() <= kPredicateTol ? std::pair{-kInf, kInf} : std::pair{1.0, 0.0};
      const double s = w.dot(d) / dd;
      if ((q + s * d - V[0]).norm() <= kPredicateTol * (1 + V[0].norm())) return {s, s};
      return {1, 0};
    }
    if (phi.dim == 1) {
      clip(vec1(1), std::max(V[0](0), V[1](0)) + a.center(0));
      clip(vec1(-1), -(std::min(V[0](0), V[1](0)) + a.center(0)));
      return {lo, hi};
    }
    const Polygon P = polytope_polygon(*t, a.center);
    for (std::size_t e = 0; e < P.size(); ++e) {
      const Vec2 nn = P.edge_normal(e);
      clip(vx(nn), nn.dot(P.vertices[e]));
    }
    return {lo, hi};
  }
  return {-kInf, kInf};
}

std::vector<Vec> polyhedral_vertices(const Polyhedral& P, int dim) {
  std::vector<Vec> out;
  if (dim == 1) {
    double lo, hi;
    int a, b;
    detail::domain_1d(P, lo, hi, a, b);
    const auto env = detail::envelope_1d(P, lo, hi);
    if (lo > -kInf) out.push_back(vec1(lo));
    for (std::size_t k = 1; k < env.size(); ++k) out.push_back(vec1(env[k].a));
    if (hi < kInf) out.push_back(vec1(hi));
    return out;
  }
  if (dim != 2) throw DimensionError("polyhedral_vertices: dimension must be 1 or 2");
  Polygon trunc;
  if (auto dp = domain_polygon(P)) {
    trunc = *dp;
  } else {
    double scale = 1;
    for (double c : P.offsets) scale += std::abs(c);
    for (double h : P.heights) scale += std::abs(h);
    double gap = 1;
    for (std::size_t i = 0; i < P.slopes.size(); ++i)
      for (std::size_t k = i + 1; k < P.slopes.size(); ++k) gap = std::min(gap, (P.slopes[i] - P.slopes[k]).norm());
    const double W = 1e4 * scale / gap;
    trunc = make_box(Vec2(-W, -W), Vec2(W, W));
  }
  const CellComplex cc = cell_decomposition(P, trunc);
  std::vector<Vec2> pts;
  for (const auto& c : cc.cells) {
    if (!c) continue;
    const std::size_t m = c->size();
    for (std::size_t i = 0; i < m; ++i) {
      const int la = c->edge_labels[(i + m - 1) % m], lb = c->edge_labels[i];
      if (la < 0 || lb < 0) continue;
      const Vec2& v = c->vertices[i];
      bool dup = false;
      for (const auto& q : pts)
        if ((q - v).norm() <= 1e-10 * (1 + v.norm())) dup = true;
      if (!dup) pts.push_back(v);
    }
  }
  for (const auto& p : pts) out.push_back(vx(p));
  return out;
}

std::optional<Polygon> domain_polygon(const Polyhedral& P) {
  if (!P.has_domain() || P.normals[0].size() != 2) return std::nullopt;
  std::vector<Halfplane> hp;
  for (std::size_t j = 0; j < P.normals.size(); ++j) hp.push_back({v2(P.normals[j]), P.heights[j], static_cast<int>(j)});
  try {
    Polygon poly = halfplane_intersection(hp);
    if (poly.degenerate) throw std::invalid_argument("domain_polygon: domain has empty interior");
    return poly;
  } catch (const UnboundedRegion&) {
    return std::nullopt;
  }
}

Minimum minimize(const ConvexFunction& phi) {
  const int n = phi.dim;
  if (const auto* P = std::get_if<Polyhedral>(&phi.rep)) {
    if (n > 2) throw DimensionError("minimize: polyhedral minimization needs dimension 1 or 2");
    const auto V = polyhedral_vertices(*P, n);
    if (V.empty()) throw std::domain_error("minimize: function is not bounded below");
    std::vector<double> vals;
    double best = kInf;
    for (const auto& v : V) {
      vals.push_back(evaluate(phi, v));
      best = std::min(best, vals.back());
    }
    Vec x = zeros(n);
    int cnt = 0;
    for (std::size_t k = 0; k < V.size(); ++k)
      if (vals[k] <= best + 1e-12 * (1 + std::abs(best))) x += V[k], ++cnt;
    x /= cnt;
    return {x, evaluate(phi, x)};
  }
  if (const auto* g = std::get_if<Grid>(&phi.rep)) {
    std::size_t best = 0;
    for (std::size_t f = 0; f < g->values.size(); ++f)
      if (g->values[f] < g->values[best]) best = f;
    if (g->values[best] == kInf) throw std::domain_error("minimize: grid is identically +inf");
    Vec x(n);
    std::size_t r = best;
    for (int k = n - 1; k >= 0; --k) {
      x(k) = g->lo(k) + g->step(k) * static_cast<double>(r % g->shape[k]);
      r /= g->shape[k];
    }
    return {x, g->values[best]};
  }
  const Analytic& a = phi.analytic();
  const Vec& l = a.linear;
  Vec x;
  if (const auto* q = std::get_if<Quadratic>(&a.shape)) {
    x = a.center - q->A.ldlt().solve(l);
  } else if (const auto* k = std::get_if<Cone>(&a.shape)) {
    if (l.norm() >= k->a) throw std::domain_error("minimize: cone is not coercive");
    x = a.center;
    if (l.norm() > 0) x -= k->r0 * l / l.norm();
  } else if (const auto* b = std::get_if<Ball>(&a.shape)) {
    x = a.center;
    if (l.norm() > 0) x -= b->radius * l / l.norm();
  } else {
    const auto& V = std::get<Polytope>(a.shape).vertices;
    double best = kInf;
    for (const auto& v : V) best = std::min(best, l.dot(v));
    x = zeros(n);
    int cnt = 0;
    for (const auto& v : V)
      if (l.dot(v) <= best + 1e-12 * (1 + std::abs(best))) x += v, ++cnt;
    x = x / cnt + a.center;
  }
  return {x, evaluate(phi, x)};
}

bool epi_contains(const ConvexFunction& phi, const EpiPoint& p, double* margin) {
  const double v = evaluate(phi, p.x);
  const double m = v == kInf ? -kInf : p.t - v;
  if (margin) *margin = m;
  return v != kInf && m >= -kPredicateTol * (1 + std::abs(p.t));
}

// ---- dilation, sums, sampling --------------------------------------------

ConvexFunction dilate(double lambda, const ConvexFunction& phi) {
  if (!(lambda > 0)) throw std::invalid_argument("dilate: lambda must be positive");
  ConvexFunction out = phi;
  if (auto* P = std::get_if<Polyhedral>(&out.rep)) {
    for (auto& c : P->offsets) c *= lambda;
    for (auto& h : P->heights) h *= lambda;
  } else if (auto* g = std::get_if<Grid>(&out.rep)) {
    g->lo *= lambda;
    g->step *= lambda;
    for (auto& v : g->values)
      if (v != kInf) v *= lambda;
  } else {
    auto& a = std::get<Analytic>(out.rep);
    a.center *= lambda;
    a.constant *= lambda;
    std::visit(
        [&](auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Quadratic>) s.A /= lambda;
          if constexpr (std::is_same_v<T, Cone>) s.r0 *= lambda;
          if constexpr (std::is_same_v<T, Ball>) s.radius *= lambda;
          if constexpr (std::is_same_v<T, Polytope>)
            for (auto& v : s.vertices) v *= lambda;
        },
        a.shape);
  }
  return out;
}

LogConcaveDensity dilate(double lambda, const LogConcaveDensity& f) { return LogConcaveDensity(dilate(lambda, f.phi())); }

namespace {

// Drop pieces whose cell is empty (dimension 1 or 2).
Polyhedral prune(const Polyhedral& P, int dim) {
  if (P.slopes.size() <= 1) return P;
  std::vector<char> keep(P.slopes.size(), 0);
  if (dim == 1) {
    double lo, hi;
    int a, b;
    detail::domain_1d(P, lo, hi, a, b);
    for (const auto& pc : detail::envelope_1d(P, lo, hi)) keep[pc.piece] = 1;
  } else if (dim == 2) {
    Polygon trunc;
    if (auto dp = domain_polygon(P)) {
      trunc = *dp;
    } else {
      double scale = 1;
      for (double c : P.offsets) scale += std::abs(c);
      for (double h : P.heights) scale += std::abs(h);
      double gap = 1;
      for (std::size_t i = 0; i < P.slopes.size(); ++i)
        for (std::size_t k = i + 1; k < P.slopes.size(); ++k) gap = std::min(gap, (P.slopes[i] - P.slopes[k]).norm());
      const double W = 1e4 * scale / gap;
      trunc = make_box(Vec2(-W, -W), Vec2(W, W));
    }
    const CellComplex cc = cell_decomposition(P, trunc);
    for (std::size_t i = 0; i < P.slopes.size(); ++i) keep[i] = cc.cells[i].has_value();
  } else {
    return P;
  }
  Polyhedral out;
  out.normals = P.normals;
  out.heights = P.heights;
  for (std::size_t i = 0; i < P.slopes.size(); ++i)
    if (keep[i]) {
      out.slopes.push_back(P.slopes[i]);
      out.offsets.push_back(P.offsets[i]);
    }
  if (out.slopes.empty()) return P;
  return out;
}

}  // namespace

ConvexFunction polyhedral_sum(const ConvexFunction& a, const ConvexFunction& b) {
  if (a.dim != b.dim) throw DimensionError("polyhedral_sum: dimension mismatch");
  const auto pa = as_polyhedral(a), pb = as_polyhedral(b);
  if (!pa || !pb) throw std::invalid_argument("polyhedral_sum: operands must be polyhedral");
  const Polyhedral &A = pa->polyhedral(), &B = pb->polyhedral();
  Polyhedral S;
  for (std::size_t i = 0; i < A.slopes.size(); ++i)
    for (std::size_t k = 0; k < B.slopes.size(); ++k) {
      const Vec y = A.slopes[i] + B.slopes[k];
      const double c = A.offsets[i] + B.offsets[k];
      bool merged = false;
      for (std::size_t m = 0; m < S.slopes.size(); ++m)
        if ((S.slopes[m] - y).norm() <= 1e-13 * (1 + y.norm())) {
          S.offsets[m] = std::min(S.offsets[m], c);
          merged = true;
          break;
        }
      if (!merged) {
        S.slopes.push_back(y);
        S.offsets.push_back(c);
      }
    }
  S.normals = A.normals;
  S.heights = A.heights;
  S.normals.insert(S.normals.end(), B.normals.begin(), B.normals.end());
  S.heights.insert(S.heights.end(), B.heights.begin(), B.heights.end());
  S = prune(S, a.dim);
  return make_polyhedral(S.slopes, S.offsets, S.normals, S.heights);
}

ConvexFunction sample_to_grid(const ConvexFunction& phi, const Vec& lo, const Vec& hi, int nodes) {
  const int n = phi.dim;
  require_dim(lo, n, "sample_to_grid");
  require_dim(hi, n, "sample_to_grid");
  if (nodes < 2) throw std::invalid_argument("sample_to_grid: need at least two nodes");
  Vec step = (hi - lo) / (nodes - 1);
  std::vector<int> shape(n, nodes);
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= nodes;
  std::vector<double> values(total);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t r = f;
    Vec x(n);
    for (int k = n - 1; k >= 0; --k) {
      x(k) = lo(k) + step(k) * static_cast<double>(r % nodes);
      r /= nodes;
    }
    values[f] = evaluate(phi, x);
  }
  Grid g{lo, step, shape, std::move(values)};
  return ConvexFunction{n, std::move(g)};
}

// ---- eps-class translation -----------------------------------------------

double sampled_ball_sup(const ConvexFunction& phi, const Vec& c, double r, int samples_per_dim) {
  const int n = phi.dim;
  require_dim(c, n, "sampled_ball_sup");
  // A convex function attains its max over a ball on the sphere.
  double m = -kInf;
  if (n == 1) {
    m = std::max(evaluate(phi, c + vec1(r)), evaluate(phi, c - vec1(r)));
    return std::max(m, evaluate(phi, c));
  }
  const int N = samples_per_dim * n;
  if (n == 2) {
    for (int i = 0; i < N; ++i) {
      const double t = 2 * std::numbers::pi * i / N;
      m = std::max(m, evaluate(phi, c + r * vec2(std::cos(t), std::sin(t))));
    }
    return m;
  }
  CounterRng rng(12345, 0);
  std::uint64_t ctr = 0;
  for (int i = 0; i < N; ++i) {
    Vec z(n);
    for (int k = 0; k < n; k += 2) {
      const double u1 = rng.uniform(ctr++), u2 = rng.uniform(ctr++);
      const double rad = std::sqrt(-2 * std::log(u1));
      z(k) = rad * std::cos(2 * std::numbers::pi * u2);
      if (k + 1 < n) z(k + 1) = rad * std::sin(2 * std::numbers::pi * u2);
    }
    m = std::max(m, evaluate(phi, c + r * z / z.norm()));
  }
  return m;
}

EpsTranslation translate_to_eps_class(const ConvexFunction& phi) {
  const int n = phi.dim;
  const Minimum mn = minimize(phi);
  if (mn.value == kInf) throw std::domain_error("translate_to_eps_class: improper function");
  const double level = mn.value + 0.2;
  Vec v = mn.x;
  for (int round = 0; round < 3; ++round)
    for (int k = 0; k < n; ++k) {
      Vec e = zeros(n);
      e(k) = 1;
      auto below = [&](double s) { return evaluate(phi, v + s * e) <= level; };
      if (!below(0)) continue;
      const auto [dlo, dhi] = line_domain(phi, v, e);
      auto edge = [&](double dir, double lim) {
        double a = 0, b = 1;
        while (below(dir * b) && b < std::abs(lim) && b < 1e12) a = b, b *= 2;
        b = std::min(b, std::abs(lim));
        if (below(dir * b)) return dir * b;
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (a + b);
          (below(dir * m) ? a : b) = m;
        }
        return dir * a;
      };
      const double hi = edge(1, dhi), lo = edge(-1, dlo);
      v(k) += 0.5 * (lo + hi);
    }
  const double target = mn.value + 0.45;
  auto ok = [&](double e) { return sampled_ball_sup(phi, v, e) < target; };
  double eps = 1;
  if (!ok(eps)) {
    while (!ok(eps)) {
      eps *= 0.5;
      if (eps < 1e-12)
        throw std::domain_error("translate_to_eps_class: no interior near-minimizer found at resolution 1e-12");
    }
    double a = eps, b = 2 * eps;
    for (int it = 0; it < 20; ++it) {
      const double m = 0.5 * (a + b);
      (ok(m) ? a : b) = m;
    }
    eps = a;
  }
  eps *= 0.99;
  return {v, eps, translate(phi, -v)};
}

// ---- coercivity and integrals ---------------------------------------------

namespace {

CoercivityWitness heuristic_witness(const ConvexFunction& phi) {
  // Fit a|x| + b through values along the 2n axis rays; safety factor 0.9 on the slope.
  const int n = phi.dim;
  const Minimum mn = minimize(phi);
  double a = kInf;
  for (int k = 0; k < n; ++k)
    for (double sgn : {1.0, -1.0}) {
      Vec e = zeros(n);
      e(k) = sgn;
      double r = 1;
      double slope = 0;
      for (int it = 0; it < 40; ++it, r *= 2) {
        const double v = evaluate(phi, mn.x + r * e);
        if (v == kInf) {
          slope = kInf;
          break;
        }
        slope = (v - mn.value) / r;
        if (slope > 0 && r > 8) break;
      }
      a = std::min(a, slope);
    }
  if (!(a > 0)) throw std::domain_error("coercivity_witness: no positive slope found");
  if (a == kInf) a = 1;
  a *= 0.9;
  return {a, mn.value - a * mn.x.norm() - a};
}

}  // namespace

CoercivityWitness coercivity_witness(const ConvexFunction& phi) {
  const int n = phi.dim;
  if (const auto* P = std::get_if<Polyhedral>(&phi.rep)) {
    if (n > 2) return heuristic_witness(phi);
    const TailCertificate tc = certify_tail(*P, n, 0);
    CoercivityWitness w;
    if (tc.bounded_domain) {
      double rho = 0;
      if (n == 1)
        rho = std::max(std::abs(tc.lo), std::abs(tc.hi));
      else
        for (const auto& v : tc.box.vertices) rho = std::max(rho, v.norm());
      w = {1, minimize(phi).value - rho};
    } else {
      const double rho = n == 1 ? tc.half_width : tc.half_width * std::sqrt(2.0);
      w = {tc.kappa, tc.phi0 - tc.kappa * (tc.x0.norm() + rho)};
    }
    // phi - a|x| is concave on every cell and bounded below, so its infimum sits at a vertex.
    const auto verts = polyhedral_vertices(*P, n);
    if (!verts.empty()) {
      double b = kInf;
      for (const auto& v : verts) b = std::min(b, evaluate(phi, v) - w.a * v.norm());
      if (b < kInf) w.b = std::max(w.b, b);
    }
    return w;
  }
  if (const auto* g = std::get_if<Grid>(&phi.rep)) {
    const Vec lo = g->lo, hi = g->hi();
    const double rho = std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()) * std::sqrt(static_cast<double>(n));
    return {1, minimize(phi).value - rho};
  }
  const Analytic& a = phi.analytic();
  const double L = a.linear.norm(), cn = a.center.norm(), k = a.constant;
  if (const auto* q = std::get_if<Quadratic>(&a.shape)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(q->A);
    const double lmin = es.eigenvalues().minCoeff();
    return {1, k - (L + 1) * cn - (L + 1) * (L + 1) / (2 * lmin)};
  }
  if (const auto* c = std::get_if<Cone>(&a.shape)) {
    if (!(c->a > L)) throw std::domain_error("coercivity_witness: cone slope does not dominate the linear term");
    return {c->a - L, k - c->a * cn - c->a * c->r0};
  }
  double rho = 0;
  if (const auto* b = std::get_if<Ball>(&a.shape)) rho = cn + b->radius;
  if (const auto* p = std::get_if<Polytope>(&a.shape))
    for (const auto& v : p->vertices) rho = std::max(rho, (v + a.center).norm());
  return {1, k - L * rho - rho};
}

LogConcaveDensity::LogConcaveDensity(ConvexFunction phi) : phi_(std::move(phi)), cache_(std::make_shared<Cache>()) {
  witness_ = coercivity_witness(phi_);
  if (!(witness_.a > 0)) throw std::domain_error("LogConcaveDensity: no coercivity witness");
  if (minimize(phi_).value == kInf) throw std::domain_error("LogConcaveDensity: function is identically +inf");
}

double LogConcaveDensity::value(const Vec& x) const {
  const double v = evaluate(phi_, x);
  return v == kInf ? 0.0 : std::exp(-v);
}

double integral(const LogConcaveDensity& f) {
  std::call_once(f.cache_->once, [&] { f.cache_->value = integral_uncached(f.phi_); });
  return f.cache_->value;
}

namespace {

// Importance sampling from the envelope e^{-a|x|} (radial Gamma(n, a)).
double integral_mc(const ConvexFunction& phi, const CoercivityWitness& w, int samples = 200000) {
  const int n = phi.dim;
  const double a = w.a;
  const Vec x0 = minimize(phi).x;
  const double Z = sphere_area(n) * std::tgamma(n) / std::pow(a, n);
  CounterRng rng(2024, 7);
  std::uint64_t ctr = 0;
  double s = 0;
  for (int i = 0; i < samples; ++i) {
    double r = 0;
    for (int k = 0; k < n; ++k) r -= std::log(rng.uniform(ctr++));
    r /= a;
    Vec z(n);
    for (int k = 0; k < n; k += 2) {
      const double u1 = rng.uniform(ctr++), u2 = rng.uniform(ctr++);
      const double rad = std::sqrt(-2 * std::log(u1));
      z(k) = rad * std::cos(2 * std::numbers::pi * u2);
      if (k + 1 < n) z(k + 1) = rad * std::sin(2 * std::numbers::pi * u2);
    }
    const Vec x = x0 + r * z / z.norm();
    const double v = evaluate(phi, x);
    if (v != kInf) s += std::exp(-v + a * r);
  }
  return Z * s / samples;
}

double grid_integral(const Grid& g) {
  const int n = g.dim();
  const Rule& R = gauss_legendre(4);
  std::vector<int> cell(n, 0);
  double total = 0;
  std::vector<int> cshape(n);
  std::size_t ncell = 1;
  for (int k = 0; k < n; ++k) cshape[k] = g.shape[k] - 1, ncell *= cshape[k];
  const std::size_t nq = static_cast<std::size_t>(std::pow(R.x.size(), n));
  double vol = 1;
  for (int k = 0; k < n; ++k) vol *= g.step(k);
  for (std::size_t c = 0; c < ncell; ++c) {
    std::size_t r = c;
    for (int k = n - 1; k >= 0; --k) cell[k] = static_cast<int>(r % cshape[k]), r /= cshape[k];
    bool finite = true;
    for (int corner = 0; corner < (1 << n) && finite; ++corner) {
      std::vector<int> idx(n);
      for (int k = 0; k < n; ++k) idx[k] = cell[k] + ((corner >> k) & 1);
      if (g.values[g.index(idx)] == kInf) finite = false;
    }
    if (!finite) continue;
    for (std::size_t q = 0; q < nq; ++q) {
      std::size_t qq = q;
      Vec x(n);
      double w = vol;
      for (int k = 0; k < n; ++k) {
        const std::size_t j = qq % R.x.size();
        qq /= R.x.size();
        x(k) = g.lo(k) + g.step(k) * (cell[k] + 0.5 * (R.x[j] + 1));
        w *= 0.5 * R.w[j];
      }
      const double v = grid_eval(g, x);
      if (v != kInf) total += w * std::exp(-v);
    }
  }
  return total;
}

}  // namespace

double integral_uncached(const ConvexFunction& phi) {
  const int n = phi.dim;
  if (const auto* P = std::get_if<Polyhedral>(&phi.rep)) {
    if (n <= 2) return integrate_polyhedral(*P, n).total;
    return integral_mc(phi, coercivity_witness(phi));
  }
  if (const auto* g = std::get_if<Grid>(&phi.rep)) {
    if (n <= 3) return grid_integral(*g);
    return integral_mc(phi, coercivity_witness(phi));
  }
  if (auto p = as_polyhedral(phi); p && n <= 2) return integrate_polyhedral(p->polyhedral(), n).total;
  const Analytic& a = phi.analytic();
  const Vec& l = a.linear;
  const double L = l.norm();
  // e^{-phi(c + z)} = e^{-k - <l,c>} e^{-base(z) - <l,z>}
  const double pre = std::exp(-a.constant - l.dot(a.center));
  if (const auto* q = std::get_if<Quadratic>(&a.shape)) {
    const Vec s = q->A.ldlt().solve(l);
    return pre * std::pow(2 * std::numbers::pi, n / 2.0) / std::sqrt(q->A.determinant()) * std::exp(0.5 * l.dot(s));
  }
  if (const auto* c = std::get_if<Cone>(&a.shape)) {
    if (L == 0) {
      // ball part plus sphere_area * int_{r0}^inf r^{n-1} e^{-a (r - r0)} dr
      double tail = 0;
      double term = 1;
      for (int k = 0; k < n; ++k) {
        // sum_k C(n-1, k) r0^{n-1-k} k! / a^{k+1}
        double binom = 1;
        for (int j = 0; j < k; ++j) binom = binom * (n - 1 - j) / (j + 1);
        term = binom * std::pow(c->r0, n - 1 - k) * std::tgamma(k + 1) / std::pow(c->a, k + 1);
        tail += term;
      }
      return pre * (vol_ball(n, c->r0) + sphere_area(n) * tail);
    }
    if (n == 2) {
      auto radial = [&](double r) {
        return 2 * std::numbers::pi * r * std::exp(-c->a * std::max(r - c->r0, 0.0)) * std::cyl_bessel_i(0.0, L * r);
      };
      double s = 0;
      if (c->r0 > 0) s += integrate_gk([&](double r) { return radial(r); }, 0, c->r0, 1e-13);
      const double k2 = c->a - L;
      // substitute r = r0 + u / k2 on [0, inf) split into panels
      s += integrate_gk(
          [&](double u) {
            const double r = c->r0 + u / k2;
            return radial(r) / k2;
          },
          0, 60, 1e-13);
      return pre * s;
    }
    return integral_mc(phi, coercivity_witness(phi));
  }
  if (const auto* b = std::get_if<Ball>(&a.shape)) {
    const double R = b->radius;
    if (L == 0) return pre * vol_ball(n, R);
    if (n == 1) return pre * 2 * std::sinh(L * R) / L;
    if (n == 2) return pre * 2 * std::numbers::pi * R * std::cyl_bessel_i(1.0, L * R) / L;
    return integral_mc(phi, coercivity_witness(phi));
  }
  const auto& V = std::get<Polytope>(a.shape).vertices;
  if (V.size() == 1) throw std::domain_error("integral: point indicator has zero integral");
  return integral_mc(phi, coercivity_witness(phi));
}

}  // namespace lcm
