#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "lcm/cells.hpp"
#include "lcm/convex.hpp"

namespace lcm {

using detail::v2;
using detail::vx;

namespace {

// Directions of the unbounded edges of the cell complex of P (2D, unbounded domain).
std::vector<Vec2> recession_rays(const CellComplex& cc) {
  std::vector<Vec2> rays;
  for (const auto& c : cc.cells) {
    if (!c) continue;
    const std::size_t m = c->size();
    for (std::size_t e = 0; e < m; ++e) {
      if (c->edge_labels[e] >= 0) continue;
      // Edge e lies on the truncation; its neighbours run off to infinity.
      const std::size_t prev = (e + m - 1) % m, next = (e + 1) % m;
      auto add = [&](const Vec2& from, const Vec2& to) {
        Vec2 d = to - from;
        if (d.norm() == 0) return;
        d.normalize();
        for (const auto& r : rays)
          if ((r - d).norm() < 1e-9) return;
        rays.push_back(d);
      };
      if (c->edge_labels[prev] >= 0) add(c->vertices[prev], c->vertices[e]);
      if (c->edge_labels[next] >= 0) add(c->vertices[(next + 1) % m], c->vertices[next]);
    }
  }
  return rays;
}

ConvexFunction legendre_polyhedral(const ConvexFunction& phi) {
  const Polyhedral& P = phi.polyhedral();
  const int n = phi.dim;
  if (n > 2) throw std::invalid_argument("legendre: polyhedral conjugate needs dimension 1 or 2");
  std::vector<Vec> V = polyhedral_vertices(P, n);
  if (V.empty()) throw std::invalid_argument("legendre: improper or purely affine input");
  std::vector<Vec> slopes;
  std::vector<double> offsets;
  for (const auto& v : V) {
    const double fv = evaluate(phi, v);
    slopes.push_back(v);
    offsets.push_back(fv);
  }
  std::vector<Vec> normals;
  std::vector<double> heights;
  if (n == 1) {
    double lo, hi;
    int a, b;
    detail::domain_1d(P, lo, hi, a, b);
    const auto env = detail::envelope_1d(P, lo, hi);
    if (hi == kInf) {
      normals.push_back(vec1(1));
      heights.push_back(P.slopes[env.back().piece](0));
    }
    if (lo == -kInf) {
      normals.push_back(vec1(-1));
      heights.push_back(-P.slopes[env.front().piece](0));
    }
  } else if (!P.has_domain()) {
    std::vector<Vec2> pts;
    for (const auto& y : P.slopes) pts.push_back(v2(y));
    const Polygon H = convex_hull(pts);
    if (H.degenerate || H.size() < 3) throw std::invalid_argument("legendre: conjugate domain has empty interior");
    for (std::size_t e = 0; e < H.size(); ++e) {
      const Vec2 nn = H.edge_normal(e);
      normals.push_back(vx(nn));
      heights.push_back(nn.dot(H.vertices[e]));
    }
  } else if (!domain_polygon(P)) {
    double scale = 1;
    for (double c : P.offsets) scale += std::abs(c);
    for (double h : P.heights) scale += std::abs(h);
    const double W = 1e4 * scale;
    const CellComplex cc = cell_decomposition(P, make_box(Vec2(-W, -W), Vec2(W, W)));
    for (const Vec2& r : recession_rays(cc)) {
      double hr = -kInf;
      for (const auto& y : P.slopes) hr = std::max(hr, v2(y).dot(r));
      normals.push_back(vx(r));
      heights.push_back(hr);
    }
  }
  // Merge coincident vertices (keep the larger minorant, i.e. lower offset).
  std::vector<Vec> s2;
  std::vector<double> o2;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    bool dup = false;
    for (std::size_t k = 0; k < s2.size(); ++k)
      if ((s2[k] - slopes[i]).norm() <= 1e-13 * (1 + slopes[i].norm())) {
        o2[k] = std::min(o2[k], offsets[i]);
        dup = true;
      }
    if (!dup) s2.push_back(slopes[i]), o2.push_back(offsets[i]);
  }
  return make_polyhedral(s2, o2, normals, heights);
}

// Per-axis discrete conjugate: out[j] = max_k (x_k y_j - f_k) via lower hull and a monotone sweep.
void conjugate_line(const std::vector<double>& x, const std::vector<double>& f, const std::vector<double>& y,
                    std::vector<double>& out) {
  std::vector<int> hull;
  for (int k = 0; k < static_cast<int>(x.size()); ++k) {
    if (f[k] == kInf) continue;
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      if ((f[b] - f[a]) * (x[k] - x[b]) >= (f[k] - f[b]) * (x[b] - x[a]))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  out.assign(y.size(), kInf);
  if (hull.empty()) return;
  std::size_t p = 0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    while (p + 1 < hull.size() &&
           x[hull[p + 1]] * y[j] - f[hull[p + 1]] >= x[hull[p]] * y[j] - f[hull[p]])
      ++p;
    out[j] = x[hull[p]] * y[j] - f[hull[p]];
  }
}

ConvexFunction legendre_grid(const ConvexFunction& phi) {
  const Grid& g = phi.grid();
  const int n = g.dim();
  if (n > 2) throw std::invalid_argument("legendre: grid conjugate needs dimension 1 or 2");
  // Dual grid spans the range of finite-difference slopes.
  Vec ylo(n), ystep(n);
  for (int k = 0; k < n; ++k) {
    double smin = kInf, smax = -kInf;
    const int other = n == 2 ? g.shape[1 - k] : 1;
    for (int o = 0; o < other; ++o)
      for (int i = 0; i + 1 < g.shape[k]; ++i) {
        std::vector<int> a(n), b(n);
        a[k] = i, b[k] = i + 1;
        if (n == 2) a[1 - k] = b[1 - k] = o;
        const double fa = g.values[g.index(a)], fb = g.values[g.index(b)];
        if (fa == kInf || fb == kInf) continue;
        const double s = (fb - fa) / g.step(k);
        smin = std::min(smin, s), smax = std::max(smax, s);
      }
    if (smin > smax) smin = -1, smax = 1;
    if (smax - smin < 1e-12) smin -= 1, smax += 1;
    ylo(k) = smin;
    ystep(k) = (smax - smin) / (g.shape[k] - 1);
  }
  auto axis = [&](const Vec& lo, const Vec& st, int k) {
    std::vector<double> v(g.shape[k]);
    for (int i = 0; i < g.shape[k]; ++i) v[i] = lo(k) + st(k) * i;
    return v;
  };
  std::vector<double> values(g.values.size());
  if (n == 1) {
    conjugate_line(axis(g.lo, g.step, 0), g.values, axis(ylo, ystep, 0), values);
  } else {
    const int n0 = g.shape[0], n1 = g.shape[1];
    const auto x0 = axis(g.lo, g.step, 0), x1 = axis(g.lo, g.step, 1);
    const auto y0 = axis(ylo, ystep, 0), y1 = axis(ylo, ystep, 1);
    // First along axis 1 for each x0, then along axis 0 for each y1.
    std::vector<double> tmp(g.values.size());
    std::vector<double> line(n1), out;
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) line[j] = g.values[g.index({i, j})];
      conjugate_line(x1, line, y1, out);
      for (int j = 0; j < n1; ++j) tmp[g.index({i, j})] = out[j];
    }
    std::vector<double> col(n0);
    for (int j = 0; j < n1; ++j) {
      // max_{x0} (x0 y0 + max_{x1}(x1 y1 - f)) = conjugate of -tmp
      for (int i = 0; i < n0; ++i) col[i] = tmp[g.index({i, j})] == kInf ? kInf : -tmp[g.index({i, j})];
      conjugate_line(x0, col, y0, out);
      for (int i = 0; i < n0; ++i) values[g.index({i, j})] = out[i];
    }
  }
  Grid d{ylo, ystep, g.shape, std::move(values)};
  return ConvexFunction{n, std::move(d)};
}

ConvexFunction legendre_analytic(const ConvexFunction& phi) {
  const Analytic& a = phi.analytic();
  const int n = phi.dim;
  // phi*(y) = base*(y - l) + <c, y - l> - k
  Analytic out;
  out.center = a.linear;
  out.linear = a.center;
  out.constant = -a.center.dot(a.linear) - a.constant;
  if (const auto* q = std::get_if<Quadratic>(&a.shape)) {
    out.shape = Quadratic{q->A.inverse()};
    return ConvexFunction{n, out};
  }
  if (const auto* c = std::get_if<Cone>(&a.shape)) {
    if (c->r0 == 0) {
      out.shape = Ball{c->a};
      return ConvexFunction{n, out};
    }
    if (n == 1) return legendre_polyhedral(*as_polyhedral(phi));
    // r0 |w| on the ball of radius a: sampled on a grid.
    const int N = 201;
    Vec lo = out.center - Vec::Constant(n, c->a), hi = out.center + Vec::Constant(n, c->a);
    Analytic cone = out;
    cone.shape = Cone{c->r0, 0};
    Analytic ball = out;
    ball.shape = Ball{c->a};
    ConvexFunction fc{n, cone}, fb{n, ball};
    Grid g = sample_to_grid(fc, lo, hi, N).grid();
    for (std::size_t f = 0; f < g.values.size(); ++f) {
      std::size_t r = f;
      Vec y(n);
      for (int k = n - 1; k >= 0; --k) y(k) = g.lo(k) + g.step(k) * static_cast<double>(r % N), r /= N;
      if (evaluate(fb, y) == kInf) g.values[f] = kInf;
    }
    return ConvexFunction{n, std::move(g)};
  }
  if (const auto* b = std::get_if<Ball>(&a.shape)) {
    out.shape = Cone{b->radius, 0};
    return ConvexFunction{n, out};
  }
  // Polytope indicator: support function max_v <v + c, y> - (<v + c, l> + k).
  const auto& V = std::get<Polytope>(a.shape).vertices;
  std::vector<Vec> s;
  std::vector<double> o;
  for (const auto& v : V) {
    const Vec w = v + a.center;
    s.push_back(w);
    o.push_back(w.dot(a.linear) + a.constant);
  }
  return make_polyhedral(s, o);
}

}  // namespace

ConvexFunction legendre(const ConvexFunction& phi) {
  if (phi.is_polyhedral()) return legendre_polyhedral(phi);
  if (phi.is_grid()) return legendre_grid(phi);
  return legendre_analytic(phi);
}

HorizonValue horizon(const ConvexFunction& psi, const Vec& theta) {
  require_dim(theta, psi.dim, "horizon");
  if (const auto* P = std::get_if<Polyhedral>(&psi.rep)) {
    for (const auto& nn : P->normals)
      if (nn.dot(theta) > kPredicateTol) return {kInf, 0};
    double m = -kInf;
    for (const auto& y : P->slopes) m = std::max(m, y.dot(theta));
    return {m, 0};
  }
  if (const auto* g = std::get_if<Grid>(&psi.rep)) {
    // Secant slopes towards the boundary, extrapolated in 1/lambda.
    const Vec p = g->lo + 0.5 * (g->hi() - g->lo);
    const auto [lo, hi] = line_domain(psi, p, theta);
    (void)lo;
    if (!(hi > 0)) return {kInf, 0};
    const double L = hi * (1 - 1e-12);
    const double f0 = evaluate(psi, p), f1 = evaluate(psi, p + 0.25 * L * theta),
                 f2 = evaluate(psi, p + 0.5 * L * theta), f3 = evaluate(psi, p + L * theta);
    if (f3 == kInf || f2 == kInf) return {kInf, 0};
    const double s_far = (f3 - f2) / (0.5 * L), s_mid = (f2 - f1) / (0.25 * L);
    (void)f0;
    return {s_far, std::abs(s_far - s_mid)};
  }
  const Analytic& a = psi.analytic();
  const double lin = a.linear.dot(theta);
  if (std::holds_alternative<Quadratic>(a.shape)) return {kInf, 0};
  if (const auto* c = std::get_if<Cone>(&a.shape)) return {c->a * theta.norm() + lin, 0};
  if (theta.norm() == 0) return {0, 0};
  return {kInf, 0};
}

namespace {

bool same_vec(const Vec& a, const Vec& b) { return (a - b).norm() <= 1e-14 * (1 + a.norm() + b.norm()); }

// Expanded quadratic 1/2 x^T H x + g^T x + k.
struct QForm {
  Mat H;
  Vec g;
  double k;
};
QForm expand(const Analytic& a) {
  const Mat& A = std::get<Quadratic>(a.shape).A;
  return {A, a.linear - A * a.center, 0.5 * a.center.dot(A * a.center) + a.constant};
}
Analytic collapse(const QForm& q) {
  const Vec c = -q.H.ldlt().solve(q.g);
  Analytic out;
  out.shape = Quadratic{q.H};
  out.center = c;
  out.linear = Vec::Zero(c.size());
  out.constant = q.k - 0.5 * c.dot(q.H * c);
  return out;
}

std::optional<ConvexFunction> inf_convolution_analytic(const ConvexFunction& phi, const ConvexFunction& psi) {
  const int n = phi.dim;
  const Analytic &a = phi.analytic(), &b = psi.analytic();
  // Point indicator: translation.
  for (int side = 0; side < 2; ++side) {
    const Analytic& p = side ? a : b;
    const ConvexFunction& other = side ? psi : phi;
    if (const auto* t = std::get_if<Polytope>(&p.shape); t && t->vertices.size() == 1) {
      const Vec q = p.center + t->vertices[0];
      return add_affine(translate(other, q), Vec::Zero(n), p.linear.dot(q) + p.constant);
    }
  }
  if (std::holds_alternative<Quadratic>(a.shape) && std::holds_alternative<Quadratic>(b.shape)) {
    // Conjugates add; both conjugates are quadratics.
    const ConvexFunction sa = legendre(phi), sb = legendre(psi);
    QForm qa = expand(sa.analytic()), qb = expand(sb.analytic());
    const QForm s{qa.H + qb.H, qa.g + qb.g, qa.k + qb.k};
    return legendre(ConvexFunction{n, collapse(s)});
  }
  if (!same_vec(a.linear, b.linear)) return std::nullopt;
  Analytic out;
  out.linear = a.linear;
  out.center = a.center + b.center;
  out.constant = a.constant + b.constant;
  const auto* ba = std::get_if<Ball>(&a.shape);
  const auto* bb = std::get_if<Ball>(&b.shape);
  const auto* ca = std::get_if<Cone>(&a.shape);
  const auto* cb = std::get_if<Cone>(&b.shape);
  if (ba && bb) {
    out.shape = Ball{ba->radius + bb->radius};
    return ConvexFunction{n, out};
  }
  if ((ca && bb) || (cb && ba)) {
    const Cone& c = ca ? *ca : *cb;
    const Ball& r = ba ? *ba : *bb;
    out.shape = Cone{c.a, c.r0 + r.radius};
    return ConvexFunction{n, out};
  }
  const auto* pa = std::get_if<Polytope>(&a.shape);
  const auto* pb = std::get_if<Polytope>(&b.shape);
  if (pa && pb) {
    Polytope s;
    if (n == 1) {
      auto lo = [](const Polytope& p) { return std::min(p.vertices[0](0), p.vertices.back()(0)); };
      auto hi = [](const Polytope& p) { return std::max(p.vertices[0](0), p.vertices.back()(0)); };
      s.vertices = {vec1(lo(*pa) + lo(*pb)), vec1(hi(*pa) + hi(*pb))};
    } else if (n == 2) {
      Polygon A, B;
      for (const auto& v : pa->vertices) A.vertices.push_back(v2(v));
      for (const auto& v : pb->vertices) B.vertices.push_back(v2(v));
      for (const auto& v : minkowski_sum(A, B).vertices) s.vertices.push_back(vx(v));
    } else {
      return std::nullopt;
    }
    out.shape = s;
    return ConvexFunction{n, out};
  }
  return std::nullopt;
}

}  // namespace

ConvexFunction inf_convolution(const ConvexFunction& phi, const ConvexFunction& psi) {
  if (phi.dim != psi.dim) throw DimensionError("inf_convolution: dimension mismatch");
  const int n = phi.dim;
  if (phi.is_analytic() && psi.is_analytic())
    if (auto r = inf_convolution_analytic(phi, psi)) return *r;
  // Point indicator on one side: translation, for any representation of the other.
  for (int side = 0; side < 2; ++side) {
    const ConvexFunction& p = side ? phi : psi;
    const ConvexFunction& other = side ? psi : phi;
    if (p.analytic_is<Polytope>() && std::get<Polytope>(p.analytic().shape).vertices.size() == 1) {
      const Analytic& a = p.analytic();
      const Vec q = a.center + std::get<Polytope>(a.shape).vertices[0];
      return add_affine(translate(other, q), Vec::Zero(n), a.linear.dot(q) + a.constant);
    }
  }
  const auto pa = as_polyhedral(phi), pb = as_polyhedral(psi);
  if (pa && pb && n <= 2) return legendre(polyhedral_sum(legendre(*pa), legendre(*pb)));
  if (n == 1) {
    // Direct min-plus on a common grid; each node minimizes exactly over the overlap of the domains.
    const Vec e = vec1(1), o = vec1(0);
    auto f1 = [](const ConvexFunction& f, double x) { return evaluate(f, vec1(x)); };
    auto sublevel = [&](const ConvexFunction& f) {
      const Minimum m = minimize(f);
      const double top = m.value + 40;
      const auto [dl, dh] = line_domain(f, o, e);
      auto reach = [&](double dir, double lim) {
        double r = 1;
        while (m.x(0) + dir * r < lim && f1(f, m.x(0) + dir * r) < top) r *= 2;
        double a = 0, b = r;
        for (int k = 0; k < 200 && b - a > 1e-12 * (1 + b); ++k) {
          const double c = 0.5 * (a + b);
          (f1(f, m.x(0) + dir * c) < top ? a : b) = c;
        }
        return dir > 0 ? std::min(lim, m.x(0) + b) : std::max(lim, m.x(0) - b);
      };
      return std::pair{reach(-1, dl), reach(1, dh)};
    };
    const auto [l1, h1] = sublevel(phi);
    const auto [l2, h2] = sublevel(psi);
    const int N = 4001;
    const double lo = l1 + l2, hi = h1 + h2, st = (hi - lo) / (N - 1);
    const double gr = (std::sqrt(5.0) - 1) / 2;
    std::vector<double> vals(N, kInf);
    for (int i = 0; i < N; ++i) {
      const double x = lo + st * i;
      double a = std::max(l1, x - h2), b = std::min(h1, x - l2);
      if (a > b) continue;
      auto g = [&](double y) { return sat_add(f1(phi, y), f1(psi, x - y)); };
      double c = b - gr * (b - a), d = a + gr * (b - a), gc = g(c), gd = g(d);
      while (b - a > 1e-11 * (1 + std::abs(a) + std::abs(b))) {
        if (gc <= gd) {
          b = d, d = c, gd = gc;
          c = b - gr * (b - a), gc = g(c);
        } else {
          a = c, c = d, gc = gd;
          d = a + gr * (b - a), gd = g(d);
        }
      }
      vals[i] = std::min({gc, gd, g(0.5 * (a + b))});
    }
    Grid g{vec1(lo), vec1(st), {N}, std::move(vals)};
    return ConvexFunction{1, std::move(g)};
  }
  throw std::invalid_argument("inf_convolution: no exact or grid path for this pair of representations");
}

LogConcaveDensity sup_convolution(const LogConcaveDensity& f, const LogConcaveDensity& g) {
  return LogConcaveDensity(inf_convolution(f.phi(), g.phi()));
}

ConvexFunction support_function(const LogConcaveDensity& f) { return legendre(f.phi()); }

}  // namespace lcm
