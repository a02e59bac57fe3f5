#include <algorithm>
#include <cmath>

#include "lcm/cells.hpp"
#include "lcm/quadrature.hpp"

namespace lcm {
namespace {

// J_m(d) = int_0^1 u^m e^{-u d} du for d >= 0.
double jfun(int m, double d) {
  if (d > m + 40.0) {
    double fact = 1;
    for (int k = 2; k <= m; ++k) fact *= k;
    double term = 1, poisson = 1;
    for (int j = 1; j <= m; ++j) {
      term *= d / j;
      poisson += term;
    }
    return fact / std::pow(d, m + 1) * (1 - std::exp(-d) * poisson);
  }
  double t = 1.0 / (m + 1), s = t;
  for (int j = 1; j < 400; ++j) {
    t *= d / (m + 1 + j);
    s += t;
    if (t < 1e-18 * s) break;
  }
  return std::exp(-d) * s;
}

// psi2(d1, d2) = integral over the simplex of e^{-s d1 - t d2}, 0 <= d1 <= d2.
double psi2(double d1, double d2) {
  const double h = d2 - d1;
  if (h > 1.0) return (expint_g1(d1) - expint_g1(d2)) / h;
  double s = 0, c = 1;  // c = (-h)^k / (k+1)!
  for (int k = 0; k < 40; ++k) {
    const double term = c * jfun(k + 1, d1);
    s += term;
    if (std::abs(term) < 1e-18 * std::abs(s)) break;
    c *= -h / (k + 2);
  }
  return s;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// e^{-z} divided difference on two nodes.
double dd1(double a, double b) { return -std::exp(-std::min(a, b)) * expint_g1(std::abs(a - b)); }

template <class F>
void fan(const Polygon& P, F&& tri) {
  if (P.vertices.size() < 3 || P.degenerate) return;
  const Vec2 c = P.centroid();
  for (std::size_t i = 0; i < P.size(); ++i) tri(c, P.vertices[i], P.vertices[(i + 1) % P.size()]);
}

void moment_tri(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& a, double b, double shift, int depth,
                Vec2& acc) {
  const double l0 = a.dot(p0) + b, l1 = a.dot(p1) + b, l2 = a.dot(p2) + b;
  const double spread = std::max({l0, l1, l2}) - std::min({l0, l1, l2});
  if (spread > 8.0 && depth > 0) {
    const Vec2 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m20 = 0.5 * (p2 + p0);
    moment_tri(p0, m01, m20, a, b, shift, depth - 1, acc);
    moment_tri(m01, p1, m12, a, b, shift, depth - 1, acc);
    moment_tri(m20, m12, p2, a, b, shift, depth - 1, acc);
    moment_tri(m01, m12, m20, a, b, shift, depth - 1, acc);
    return;
  }
  // Collapsed (Duffy) Gauss rule.
  const Rule& r = gauss_legendre(12);
  const double J = std::abs(cross(p1 - p0, p2 - p0));
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double u = 0.5 * (r.x[i] + 1);
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      const double v = 0.5 * (r.x[j] + 1);
      const double s = u, t = v * (1 - u);
      const Vec2 x = p0 + s * (p1 - p0) + t * (p2 - p0);
      const double w = 0.25 * r.w[i] * r.w[j] * (1 - u) * J;
      acc += w * std::exp(-(a.dot(x) + b - shift)) * x;
    }
  }
}

}  // namespace

double expint_g1(double x) {
  if (x == 0) return 1;
  return -std::expm1(-x) / x;
}

double expint_simplex2(double a0, double a1, double a2) {
  double v[3] = {a0, a1, a2};
  std::sort(v, v + 3);
  return std::exp(-v[0]) * psi2(v[1] - v[0], v[2] - v[0]);
}

double exp_affine_polygon_integral(const Polygon& P, const Vec2& a, double b) {
  double s = 0;
  fan(P, [&](const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    const double A2 = std::abs(cross(p1 - p0, p2 - p0));
    s += A2 * expint_simplex2(a.dot(p0) + b, a.dot(p1) + b, a.dot(p2) + b);
  });
  return s;
}

double exp_affine_segment_integral(const Vec2& p, const Vec2& q, const Vec2& a, double b) {
  const double L = (q - p).norm();
  return -L * dd1(a.dot(p) + b, a.dot(q) + b);
}

double affine_exp_affine_polygon_integral(const Polygon& P, const Vec2& a, double b) {
  double s = 0;
  fan(P, [&](const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    double v[3] = {a.dot(p0) + b, a.dot(p1) + b, a.dot(p2) + b};
    std::sort(v, v + 3);
    const double A2 = std::abs(cross(p1 - p0, p2 - p0));
    const double D2 = std::exp(-v[0]) * psi2(v[1] - v[0], v[2] - v[0]);
    s += A2 * ((v[0] + 2) * D2 + dd1(v[1], v[2]));
  });
  return s;
}

Vec2 exp_affine_polygon_moment(const Polygon& P, const Vec2& a, double b) {
  Vec2 acc = Vec2::Zero();
  fan(P, [&](const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    const double shift = std::min({a.dot(p0) + b, a.dot(p1) + b, a.dot(p2) + b});
    Vec2 t = Vec2::Zero();
    moment_tri(p0, p1, p2, a, b, shift, 10, t);
    acc += std::exp(-shift) * t;
  });
  return acc;
}

}  // namespace lcm
