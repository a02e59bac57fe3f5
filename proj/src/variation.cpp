#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "lcm/quadrature.hpp"
#include "lcm/surface.hpp"

namespace lcm {

using detail::v2;

namespace {

Polygon sublevel_polygon(const Polyhedral& P, double tau) {
  std::vector<Halfplane> hp;
  for (std::size_t j = 0; j < P.normals.size(); ++j) hp.push_back({v2(P.normals[j]), P.heights[j], -1});
  for (std::size_t i = 0; i < P.slopes.size(); ++i) {
    const double nn = P.slopes[i].norm();
    if (nn == 0) {
      if (-P.offsets[i] > tau) return Polygon{};
      continue;
    }
    hp.push_back({v2(P.slopes[i]) / nn, (tau + P.offsets[i]) / nn, -1});
  }
  if (hp.empty()) throw std::domain_error("sublevel_polygon: unbounded sublevel set");
  return halfplane_intersection(hp);
}

// int_{min phi}^{inf} e^{-tau} g(F_tau) dtau, piecewise between vertex values.
double levelset_integral(const Polyhedral& P, const std::function<double(const Polygon&)>& g) {
  std::vector<double> bp;
  for (const auto& v : polyhedral_vertices(P, 2)) bp.push_back(evaluate(ConvexFunction{2, P}, v));
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(), [](double a, double b) { return std::abs(a - b) <= 1e-13 * (1 + std::abs(a)); }),
           bp.end());
  if (bp.empty()) throw std::domain_error("levelset_integral: no vertices");
  auto integrand = [&](double tau) {
    const Polygon F = sublevel_polygon(P, tau);
    if (F.empty() || F.degenerate) return 0.0;
    return std::exp(-tau) * g(F);
  };
  double s = 0;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) s += integrate_gk(integrand, bp[k], bp[k + 1], 1e-14);
  s += integrate_gk(integrand, bp.back(), bp.back() + 60, 1e-14);
  return s;
}

double axis_extent(const ConvexFunction& phi) {
  const Minimum m = minimize(phi);
  double best = 0;
  for (int k = 0; k < phi.dim; ++k) {
    Vec e = Vec::Zero(phi.dim);
    e(k) = 1;
    double width = 0;
    for (double sg : {1.0, -1.0}) {
      auto in = [&](double s) { return evaluate(phi, m.x + sg * s * e) <= m.value + 1; };
      double a = 0, b = 1;
      while (in(b) && b < 1e8) a = b, b *= 2;
      for (int it = 0; it < 50; ++it) {
        const double c = 0.5 * (a + b);
        (in(c) ? a : b) = c;
      }
      width += a;
    }
    best = std::max(best, width);
  }
  return best;
}

DeltaEstimate extrapolate(std::vector<double> t, std::vector<double> q) {
  DeltaEstimate e;
  e.steps = t;
  e.quotients = q;
  const std::size_t m = t.size();
  // Neville tableau towards t = 0; P[i] holds the polynomial through points i..i+level.
  std::vector<double> P = q;
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double ti = t[i], tj = t[i + level];
      P[i] = (-tj * P[i] + ti * P[i + 1]) / (ti - tj);
    }
  }
  e.value = P[0];
  if (m >= 2) {
    // Extrapolant through the last m-1 points.
    std::vector<double> R(q.begin() + 1, q.end());
    for (std::size_t level = 1; level + 1 < m; ++level)
      for (std::size_t i = 0; i + level < m - 1; ++i) {
        const double ti = t[i + 1], tj = t[i + 1 + level];
        R[i] = (-tj * R[i] + ti * R[i + 1]) / (ti - tj);
      }
    e.error = std::abs(e.value - R[0]);
  }
  return e;
}

}  // namespace

double beta(const LogConcaveDensity& f, const LogConcaveDensity& g, double t) {
  if (t == 0) return integral(f);
  if (t > 0) return integral(sup_convolution(f, dilate(t, g)));
  const auto L = indicator_polygon(g.phi());
  if (!L) throw std::invalid_argument("beta: negative t needs g to be the indicator of a convex body (2D)");
  const auto p = as_polyhedral(f.phi());
  if (!p || f.dim() != 2) throw std::invalid_argument("beta: negative t needs polygonal level sets of f");
  const Polygon sL = L->scaled(-t);
  return levelset_integral(p->polyhedral(), [&](const Polygon& F) {
    const Polygon E = minkowski_difference(F, sL);
    return E.degenerate ? 0.0 : E.area();
  });
}

DeltaNumeric delta_numeric(const LogConcaveDensity& f, const LogConcaveDensity& g, std::vector<double> steps,
                           bool two_sided) {
  if (two_sided && !indicator_polygon(g.phi()))
    throw std::invalid_argument("delta_numeric: two-sided mode needs g to be the indicator of a convex body");
  if (steps.empty()) {
    const double scale = std::clamp(axis_extent(f.phi()) / (2 * axis_extent(g.phi())), 1e-2, 1e2);
    steps = {1e-1 * scale, std::pow(10.0, -2.5) * scale, 1e-4 * scale};
  }
  const double b0 = integral(f);
  DeltaNumeric out;
  std::vector<double> qr, ql;
  for (double t : steps) qr.push_back((beta(f, g, t) - b0) / t);
  out.right = extrapolate(steps, qr);
  if (two_sided) {
    for (double t : steps) ql.push_back((b0 - beta(f, g, -t)) / t);
    out.left = extrapolate(steps, ql);
  }
  return out;
}

double delta_via_levelsets(const LogConcaveDensity& f, const Polygon& L) {
  if (f.dim() != 2) throw DimensionError("delta_via_levelsets: dimension must be 2");
  const auto p = as_polyhedral(f.phi());
  if (!p) throw std::invalid_argument("delta_via_levelsets: level sets are not polygonal");
  return 2 * levelset_integral(p->polyhedral(), [&](const Polygon& F) { return mixed_volume_v1(F, L); });
}

}  // namespace lcm
