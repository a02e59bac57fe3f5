#include <algorithm>
#include <cmath>
#include <numbers>

#include "lcm/cells.hpp"
#include "lcm/quadrature.hpp"
#include "detail.hpp"

namespace lcm {
using detail::v2;
namespace {

// Exact integrals of e^{-(y x - c)} over [p, q].
struct Interval1D {
  double mass = 0, entropy = 0, moment = 0;
};

Interval1D integrate_interval(double yv, double c, double p, double q, bool moments) {
  Interval1D r;
  if (p == -kInf && q == kInf) throw std::domain_error("integral diverges (affine piece on the whole line)");
  if (q == kInf) {
    if (!(yv > 0)) throw std::domain_error("integral diverges (non-increasing piece at +inf)");
    const double lp = yv * p - c;
    r.mass = std::exp(-lp) / yv;
    r.entropy = (lp + 1) * std::exp(-lp) / yv;
    if (moments) r.moment = std::exp(-lp) * (p / yv + 1 / (yv * yv));
    return r;
  }
  if (p == -kInf) {
    if (!(yv < 0)) throw std::domain_error("integral diverges (non-decreasing piece at -inf)");
    const double lq = yv * q - c, w = -yv;
    r.mass = std::exp(-lq) / w;
    r.entropy = (lq + 1) * std::exp(-lq) / w;
    if (moments) r.moment = std::exp(-lq) * (q / w - 1 / (w * w));
    return r;
  }
  const double L = q - p, a0 = yv * p - c, a1 = yv * q - c;
  const double d1 = -std::exp(-std::min(a0, a1)) * expint_g1(std::abs(a1 - a0));
  r.mass = -L * d1;
  r.entropy = L * (-(a0 + 1) * d1 - std::exp(-a1));
  if (moments) {
    if (a1 >= a0) {
      const double d = a1 - a0;
      // int_0^1 s e^{-s d} ds
      const double j1 = d > 41 ? (1 - std::exp(-d) * (1 + d)) / (d * d) : [&] {
        double t = 0.5, s = t;
        for (int k = 1; k < 400; ++k) {
          t *= d / (2 + k);
          s += t;
          if (t < 1e-18 * s) break;
        }
        return std::exp(-d) * s;
      }();
      r.moment = L * std::exp(-a0) * (p * expint_g1(d) + L * j1);
    } else {
      r.moment = integrate_interval(-yv, c, -q, -p, true).moment * -1.0;
    }
  }
  return r;
}

double min_on_segment(const Polyhedral& P, const Vec& p, const Vec& d, double s0, double s1) {
  for (std::size_t j = 0; j < P.normals.size(); ++j) {
    const double nd = P.normals[j].dot(d), rhs = P.heights[j] - P.normals[j].dot(p);
    if (std::abs(nd) < 1e-300) {
      if (rhs < 0) return kInf;
      continue;
    }
    if (nd > 0)
      s1 = std::min(s1, rhs / nd);
    else
      s0 = std::max(s0, rhs / nd);
  }
  if (s0 > s1) return kInf;
  const std::size_t N = P.slopes.size();
  std::vector<double> al(N), be(N);
  for (std::size_t i = 0; i < N; ++i) {
    al[i] = P.slopes[i].dot(p) - P.offsets[i];
    be[i] = P.slopes[i].dot(d);
  }
  auto f = [&](double s) {
    double m = -kInf;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, al[i] + s * be[i]);
    return m;
  };
  double best = std::min(f(s0), f(s1));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = i + 1; k < N; ++k) {
      if (be[i] == be[k]) continue;
      const double s = (al[k] - al[i]) / (be[i] - be[k]);
      if (s > s0 && s < s1) best = std::min(best, f(s));
    }
  return best;
}

}  // namespace

CellComplex cell_decomposition(const Polyhedral& phi, const Polygon& truncation) {
  const int N = static_cast<int>(phi.slopes.size());
  const int J = static_cast<int>(phi.normals.size());
  const int T = static_cast<int>(truncation.size());
  CellComplex cc;
  cc.truncation = truncation;
  cc.cells.assign(N, std::nullopt);
  cc.facets.assign(J, {});
  for (int i = 0; i < N; ++i) {
    std::vector<Halfplane> hp;
    std::vector<int> map;
    for (int j = 0; j < J; ++j) {
      hp.push_back({v2(phi.normals[j]), phi.heights[j], static_cast<int>(hp.size())});
      map.push_back(j);
    }
    for (int t = 0; t < T; ++t) {
      const Vec2 n = truncation.edge_normal(t);
      hp.push_back({n, n.dot(truncation.vertices[t]), static_cast<int>(hp.size())});
      map.push_back(-2 - t);
    }
    bool dominated = false;
    for (int k = 0; k < N; ++k) {
      if (k == i) continue;
      const Vec2 dy = v2(phi.slopes[k] - phi.slopes[i]);
      const double nn = dy.norm();
      if (nn == 0) {
        // Parallel piece: the smaller offset wins everywhere, ties go to the lower index.
        const double dc = phi.offsets[k] - phi.offsets[i];
        dominated = dominated || dc < 0 || (dc == 0 && k < i);
        continue;
      }
      hp.push_back({dy / nn, (phi.offsets[k] - phi.offsets[i]) / nn, static_cast<int>(hp.size())});
      map.push_back(J + k);
    }
    if (dominated) continue;
    Polygon c = halfplane_intersection(hp);
    if (c.degenerate || c.empty()) continue;
    for (auto& l : c.edge_labels) l = (l >= 0) ? map[l] : -1;
    for (std::size_t e = 0; e < c.size(); ++e) {
      const int l = c.edge_labels[e];
      if (l >= 0 && l < J) cc.facets[l].push_back({{c.vertices[e], c.vertices[(e + 1) % c.size()]}, i});
    }
    cc.cells[i] = std::move(c);
  }
  return cc;
}

TailCertificate certify_tail(const Polyhedral& P, int dim, double reference_mass) {
  TailCertificate tc;
  ConvexFunction phi{dim, P};
  if (dim == 1) {
    double lo, hi;
    int a, b;
    detail::domain_1d(P, lo, hi, a, b);
    if (lo > -kInf && hi < kInf) {
      tc.bounded_domain = true;
      tc.lo = lo;
      tc.hi = hi;
      return tc;
    }
  } else if (dim == 2) {
    if (auto dp = domain_polygon(P)) {
      tc.bounded_domain = true;
      tc.box = *dp;
      return tc;
    }
  } else {
    throw std::invalid_argument("certify_tail: dimension must be 1 or 2");
  }
  const Minimum m = minimize(phi);
  tc.x0 = m.x;
  tc.phi0 = m.value;
  double r = 1;
  for (const auto& y : P.slopes) r = std::max(r, 1.0 / std::max(y.norm(), 1e-3));
  for (int iter = 0; iter < 80; ++iter, r *= 2) {
    double dmin = kInf;
    if (dim == 1) {
      dmin = std::min(evaluate(phi, tc.x0 + vec1(r)), evaluate(phi, tc.x0 - vec1(r)));
    } else {
      const Vec2 c = v2(tc.x0);
      const Vec2 corners[4] = {c + Vec2(-r, -r), c + Vec2(r, -r), c + Vec2(r, r), c + Vec2(-r, r)};
      for (int e = 0; e < 4; ++e) {
        Vec p(2), d(2);
        p << corners[e].x(), corners[e].y();
        const Vec2 dd = corners[(e + 1) % 4] - corners[e];
        d << dd.x(), dd.y();
        dmin = std::min(dmin, min_on_segment(P, p, d, 0, 1));
      }
    }
    const double delta = dmin - tc.phi0;
    if (!(delta > 0)) continue;
    const double rho = dim == 1 ? r : r * std::sqrt(2.0);
    const double kappa = delta == kInf ? 1e300 : delta / rho;
    double tail = 0;
    if (delta != kInf) {
      tail = dim == 1 ? 2 * std::exp(-tc.phi0 - kappa * r) / kappa
                      : 2 * std::numbers::pi * std::exp(-tc.phi0 - kappa * r) * (r / kappa + 1 / (kappa * kappa));
    }
    if (reference_mass > 0 && tail > kTailCutoff * reference_mass) continue;
    tc.half_width = r;
    tc.kappa = kappa;
    tc.tail = tail;
    if (dim == 1) {
      tc.lo = tc.x0(0) - r;
      tc.hi = tc.x0(0) + r;
    } else {
      const Vec2 c = v2(tc.x0);
      tc.box = make_box(c - Vec2(r, r), c + Vec2(r, r));
    }
    return tc;
  }
  throw std::domain_error("certify_tail: no coercivity witness (integral may diverge)");
}

PolyhedralIntegrals integrate_polyhedral(const Polyhedral& P, int dim, bool with_moments) {
  PolyhedralIntegrals out;
  const std::size_t N = P.slopes.size(), J = P.normals.size();
  out.cell.assign(N, 0.0);
  out.facet.assign(J, 0.0);
  out.moment = Vec::Zero(dim);
  if (dim == 1) {
    double lo, hi;
    int jlo, jhi;
    detail::domain_1d(P, lo, hi, jlo, jhi);
    if (!(lo < hi)) throw std::domain_error("integrate_polyhedral: empty domain");
    for (const auto& pc : detail::envelope_1d(P, lo, hi)) {
      const Interval1D r = integrate_interval(P.slopes[pc.piece](0), P.offsets[pc.piece], pc.a, pc.b, with_moments);
      out.cell[pc.piece] += r.mass;
      out.entropy += r.entropy;
      out.moment(0) += r.moment;
    }
    for (double m : out.cell) out.total += m;
    ConvexFunction phi{1, P};
    if (jhi >= 0) out.facet[jhi] = std::exp(-evaluate(phi, vec1(hi)));
    if (jlo >= 0) out.facet[jlo] = std::exp(-evaluate(phi, vec1(lo)));
    return out;
  }
  if (dim != 2) throw std::invalid_argument("integrate_polyhedral: dimension must be 1 or 2");
  TailCertificate tc = certify_tail(P, 2, 0);
  auto run = [&](const Polygon& trunc) {
    CellComplex cc = cell_decomposition(P, trunc);
    PolyhedralIntegrals r;
    r.cell.assign(N, 0.0);
    r.facet.assign(J, 0.0);
    r.moment = Vec::Zero(2);
    for (std::size_t i = 0; i < N; ++i) {
      if (!cc.cells[i]) continue;
      const Vec2 a = v2(P.slopes[i]);
      const double b = -P.offsets[i];
      r.cell[i] = exp_affine_polygon_integral(*cc.cells[i], a, b);
      r.entropy += affine_exp_affine_polygon_integral(*cc.cells[i], a, b);
      if (with_moments) {
        const Vec2 m = exp_affine_polygon_moment(*cc.cells[i], a, b);
        r.moment(0) += m.x();
        r.moment(1) += m.y();
      }
    }
    for (std::size_t j = 0; j < J; ++j)
      for (const auto& fp : cc.facets[j])
        r.facet[j] += exp_affine_segment_integral(fp.segment[0], fp.segment[1], v2(P.slopes[fp.piece]),
                                                  -P.offsets[fp.piece]);
    for (double m : r.cell) r.total += m;
    return r;
  };
  if (tc.bounded_domain) return run(tc.box);
  PolyhedralIntegrals first = run(tc.box);
  if (tc.tail <= kTailCutoff * first.total) {
    first.tail_bound = tc.tail;
    return first;
  }
  TailCertificate tc2 = certify_tail(P, 2, first.total);
  PolyhedralIntegrals r = run(tc2.box);
  r.tail_bound = tc2.tail;
  return r;
}

}  // namespace lcm
