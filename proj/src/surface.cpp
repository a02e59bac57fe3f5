#include "lcm/surface.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "detail.hpp"
#include "lcm/cells.hpp"
#include "lcm/quadrature.hpp"
#include "lcm/rng.hpp"

namespace lcm {

using detail::v2;
using detail::vx;

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::quadrature: return "quadrature";
    case Provenance::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

namespace {

constexpr int kCircleAtoms = 512;
constexpr int kHermiteNodes = 40;

Vec circle(int j, int M) {
  const double t = 2 * std::numbers::pi * (j + 0.5) / M;
  return vec2(std::cos(t), std::sin(t));
}

SurfaceMeasures from_polyhedral(const Polyhedral& P, int n) {
  const PolyhedralIntegrals I = integrate_polyhedral(P, n);
  std::vector<MuAtom> mu;
  std::vector<NuAtom> nu;
  for (std::size_t i = 0; i < P.slopes.size(); ++i)
    if (I.cell[i] > 0) mu.push_back({P.slopes[i], I.cell[i]});
  for (std::size_t j = 0; j < P.normals.size(); ++j)
    if (I.facet[j] > 0) nu.push_back({P.normals[j], I.facet[j]});
  SurfaceMeasures s;
  s.pair = make_measure_pair(n, mu, nu, 1e-12);
  s.provenance = Provenance::exact;
  s.f_integral = I.total;
  s.tail_bound = I.tail_bound;
  return s;
}

std::optional<SurfaceMeasures> analytic_measures(const LogConcaveDensity& f) {
  const ConvexFunction& phi = f.phi();
  if (!phi.is_analytic()) return std::nullopt;
  const int n = phi.dim;
  const Analytic& a = phi.analytic();
  const Vec& l = a.linear;
  const double pre = std::exp(-a.constant - l.dot(a.center));
  SurfaceMeasures s;
  s.provenance = Provenance::quadrature;
  s.f_integral = integral(f);
  s.pair.dim = n;
  const double I = s.f_integral;
  if (const auto* q = std::get_if<Quadratic>(&a.shape)) {
    // grad phi pushes f dx forward to I * N(0, A).
    if (n > 2) return std::nullopt;
    const Mat L = q->A.llt().matrixL();
    const Rule& H = gauss_hermite(kHermiteNodes);
    const double norm = 1 / std::sqrt(2 * std::numbers::pi);
    if (n == 1) {
      for (int i = 0; i < kHermiteNodes; ++i) s.pair.mu.push_back({vec1(L(0, 0) * H.x[i]), I * H.w[i] * norm});
    } else {
      for (int i = 0; i < kHermiteNodes; ++i)
        for (int j = 0; j < kHermiteNodes; ++j)
          s.pair.mu.push_back({L * vec2(H.x[i], H.x[j]), I * H.w[i] * H.w[j] * norm * norm});
    }
    return s;
  }
  if (const auto* c = std::get_if<Cone>(&a.shape)) {
    if (n != 2) return std::nullopt;
    const int M = kCircleAtoms;
    for (int j = 0; j < M; ++j) {
      const Vec w = circle(j, M);
      const double lam = l.dot(w), be = c->a + lam;
      const double m = pre * (2 * std::numbers::pi / M) * std::exp(-lam * c->r0) * (c->r0 / be + 1 / (be * be));
      s.pair.mu.push_back({c->a * w + l, m});
    }
    if (c->r0 > 0) {
      const double L = l.norm();
      const double inner = L == 0 ? std::numbers::pi * c->r0 * c->r0
                                  : 2 * std::numbers::pi * c->r0 * std::cyl_bessel_i(1.0, L * c->r0) / L;
      s.pair.mu.push_back({l, pre * inner});
    }
    return s;
  }
  if (const auto* b = std::get_if<Ball>(&a.shape)) {
    s.pair.mu.push_back({l, I});
    if (n == 1) {
      for (double sg : {1.0, -1.0})
        s.pair.nu.push_back({vec1(sg), std::exp(-evaluate(phi, a.center + vec1(sg * b->radius)))});
      return s;
    }
    if (n != 2) return std::nullopt;
    const int M = kCircleAtoms;
    for (int j = 0; j < M; ++j) {
      const Vec w = circle(j, M);
      const double m = (2 * std::numbers::pi / M) * b->radius * pre * std::exp(-b->radius * l.dot(w));
      s.pair.nu.push_back({w, m});
    }
    return s;
  }
  return std::nullopt;
}

}  // namespace

SurfaceMeasures surface_measures_exact(const LogConcaveDensity& f) {
  const int n = f.dim();
  if (n > 2) throw DimensionError("surface_measures_exact: dimension must be 1 or 2");
  const auto p = as_polyhedral(f.phi());
  if (!p) throw std::invalid_argument("surface_measures_exact: phi is not polyhedral");
  return from_polyhedral(p->polyhedral(), n);
}

SurfaceMeasures surface_measures_mc(const LogConcaveDensity& f, std::size_t n_samples, std::uint64_t seed) {
  const ConvexFunction& phi = f.phi();
  const int n = phi.dim;
  if (n_samples == 0) throw std::invalid_argument("surface_measures_mc: need at least one sample");
  // Reject smooth supports carrying boundary mass.
  if (phi.analytic_is<Ball>() || (phi.analytic_is<Polytope>() && n > 2))
    throw std::invalid_argument("surface_measures_mc: smooth support with boundary mass is unsupported");
  const auto poly = as_polyhedral(phi);
  if (phi.is_grid()) {
    const Grid& g = phi.grid();
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      std::size_t r = k;
      bool boundary = false;
      for (int d = n - 1; d >= 0; --d) {
        const int i = static_cast<int>(r % g.shape[d]);
        r /= g.shape[d];
        if (i == 0 || i == g.shape[d] - 1) boundary = true;
      }
      if (boundary && g.values[k] != kInf)
        throw std::invalid_argument("surface_measures_mc: grid support carries boundary mass");
    }
  }
  const CoercivityWitness w = f.witness();
  const double ap = w.a / std::sqrt(static_cast<double>(n));
  // e^{-phi} <= M q with q the product Laplace density of rate ap.
  const double logM = -w.b + n * std::log(2 / ap);
  CounterRng rng(seed, 0);
  std::uint64_t ctr = 0;
  std::size_t proposals = 0, accepted = 0;
  std::vector<Vec> grads;
  grads.reserve(n_samples);
  while (accepted < n_samples) {
    Vec x(n);
    double l1 = 0;
    for (int k = 0; k < n; ++k) {
      const double u = rng.uniform(ctr++), sgn = rng.uniform(ctr++) < 0.5 ? -1 : 1;
      x(k) = -sgn * std::log(u) / ap;
      l1 += std::abs(x(k));
    }
    const double v = evaluate(phi, x);
    ++proposals;
    const double u = rng.uniform(ctr++);
    if (v != kInf && std::log(u) < -v + w.b + ap * l1) {
      ++accepted;
      grads.push_back(subgradient(phi, x));
    }
    if (proposals >= 10000 && static_cast<double>(accepted) / proposals < 1e-3)
      throw std::runtime_error("surface_measures_mc: envelope acceptance below 1e-3; translate f towards the origin");
  }
  SurfaceMeasures s;
  s.provenance = Provenance::monte_carlo;
  s.seed = seed;
  s.samples = accepted;
  s.acceptance = static_cast<double>(accepted) / proposals;
  const double Mv = std::exp(logM);
  s.integral_stderr = Mv * std::sqrt(s.acceptance * (1 - s.acceptance) / proposals);
  s.f_integral = integral(f);
  s.pair.dim = n;
  // Merge gradient atoms on a 1e-6 lattice.
  const double h = 1e-6, mass = s.f_integral / accepted;
  std::map<std::array<long long, 4>, std::size_t> index;
  for (const auto& g : grads) {
    if (n > 4) {
      s.pair.mu.push_back({g, mass});
      continue;
    }
    std::array<long long, 4> key{0, 0, 0, 0};
    for (int k = 0; k < n; ++k) key[k] = static_cast<long long>(std::floor(g(k) / h));
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, s.pair.mu.size());
      s.pair.mu.push_back({g, mass});
    } else {
      s.pair.mu[it->second].m += mass;
    }
  }
  // Facet masses by stratified sampling along each facet.
  if (poly && poly->polyhedral().has_domain()) {
    const Polyhedral& P = poly->polyhedral();
    std::vector<double> wj(P.normals.size(), 0.0);
    if (n == 1) {
      const PolyhedralIntegrals I = integrate_polyhedral(P, 1);
      wj = I.facet;
    } else if (n == 2) {
      const TailCertificate tc = certify_tail(P, 2, s.f_integral);
      const CellComplex cc = cell_decomposition(P, tc.box);
      const std::size_t K = std::max<std::size_t>(64, n_samples / 100);
      CounterRng fr(seed, 1);
      std::uint64_t fc = 0;
      for (std::size_t j = 0; j < cc.facets.size(); ++j)
        for (const auto& fp : cc.facets[j]) {
          const Vec2 p = fp.segment[0], q = fp.segment[1];
          const double len = (q - p).norm();
          double acc = 0;
          for (std::size_t k = 0; k < K; ++k) {
            const double t = (k + fr.uniform(fc++)) / K;
            const Vec2 x = p + t * (q - p);
            acc += std::exp(-(v2(P.slopes[fp.piece]).dot(x) - P.offsets[fp.piece]));
          }
          wj[j] += acc * len / K;
        }
    }
    for (std::size_t j = 0; j < wj.size(); ++j)
      if (wj[j] > 0) s.pair.nu.push_back({P.normals[j], wj[j]});
  }
  return s;
}

SurfaceMeasures surface_measures(const LogConcaveDensity& f, std::size_t mc_samples, std::uint64_t seed) {
  if (f.dim() <= 2)
    if (auto p = as_polyhedral(f.phi())) return from_polyhedral(p->polyhedral(), f.dim());
  if (auto a = analytic_measures(f)) return *a;
  return surface_measures_mc(f, mc_samples, seed);
}

double delta_via_measures(const SurfaceMeasures& mf, const LogConcaveDensity& g) {
  const ConvexFunction hg = support_function(g);
  double s = 0;
  for (const auto& a : mf.pair.mu) {
    const double v = evaluate(hg, a.x);
    if (v == kInf) return kInf;
    s += a.m * v;
  }
  for (const auto& a : mf.pair.nu) {
    const double v = horizon(hg, a.theta).value;
    if (v == kInf) return kInf;
    s += a.w * v;
  }
  return s;
}

double delta_via_measures(const LogConcaveDensity& f, const LogConcaveDensity& g) {
  return delta_via_measures(surface_measures(f), g);
}

double entropy_integral(const LogConcaveDensity& f) {
  const ConvexFunction& phi = f.phi();
  const int n = phi.dim;
  if (n <= 2)
    if (auto p = as_polyhedral(phi)) return integrate_polyhedral(p->polyhedral(), n).entropy;
  if (!phi.is_analytic()) throw std::invalid_argument("entropy_integral: no closed form for this representation");
  const Analytic& a = phi.analytic();
  const Vec& l = a.linear;
  if (std::holds_alternative<Quadratic>(a.shape)) return integral(f) * (n / 2.0 + minimize(phi).value);
  if (n != 2) throw std::invalid_argument("entropy_integral: closed forms cover dimension 2 cones and balls");
  const double kap = l.dot(a.center) + a.constant, pre = std::exp(-kap);
  const int M = kCircleAtoms;
  const Rule& G = gauss_legendre(24);
  // Inner part: phi = <l, z> + kappa on the disc of radius r_in.
  auto disc = [&](double rin) {
    double s = 0;
    for (int j = 0; j < M; ++j) {
      const double lam = l.dot(circle(j, M));
      for (std::size_t q = 0; q < G.x.size(); ++q) {
        const double r = 0.5 * rin * (G.x[q] + 1);
        s += (2 * std::numbers::pi / M) * 0.5 * rin * G.w[q] * r * (lam * r + kap) * std::exp(-lam * r);
      }
    }
    return pre * s;
  };
  if (const auto* c = std::get_if<Cone>(&a.shape)) {
    double s = 0;
    for (int j = 0; j < M; ++j) {
      const double lam = l.dot(circle(j, M)), be = c->a + lam, r0 = c->r0;
      s += (2 * std::numbers::pi / M) * std::exp(-lam * r0) *
           (r0 / be + 2 / (be * be) + (lam * r0 + kap) * (r0 / be + 1 / (be * be)));
    }
    return pre * s + (c->r0 > 0 ? disc(c->r0) : 0.0);
  }
  if (const auto* b = std::get_if<Ball>(&a.shape)) return disc(b->radius);
  throw std::invalid_argument("entropy_integral: no closed form for this representation");
}

SelfCheck delta_self_check(const LogConcaveDensity& f) {
  SelfCheck c;
  c.lhs = delta_via_measures(f, f);
  c.rhs = f.dim() * integral(f) - entropy_integral(f);
  return c;
}

std::optional<Polygon> indicator_polygon(const ConvexFunction& g, int ball_sides) {
  if (g.dim != 2) return std::nullopt;
  if (g.is_analytic()) {
    const Analytic& a = g.analytic();
    if (a.linear.norm() != 0 || a.constant != 0) return std::nullopt;
    if (const auto* b = std::get_if<Ball>(&a.shape)) return make_regular_polygon(ball_sides, b->radius, v2(a.center));
    if (const auto* p = std::get_if<Polytope>(&a.shape)) {
      Polygon P;
      for (const auto& v : p->vertices) P.vertices.push_back(v2(v + a.center));
      if (P.size() == 1) P.degenerate = true;
      return P;
    }
    return std::nullopt;
  }
  if (g.is_polyhedral()) {
    const Polyhedral& P = g.polyhedral();
    if (P.slopes.size() != 1 || P.slopes[0].norm() != 0 || P.offsets[0] != 0) return std::nullopt;
    return domain_polygon(P);
  }
  return std::nullopt;
}

IsoperimetricRatio isoperimetric_ratio(const LogConcaveDensity& f) {
  const int n = f.dim();
  IsoperimetricRatio r;
  const int sides = 128;
  std::optional<LogConcaveDensity> ball;
  if (n == 2) {
    ball.emplace(make_polygon_indicator(make_regular_polygon(sides, 1.0)));
    r.polygon_defect = 1 - std::cos(std::numbers::pi / sides);
  } else {
    ball.emplace(make_ball_indicator(n, 1.0));
  }
  r.delta = delta_via_measures(f, *ball);
  const double maxf = std::exp(-minimize(f.phi()).value);
  r.ratio = r.delta / (std::pow(maxf, 1.0 / n) * std::pow(integral(f), 1 - 1.0 / n));
  return r;
}

}  // namespace lcm
