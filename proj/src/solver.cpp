#include "lcm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "lcm/cells.hpp"
#include "lcm/rng.hpp"
#include "lcm/surface.hpp"

namespace lcm {

namespace {

struct Masses {
  bool ok = false;
  double total = 0;
  std::vector<double> cell, facet;
};

Polyhedral induced_polyhedral(const SolverState& s, const MeasurePair& t) {
  Polyhedral P;
  for (std::size_t i = 0; i < t.mu.size(); ++i) {
    P.slopes.push_back(t.mu[i].x);
    P.offsets.push_back(s.psi[i]);
  }
  for (std::size_t j = 0; j < t.nu.size(); ++j) {
    P.normals.push_back(t.nu[j].theta);
    P.heights.push_back(s.h[j]);
  }
  return P;
}

// Importance sampling against a fixed product Laplace proposal (common random numbers).
Masses masses_mc(const Polyhedral& P, int n, std::size_t samples, std::uint64_t seed) {
  if (P.has_domain()) throw DimensionError("solver: nu atoms are supported in dimension 1 or 2 only");
  Masses m;
  m.cell.assign(P.slopes.size(), 0.0);
  CounterRng rng(seed, 7);
  std::uint64_t ctr = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    Vec x(n);
    double logq = 0;
    for (int d = 0; d < n; ++d) {
      const double u = rng.uniform(ctr++), sgn = rng.uniform(ctr++) < 0.5 ? -1 : 1;
      x(d) = -sgn * std::log(u);
      logq += -std::abs(x(d)) - std::log(2.0);
    }
    const int i = active_piece(P, x);
    if (i < 0) continue;
    const double v = P.slopes[i].dot(x) - P.offsets[i];
    const double w = std::exp(-v - logq) / static_cast<double>(samples);
    m.cell[i] += w;
    m.total += w;
  }
  m.ok = m.total > 0 && std::isfinite(m.total);
  return m;
}

Masses masses(const SolverState& s, const MeasurePair& t, std::size_t mc_samples = 200000,
              std::uint64_t seed = 1) {
  const Polyhedral P = induced_polyhedral(s, t);
  if (t.dim > 2) return masses_mc(P, t.dim, mc_samples, seed);
  Masses m;
  try {
    const PolyhedralIntegrals I = integrate_polyhedral(P, t.dim);
    m.total = I.total;
    m.cell = I.cell;
    m.facet = I.facet;
    m.ok = I.total > 0 && std::isfinite(I.total);
  } catch (const std::exception&) {
    // Empty or degenerate K(h), or a divergent integral.
    m.ok = false;
  }
  return m;
}

double objective_from(const SolverState& s, const MeasurePair& t, const Masses& m) {
  if (!m.ok) return kInf;
  double G = 0;
  for (std::size_t i = 0; i < t.mu.size(); ++i) G += t.mu[i].m * s.psi[i];
  for (std::size_t j = 0; j < t.nu.size(); ++j) G += t.nu[j].w * s.h[j];
  return G - t.mu_mass() * std::log(m.total);
}

Vec gradient_from(const MeasurePair& t, const Masses& m) {
  const std::size_t N = t.mu.size(), J = t.nu.size();
  const double M = t.mu_mass();
  Vec g(N + J);
  for (std::size_t i = 0; i < N; ++i) g(i) = t.mu[i].m - M * m.cell[i] / m.total;
  for (std::size_t j = 0; j < J; ++j) g(N + j) = t.nu[j].w - M * m.facet[j] / m.total;
  return g;
}

SolverState unpack(const Vec& z, std::size_t N, std::size_t J) {
  SolverState s;
  s.psi.assign(z.data(), z.data() + N);
  s.h.assign(z.data() + N, z.data() + N + J);
  return s;
}

Vec pack(const SolverState& s) {
  Vec z(s.psi.size() + s.h.size());
  for (std::size_t i = 0; i < s.psi.size(); ++i) z(i) = s.psi[i];
  for (std::size_t j = 0; j < s.h.size(); ++j) z(s.psi.size() + j) = s.h[j];
  return z;
}

void check_state(const SolverState& s, const MeasurePair& t) {
  if (s.psi.size() != t.mu.size() || s.h.size() != t.nu.size())
    throw std::invalid_argument("solver: state does not match the target atoms");
}

}  // namespace

ConvexFunction induced_function(const SolverState& s, const MeasurePair& target) {
  check_state(s, target);
  return ConvexFunction{target.dim, induced_polyhedral(s, target)};
}

double objective(const SolverState& s, const MeasurePair& target) {
  check_state(s, target);
  return objective_from(s, target, masses(s, target));
}

Gradient gradient(const SolverState& s, const MeasurePair& target) {
  check_state(s, target);
  const Masses m = masses(s, target);
  if (!m.ok) throw std::domain_error("gradient: integral of e^{-phi} is zero or infinite");
  const Vec g = gradient_from(target, m);
  const std::size_t N = target.mu.size();
  Gradient out;
  out.dpsi.assign(g.data(), g.data() + N);
  out.dh.assign(g.data() + N, g.data() + g.size());
  return out;
}

ConvexFunction barycenter_aligned(const ConvexFunction& phi, Vec* barycenter) {
  const auto p = as_polyhedral(phi);
  if (!p || phi.dim > 2) throw std::invalid_argument("barycenter_aligned: polyhedral phi in dimension 1 or 2 required");
  const PolyhedralIntegrals I = integrate_polyhedral(p->polyhedral(), phi.dim, true);
  const Vec b = I.moment / I.total;
  if (barycenter) *barycenter = b;
  return translate(*p, -b);
}

SolveReport solve(const MeasurePair& target, const SolveOptions& opts) {
  const ValidationReport vr = validate_pair(target);
  if (!vr.valid()) throw std::invalid_argument("solve: target is not admissible: " + vr.failure());
  const int n = target.dim;
  const std::size_t N = target.mu.size(), J = target.nu.size();
  const double M = target.mu_mass();

  SolverState s0;
  double ymax = 0;
  for (const auto& a : target.mu) {
    s0.psi.push_back(0.5 * a.x.squaredNorm());
    ymax = std::max(ymax, a.x.norm());
  }
  s0.h.assign(J, 1 + ymax);
  if (opts.init_jitter > 0) {
    CounterRng rng(opts.seed, 3);
    std::uint64_t c = 0;
    for (auto& v : s0.psi) v += opts.init_jitter * (2 * rng.uniform(c++) - 1);
    for (auto& v : s0.h) v += opts.init_jitter * (2 * rng.uniform(c++) - 1);
  }

  auto eval = [&](const Vec& z, Masses& m) {
    const SolverState s = unpack(z, N, J);
    m = masses(s, target, opts.mc_samples, opts.seed);
    return objective_from(s, target, m);
  };

  SolveReport rep;
  rep.min_atom_gap = kInf;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = i + 1; k < N; ++k)
      rep.min_atom_gap = std::min(rep.min_atom_gap, (target.mu[i].x - target.mu[k].x).norm());
  rep.ill_conditioned = rep.min_atom_gap < 1e-6;
  Vec z = pack(s0);
  Masses m;
  double f = eval(z, m);
  if (!(f < kInf)) throw std::domain_error("solve: initial point has no finite objective");
  Vec g = gradient_from(target, m);
  rep.trace.push_back(f);
  std::deque<std::pair<Vec, Vec>> mem;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (g.norm() <= opts.tol) {
      rep.converged = true;
      break;
    }
    // Two-loop recursion.
    Vec q = g;
    std::vector<double> alpha(mem.size());
    for (int k = static_cast<int>(mem.size()) - 1; k >= 0; --k) {
      const auto& [sk, yk] = mem[k];
      alpha[k] = sk.dot(q) / yk.dot(sk);
      q -= alpha[k] * yk;
    }
    double gamma = 1;
    if (!mem.empty()) gamma = mem.back().first.dot(mem.back().second) / mem.back().second.squaredNorm();
    else gamma = std::min(1.0, 1.0 / g.norm());
    Vec d = gamma * q;
    for (std::size_t k = 0; k < mem.size(); ++k) {
      const auto& [sk, yk] = mem[k];
      const double beta = yk.dot(d) / yk.dot(sk);
      d += (alpha[k] - beta) * sk;
    }
    d = -d;
    double gd = g.dot(d);
    if (!(gd < 0)) {
      mem.clear();
      d = -std::min(1.0, 1.0 / g.norm()) * g;
      gd = g.dot(d);
    }
    double step = 1;
    Vec zn;
    Masses mn;
    double fn = kInf;
    bool accepted = false;
    const double noise = 1e-13 * (1 + std::abs(f));
    for (int ls = 0; ls < 60; ++ls) {
      zn = z + step * d;
      fn = eval(zn, mn);
      if (fn <= f + 1e-4 * step * gd + noise) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Vec gn = gradient_from(target, mn);
    const Vec sk = zn - z, yk = gn - g;
    if (sk.dot(yk) > 1e-18 * sk.norm() * yk.norm()) {
      mem.emplace_back(sk, yk);
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }
    z = zn;
    f = fn;
    g = gn;
    m = mn;
    rep.trace.push_back(f);
  }
  if (!rep.converged && g.norm() <= opts.tol) rep.converged = true;
  rep.iterations = it;

  SolverState s = unpack(z, N, J);
  s.objective = f;
  s.gradient_norm = g.norm();
  s.iteration = it;

  // Normalize so that the integral equals M.
  rep.normalization_shift = std::log(m.total / M);
  for (auto& v : s.psi) v -= rep.normalization_shift;
  rep.alignment = Vec::Zero(n);
  if (n <= 2) {
    const PolyhedralIntegrals I = integrate_polyhedral(induced_polyhedral(s, target), n, true);
    const Vec b = I.moment / I.total;
    rep.alignment = b;
    for (std::size_t i = 0; i < N; ++i) s.psi[i] -= target.mu[i].x.dot(b);
    for (std::size_t j = 0; j < J; ++j) s.h[j] -= target.nu[j].theta.dot(b);
    const PolyhedralIntegrals F = integrate_polyhedral(induced_polyhedral(s, target), n);
    for (std::size_t i = 0; i < N; ++i) rep.max_mass_error = std::max(rep.max_mass_error, std::abs(F.cell[i] - target.mu[i].m));
    for (std::size_t j = 0; j < J; ++j)
      rep.max_mass_error = std::max(rep.max_mass_error, std::abs(F.facet[j] - target.nu[j].w));
  }
  rep.state = s;
  rep.phi = ConvexFunction{n, induced_polyhedral(s, target)};
  if (n <= 2) rep.residual = cosmic_distance(surface_measures_exact(LogConcaveDensity(rep.phi)).pair, target);
  return rep;
}

CoercivityDiagnostic coercivity_diagnostic(const SolverState& s, const MeasurePair& target) {
  check_state(s, target);
  const int n = target.dim;
  CoercivityDiagnostic out;
  const ConvexFunction phi0 = induced_function(s, target);
  const Minimum mn = minimize(phi0);
  const ConvexFunction phi = translate(phi0, -mn.x);
  const ConvexFunction conj = legendre(phi);
  double ints = 0;
  for (const auto& a : target.mu) ints += a.m * evaluate(conj, a.x);
  for (const auto& a : target.nu) ints += a.w * horizon(conj, a.theta).value;
  out.c = validate_pair(target).norm_floor;
  const double M = target.mu_mass();
  CounterRng rng(11, 0);
  std::uint64_t c = 0;
  out.min_slack = kInf;
  const int S = 1000;
  for (int k = 0; k < S; ++k) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x(d) = 2 * rng.uniform(c++) - 1;
    const double r = 20 * rng.uniform(c++);
    if (x.norm() > 0) x *= r / x.norm();
    const double v = evaluate(phi, x);
    ++out.samples;
    if (v == kInf) continue;
    const double bound = (out.c / 2 * x.norm() - ints) / M;
    out.min_slack = std::min(out.min_slack, v - bound);
  }
  out.holds = out.min_slack >= -1e-12;
  return out;
}

RecoveryResult recover_and_compare(const LogConcaveDensity& f, const SolveOptions& opts) {
  const SurfaceMeasures sm = surface_measures_exact(f);
  const SolveReport rep = solve(sm.pair, opts);
  const ConvexFunction orig = barycenter_aligned(f.phi());
  RecoveryResult out;
  out.recovered = rep.phi;
  out.residual = rep.residual;
  const EpiDistance d = epi_distance(orig, rep.phi);
  out.epi_distance = d.value;
  out.resolution = d.resolution;
  return out;
}

}  // namespace lcm
