#include "lcm/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "lcm/fixtures.hpp"
#include "lcm/radial.hpp"
#include "lcm/rng.hpp"
#include "lcm/solver.hpp"
#include "lcm/surface.hpp"

namespace lcm {

namespace {

constexpr double kPi = std::numbers::pi;

struct Out {
  bool ok = true;
  std::ostringstream msg;
  Out() { msg << std::setprecision(4); }
  void check(bool cond) { ok = ok && cond; }
};

// 1: exact measures -> solve -> aligned comparison.
void round_trip(Out& o) {
  const std::vector<std::pair<const char*, ConvexFunction>> cases = {
      {"abs1d", fixtures::abs_1d()},
      {"interval", fixtures::interval_indicator()},
      {"square", fixtures::square_indicator()},
      {"cone6", fixtures::random_cone_box(2026)}};
  for (const auto& [name, phi] : cases) {
    const RecoveryResult r = recover_and_compare(LogConcaveDensity(phi));
    o.check(r.epi_distance <= 1e-5 && r.residual <= 1e-8);
    o.msg << name << ": epi " << r.epi_distance << " res " << r.residual << "; ";
  }
}

// 2: measure pairing against Richardson quotients.
void representation(Out& o) {
  struct Case {
    const char* name;
    ConvexFunction f, g;
    double expect;
  };
  const std::vector<Case> cases = {
      {"gauss", fixtures::gaussian_2d(), fixtures::gaussian_2d(), 2 * kPi},
      {"square", fixtures::square_indicator(), fixtures::square_indicator(), 8},
      {"cone-ball", fixtures::abs_2d(), make_ball_indicator(2, 1), 2 * kPi}};
  for (const auto& c : cases) {
    const LogConcaveDensity f(c.f), g(c.g);
    const double dm = delta_via_measures(f, g);
    const DeltaNumeric dn = delta_numeric(f, g);
    const double tol = std::max(1e-3, dn.right.error);
    o.check(std::abs(dm - dn.right.value) <= tol && std::abs(dm - c.expect) <= tol);
    o.msg << c.name << ": " << std::setprecision(8) << dm << " vs " << dn.right.value << std::setprecision(4)
          << " (+-" << dn.right.error << "); ";
  }
}

// 3: delta(f, f) = n int f + int f log f.
void self_check(Out& o) {
  const std::vector<std::pair<const char*, ConvexFunction>> cases = {
      {"gauss", fixtures::gaussian_2d()}, {"square", fixtures::square_indicator()}, {"abs1d", fixtures::abs_1d()}};
  for (const auto& [name, phi] : cases) {
    const SelfCheck s = delta_self_check(LogConcaveDensity(phi));
    o.check(std::abs(s.lhs - s.rhs) <= 1e-6);
    o.msg << name << ": " << std::setprecision(10) << s.lhs << " / " << s.rhs << std::setprecision(4) << "; ";
  }
}

// 4: one-sided quotients of beta for the square.
void two_sided(Out& o) {
  const LogConcaveDensity f(fixtures::square_indicator());
  const double h = 1e-4;
  const double b0 = beta(f, f, 0), bp = beta(f, f, h), bm = beta(f, f, -h);
  const double right = (bp - b0) / h, left = (b0 - bm) / h;
  const DeltaNumeric dn = delta_numeric(f, f, {}, true);
  o.check(dn.left.has_value());
  const double le = dn.left ? dn.left->value : kInf;
  o.check(std::abs(right - left) <= 1e-3);
  o.check(std::abs(dn.right.value - 8) <= 1e-3 && std::abs(le - 8) <= 1e-3);
  double min_d2 = kInf;
  const double dt = 0.05;
  for (double t = -0.5 + dt; t <= 1 - dt + 1e-12; t += dt)
    min_d2 = std::min(min_d2, beta(f, f, t - dt) - 2 * beta(f, f, t) + beta(f, f, t + dt));
  o.check(min_d2 >= -1e-9);
  o.msg << std::setprecision(8) << "raw right " << right << " left " << left << "; extrapolated " << dn.right.value
        << " / " << le << std::setprecision(4) << "; min second difference " << min_d2;
}

std::vector<std::pair<std::string, ConvexFunction>> pipeline_fixtures() {
  std::vector<std::pair<std::string, ConvexFunction>> v = {
      {"abs1d", fixtures::abs_1d()},
      {"interval", fixtures::interval_indicator()},
      {"family2", fixtures::example_family(2)},
      {"rand1d", fixtures::random_polyhedral(1, 5, true)},
      {"square", fixtures::square_indicator()},
      {"cone6", fixtures::random_cone_box(2026)},
      {"rand2d-free", fixtures::random_polyhedral(2, 7, false)},
      {"rand2d-dom", fixtures::random_polyhedral(2, 8, true)}};
  return v;
}

// 5: boundary integral vs atom sums.
void pipeline(Out& o) {
  double worst = 0;
  for (const auto& [name, phi] : pipeline_fixtures()) {
    const LogConcaveDensity f(phi);
    const MeasurePair mp = surface_measures_exact(f).pair;
    const auto dict = standard_dictionary(phi.dim);
    const EpsClassFunction E = make_eps_class(phi);
    const BoundaryIntegral bi = boundary_integral(E, dict);
    double err = 0;
    for (std::size_t k = 0; k < dict.size(); ++k) {
      const double ref = pairing(mp, dict[k]);
      err = std::max(err, std::abs(bi.values[k] - ref) / std::max(1.0, std::abs(ref)));
    }
    worst = std::max(worst, err);
    o.check(err <= 1e-4);
    o.msg << name << " " << err << "; ";
  }
  o.msg << "worst " << worst;
}

// 6: example family in the cosmic metric.
void cosmic(Out& o) {
  const MeasurePair limit = make_measure_pair(1, {{vec1(0), 2}}, {{vec1(1), 1}, {vec1(-1), 1}});
  double prev = kInf, last = 0, cross = 0;
  bool mono = true;
  for (int k = 1; k <= 64; k *= 2) {
    const MeasurePair closed = fixtures::example_family_measures(k);
    const MeasurePair exact = surface_measures_exact(LogConcaveDensity(fixtures::example_family(k))).pair;
    cross = std::max(cross, cosmic_distance(closed, exact));
    const double d = cosmic_distance(closed, limit);
    mono = mono && d < prev;
    prev = last = d;
    o.msg << "k=" << k << " " << d << "; ";
  }
  o.check(mono);
  o.check(cross <= 1e-10);
  o.check(last <= 1e-2);
  o.msg << (mono ? "monotone" : "NOT monotone") << ", closed-vs-exact " << cross;
}

// 7: multiplicative perturbation of the square target.
void data_continuity(Out& o) {
  const MeasurePair base = surface_measures_exact(LogConcaveDensity(fixtures::square_indicator())).pair;
  const SolveReport ref = solve(base);
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    MeasurePair p = base;
    for (auto& a : p.mu) a.m *= 1 + delta;
    // The mu atom and both e1 facets; the pair stays centered by symmetry.
    for (auto& a : p.nu)
      if (std::abs(a.theta(0)) > 0.5) a.w *= 1 + delta;
    const SolveReport r = solve(p);
    const double d = epi_distance(ref.phi, r.phi).value;
    o.check(r.converged && d <= 5 * delta);
    o.msg << "delta " << delta << ": " << d << "; ";
  }
}

// 8: isoperimetric ratio.
void isoperimetric(Out& o) {
  const double c = std::sqrt(2 * kPi);
  double worst = kInf;
  for (int s = 0; s < 20; ++s) {
    const IsoperimetricRatio r =
        isoperimetric_ratio(LogConcaveDensity(fixtures::random_polyhedral(2, 1000 + s, s % 2 == 0)));
    worst = std::min(worst, r.ratio);
  }
  o.check(worst >= c - 1e-2);
  const IsoperimetricRatio e = isoperimetric_ratio(LogConcaveDensity(fixtures::abs_2d()));
  o.check(std::abs(e.ratio - c) <= 1e-2);
  o.msg << "min ratio " << worst << " (bound " << c << "); e^{-|x|}: " << std::setprecision(8) << e.ratio;
}

// 9: radial function suite.
void radial_suite(Out& o) {
  CounterRng rng(99, 0);
  std::uint64_t ctr = 0;
  auto U = [&](double a, double b) { return a + (b - a) * rng.uniform(ctr++); };
  double inv_err = 0, fg_err = 0, normal_slack = kInf, fd_err = 0;
  int fd_count = 0;
  for (const auto& [name, phi] : pipeline_fixtures()) {
    const EpsClassFunction E = make_eps_class(phi);
    const int n = phi.dim;
    const double floor = std::min(E.eps, 0.5);
    for (int k = 0; k < 1000; ++k) {
      Vec u(n);
      for (int d = 0; d < n; ++d) u(d) = U(-1, 1);
      u *= std::exp(U(-3, 3));
      const BoundaryPoint bp = boundary_param(E, u);
      inv_err = std::max(inv_err, (boundary_inverse(bp.point) - u).norm() / std::max(1.0, u.norm()));
      Vec xm(n + 1);
      xm.head(n) = bp.point.x;
      xm(n) = -1;
      normal_slack = std::min(normal_slack, xm.dot(bp.normal) - floor);
      if (k % 10 == 0 && bp.normal_unique) {
        const Vec g = *radial_gradient(E, u);
        const double h = 1e-5 * (1 + u.norm());
        Vec fd(n);
        bool clean = true;
        for (int d = 0; d < n; ++d) {
          Vec e = Vec::Zero(n);
          e(d) = h;
          const BoundaryPoint a = boundary_param(E, u + e), b = boundary_param(E, u - e);
          clean = clean && a.face == bp.face && b.face == bp.face && a.wall == bp.wall && b.wall == bp.wall;
          fd(d) = (a.s - b.s) / (2 * h);
        }
        if (clean) {
          fd_err = std::max(fd_err, (fd - g).norm() / std::max(g.norm(), 1e-9));
          ++fd_count;
        }
      }
    }
    // F(G(p)) = p on boundary samples.
    for (int k = 0; k < 200; ++k) {
      Vec x(n);
      for (int d = 0; d < n; ++d) x(d) = U(-1.5, 1.5);
      const double v = evaluate(E.phi, x);
      if (v == kInf) continue;
      const EpiPoint p{x, v};
      const BoundaryPoint bp = boundary_param(E, boundary_inverse(p));
      fg_err = std::max(fg_err, (bp.point.x - x).norm() + std::abs(bp.point.t - v));
    }
  }
  o.check(inv_err <= 1e-9 && fg_err <= 1e-9);
  o.check(normal_slack >= -1e-12);
  o.check(fd_err <= 1e-6 && fd_count > 0);
  o.msg << "G(F(u)) err " << inv_err << ", F(G(p)) err " << fg_err << ", normal slack " << normal_slack << ", FD err "
        << fd_err << " (" << fd_count << " points); ";

  // Radial bound on a 10^3-point grid.
  std::vector<Vec> us;
  for (int i = 0; i < 1000; ++i) us.push_back(vec1(std::exp(-5 + 15.0 * i / 999)));
  bool bound_ok = true;
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 0}, {2, 0}, {0.5, 0}, {1, 5}, {3, -1}}) {
    const RadialBoundReport r = radial_bound_check(a, b, us);
    bound_ok = bound_ok && r.holds;
    o.msg << "(" << a << "," << b << ") " << r.max_ratio << "<=" << r.C << " ";
  }
  o.check(bound_ok);

  // s_{phi_k} -> s_phi on the example family.
  const EpsClassFunction lim = make_eps_class(fixtures::interval_indicator(), 0.4);
  double prev = kInf, last = 0;
  bool mono = true;
  for (int k = 1; k <= 64; k *= 2) {
    const EpsClassFunction Ek = make_eps_class(fixtures::example_family(k), 0.4);
    double e = 0;
    for (int i = 0; i <= 100; ++i) {
      const Vec u = vec1(-5 + 0.1 * i);
      e = std::max(e, std::abs(curvilinear_radial(Ek, u) - curvilinear_radial(lim, u)));
    }
    mono = mono && e <= prev;
    prev = last = e;
  }
  o.check(mono && last <= 1e-2);
  o.msg << "; family sup|s_k - s| at k=64: " << last;
}

// 10: necessary conditions on exact measures.
void admissibility(Out& o) {
  double worst_defect = 0, min_floor = kInf;
  int bad = 0;
  for (int s = 0; s < 50; ++s) {
    const int dim = s % 3 == 0 ? 1 : 2;
    const ConvexFunction phi = fixtures::random_polyhedral(dim, 500 + s, s % 2 == 1);
    const MeasurePair mp = surface_measures_exact(LogConcaveDensity(phi)).pair;
    const ValidationReport r = validate_pair(mp);
    worst_defect = std::max(worst_defect, r.centering_defect);
    min_floor = std::min(min_floor, r.norm_floor);
    if (!r.valid() || r.centering_defect > 1e-8 || !(r.norm_floor > 0)) ++bad;
  }
  o.check(bad == 0);
  o.msg << "failures " << bad << "/50, worst centering defect " << worst_defect << ", min norm floor " << min_floor;
}

// 11: convexity of the objective and its gradient.
void solver_checks(Out& o) {
  const std::vector<MeasurePair> targets = {
      surface_measures_exact(LogConcaveDensity(fixtures::random_cone_box(2026))).pair,
      surface_measures_exact(LogConcaveDensity(fixtures::square_indicator())).pair,
      surface_measures_exact(LogConcaveDensity(fixtures::random_polyhedral(1, 3, true))).pair};
  CounterRng rng(5, 0);
  std::uint64_t ctr = 0;
  auto U = [&](double a, double b) { return a + (b - a) * rng.uniform(ctr++); };
  auto random_state = [&](const MeasurePair& t) {
    SolverState s;
    double ymax = 0;
    for (const auto& a : t.mu) {
      s.psi.push_back(0.5 * a.x.squaredNorm() + U(-0.3, 0.3));
      ymax = std::max(ymax, a.x.norm());
    }
    for (std::size_t j = 0; j < t.nu.size(); ++j) s.h.push_back(U(0.5, 1.5) + ymax * U(0, 1));
    return s;
  };
  double min_d2 = kInf;
  for (int k = 0; k < 1000; ++k) {
    const MeasurePair& t = targets[k % targets.size()];
    SolverState s = random_state(t);
    SolverState a = s, b = s;
    const double tau = 0.05;
    for (std::size_t i = 0; i < s.psi.size(); ++i) {
      const double d = U(-1, 1);
      a.psi[i] -= tau * d;
      b.psi[i] += tau * d;
    }
    for (std::size_t j = 0; j < s.h.size(); ++j) {
      const double d = U(-1, 1);
      a.h[j] -= tau * d;
      b.h[j] += tau * d;
    }
    const double ga = objective(a, t), g0 = objective(s, t), gb = objective(b, t);
    if (!(ga < kInf && g0 < kInf && gb < kInf)) continue;
    min_d2 = std::min(min_d2, ga - 2 * g0 + gb);
  }
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const MeasurePair& t = targets[k % targets.size()];
    const SolverState s = random_state(t);
    const Gradient g = gradient(s, t);
    double num = 0, den = 0;
    const double h = 1e-5;
    for (std::size_t i = 0; i < s.psi.size(); ++i) {
      SolverState a = s, b = s;
      a.psi[i] += h;
      b.psi[i] -= h;
      const double fd = (objective(a, t) - objective(b, t)) / (2 * h);
      num += (fd - g.dpsi[i]) * (fd - g.dpsi[i]);
      den += g.dpsi[i] * g.dpsi[i];
    }
    for (std::size_t j = 0; j < s.h.size(); ++j) {
      SolverState a = s, b = s;
      a.h[j] += h;
      b.h[j] -= h;
      const double fd = (objective(a, t) - objective(b, t)) / (2 * h);
      num += (fd - g.dh[j]) * (fd - g.dh[j]);
      den += g.dh[j] * g.dh[j];
    }
    worst = std::max(worst, std::sqrt(num) / std::max(std::sqrt(den), 1e-12));
  }
  o.check(min_d2 >= -1e-9 && worst <= 1e-6);
  o.msg << "min second difference " << min_d2 << ", worst gradient relative error " << worst;
}

struct Entry {
  const char* title;
  std::function<void(Out&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {"round-trip Minkowski recovery", round_trip},
      {"measure pairing equals numeric first variation", representation},
      {"delta(f,f) identity", self_check},
      {"two-sided derivative of beta", two_sided},
      {"boundary-integral pipeline", pipeline},
      {"cosmic continuity on the example family", cosmic},
      {"data continuity of the solution", data_continuity},
      {"isoperimetric inequality", isoperimetric},
      {"curvilinear radial function suite", radial_suite},
      {"admissibility of exact measures", admissibility},
      {"solver convexity and gradient", solver_checks}};
  return e;
}

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("run_criterion: no criterion " + std::to_string(id));
  const Entry& e = entries()[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  const auto t0 = std::chrono::steady_clock::now();
  Out o;
  try {
    e.run(o);
    r.passed = o.ok;
    r.detail = o.msg.str();
  } catch (const std::exception& ex) {
    r.passed = false;
    r.detail = o.msg.str() + "error: " + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i));
  } else {
    for (int i : ids) out.push_back(run_criterion(i));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.title << "  [" << std::fixed
    << std::setprecision(1) << r.seconds << "s]  " << r.detail;
  return s.str();
}

}  // namespace lcm
