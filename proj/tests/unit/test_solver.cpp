#include "helpers.hpp"

#include "lcm/solver.hpp"
#include "lcm/surface.hpp"

using namespace lcm;
using namespace lcm::test;

namespace {

MeasurePair two_atoms() { return make_measure_pair(1, {{vec1(1), 1}, {vec1(-1), 1}}, {}); }

MeasurePair interval_target() {
  return make_measure_pair(1, {{vec1(0), 2}}, {{vec1(1), 1}, {vec1(-1), 1}});
}

MeasurePair square_target() {
  return make_measure_pair(2, {{vec2(0, 0), 4}},
                           {{vec2(1, 0), 2}, {vec2(-1, 0), 2}, {vec2(0, 1), 2}, {vec2(0, -1), 2}});
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("induced function") {
    const ConvexFunction phi = induced_function({{0, 0}, {}}, two_atoms());
    for (double x : {-2.0, 0.0, 0.7}) CHECK(evaluate(phi, vec1(x)) == doctest::Approx(std::abs(x)));
    const ConvexFunction ind = induced_function({{0}, {1, 1}}, interval_target());
    CHECK(evaluate(ind, vec1(0.9)) == doctest::Approx(0));
    CHECK(evaluate(ind, vec1(1.1)) == kInf);
  }

  TEST_CASE("objective") {
    CHECK(objective({{0, 0}, {}}, two_atoms()) == doctest::Approx(-2 * std::log(2.0)));
    CHECK(objective({{0}, {1, 1}}, interval_target()) == doctest::Approx(2 - 2 * std::log(2.0)));
    CHECK(objective({{0}, {-1, -1}}, interval_target()) == kInf);
  }

  TEST_CASE("objective invariance") {
    const MeasurePair t = square_target();
    const SolverState s{{0.3}, {1.1, 0.8, 1.4, 0.9}};
    const double g0 = objective(s, t);
    const Vec v = vec2(0.25, -0.4);
    SolverState m = s;
    m.psi[0] += t.mu[0].x.dot(v) + 0.7;
    for (std::size_t j = 0; j < t.nu.size(); ++j) m.h[j] += t.nu[j].theta.dot(v);
    CHECK(objective(m, t) == doctest::Approx(g0).epsilon(1e-12));
  }

  TEST_CASE("gradient") {
    const Gradient g = gradient({{0, 0}, {}}, two_atoms());
    CHECK(std::abs(g.dpsi[0]) < 1e-12);
    CHECK(std::abs(g.dpsi[1]) < 1e-12);

    const MeasurePair uneven = make_measure_pair(1, {{vec1(1), 2}, {vec1(-1), 1}}, {});
    const Gradient u = gradient({{0, 0}, {}}, uneven);
    CHECK(u.dpsi[0] == doctest::Approx(0.5));
    CHECK(u.dpsi[1] == doctest::Approx(-0.5));

    const MeasurePair three = make_measure_pair(1, {{vec1(-1), 1}, {vec1(0), 0.5}, {vec1(1), 1}}, {});
    const Gradient e = gradient({{0, 5, 0}, {}}, three);
    CHECK(e.dpsi[1] == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("gradient matches finite differences") {
    const MeasurePair t = square_target();
    const SolverState s{{0.2}, {1.1, 0.8, 1.4, 0.9}};
    const Gradient g = gradient(s, t);
    const double h = 1e-6;
    for (std::size_t j = 0; j < s.h.size(); ++j) {
      SolverState p = s, m = s;
      p.h[j] += h;
      m.h[j] -= h;
      CHECK((objective(p, t) - objective(m, t)) / (2 * h) == doctest::Approx(g.dh[j]).epsilon(1e-6));
    }
  }

  TEST_CASE("solve known targets") {
    const SolveReport a = solve(two_atoms());
    CHECK(a.converged);
    CHECK(a.residual <= 1e-8);
    for (double x : {-1.5, 0.0, 0.4}) CHECK(evaluate(a.phi, vec1(x)) == doctest::Approx(std::abs(x)).epsilon(1e-7));

    const SolveReport b = solve(interval_target());
    CHECK(b.converged);
    CHECK(b.residual <= 1e-8);
    CHECK(evaluate(b.phi, vec1(0.9)) == doctest::Approx(0).scale(1));
    CHECK(evaluate(b.phi, vec1(1.1)) == kInf);

    const SolveReport c = solve(square_target());
    CHECK(c.converged);
    CHECK(c.residual <= 1e-8);
    CHECK(integral(c.density()) == doctest::Approx(4).epsilon(1e-8));
  }

  TEST_CASE("solve rejects inadmissible targets") {
    CHECK_THROWS_AS(solve(make_measure_pair(2, {{vec2(1, 0), 1}}, {})), std::invalid_argument);
  }

  TEST_CASE("coercivity diagnostic") {
    const SolveReport a = solve(two_atoms());
    const CoercivityDiagnostic d = coercivity_diagnostic(a.state, two_atoms());
    CHECK(d.holds);
    CHECK(d.min_slack >= 0);
    CHECK(d.c == doctest::Approx(2));
    const SolveReport b = solve(interval_target());
    CHECK(coercivity_diagnostic(b.state, interval_target()).holds);

    const MeasurePair thin = make_measure_pair(
        2, {{vec2(1, 0), 1}, {vec2(-1, 0), 1}, {vec2(0, 1), 0.005}, {vec2(0, -1), 0.005}}, {});
    const CoercivityDiagnostic t = coercivity_diagnostic({{0, 0, 0, 0}, {}}, thin);
    CHECK(t.c == doctest::Approx(0.01));
    CHECK(t.c < d.c);
  }

  TEST_CASE("round-trip recovery") {
    const RecoveryResult a = recover_and_compare(LogConcaveDensity(fixtures::abs_1d()));
    CHECK(a.epi_distance <= 1e-6);
    const RecoveryResult b = recover_and_compare(LogConcaveDensity(fixtures::square_indicator()));
    CHECK(b.epi_distance <= 1e-6);
    const RecoveryResult c = recover_and_compare(LogConcaveDensity(fixtures::random_cone_box(2026)));
    CHECK(c.epi_distance <= 1e-5);
  }

  TEST_CASE("barycenter alignment") {
    Vec b;
    const ConvexFunction phi = barycenter_aligned(translate(fixtures::abs_1d(), vec1(3)), &b);
    CHECK(b(0) == doctest::Approx(3));
    CHECK(evaluate(phi, vec1(0.5)) == doctest::Approx(0.5));
  }

  TEST_CASE("close atoms are reported") {
    CHECK_FALSE(solve(two_atoms()).ill_conditioned);
    const MeasurePair close = make_measure_pair(1, {{vec1(1), 1}, {vec1(1 + 1e-7), 1}, {vec1(-1 - 5e-8), 2}}, {});
    SolveOptions o;
    o.max_iterations = 5;
    const SolveReport r = solve(close, o);
    CHECK(r.ill_conditioned);
    CHECK(r.min_atom_gap == doctest::Approx(1e-7).epsilon(1e-6));
  }
}
