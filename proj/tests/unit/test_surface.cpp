#include "helpers.hpp"

#include "lcm/surface.hpp"

using namespace lcm;
using namespace lcm::test;

namespace {

double mass_at(const MeasurePair& p, const Vec& x) {
  double m = 0;
  for (const auto& a : p.mu)
    if ((a.x - x).norm() < 1e-9) m += a.m;
  return m;
}

double nu_at(const MeasurePair& p, const Vec& t) {
  double w = 0;
  for (const auto& a : p.nu)
    if ((a.theta - t).norm() < 1e-9) w += a.w;
  return w;
}

ConvexFunction l1_cone() {
  return make_polyhedral({vec2(1, 1), vec2(1, -1), vec2(-1, 1), vec2(-1, -1)}, {0, 0, 0, 0});
}

LogConcaveDensity ball() { return LogConcaveDensity(make_ball_indicator(2, 1)); }

}  // namespace

TEST_SUITE("surface") {
  TEST_CASE("exact measures of the square indicator") {
    const SurfaceMeasures s = surface_measures_exact(LogConcaveDensity(fixtures::square_indicator()));
    CHECK(s.provenance == Provenance::exact);
    CHECK(s.pair.mu.size() == 1);
    CHECK(mass_at(s.pair, vec2(0, 0)) == doctest::Approx(4));
    CHECK(s.pair.nu.size() == 4);
    for (const Vec& t : {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)})
      CHECK(nu_at(s.pair, t) == doctest::Approx(2));
  }

  TEST_CASE("exact measures of the l1 cone") {
    const LogConcaveDensity f(l1_cone());
    const SurfaceMeasures s = surface_measures_exact(f);
    CHECK(s.pair.mu.size() == 4);
    for (const auto& a : s.pair.mu) CHECK(a.m == doctest::Approx(1).epsilon(1e-9));
    CHECK(s.pair.mu_mass() == doctest::Approx(integral(f)));
    CHECK(s.pair.nu.empty());
  }

  TEST_CASE("exact measures of e^{-|x|} on the line") {
    const SurfaceMeasures s = surface_measures_exact(LogConcaveDensity(fixtures::abs_1d()));
    CHECK(mass_at(s.pair, vec1(1)) == doctest::Approx(1));
    CHECK(mass_at(s.pair, vec1(-1)) == doctest::Approx(1));
    CHECK(s.pair.mu.size() == 2);
    CHECK(s.pair.nu.empty());
  }

  TEST_CASE("exact measures of the example family") {
    for (double k : {1.0, 4.0, 64.0}) {
      const SurfaceMeasures s = surface_measures_exact(LogConcaveDensity(fixtures::example_family(k)));
      CHECK(mass_at(s.pair, vec1(0)) == doctest::Approx(2));
      CHECK(mass_at(s.pair, vec1(k)) == doctest::Approx(1 / k));
      CHECK(mass_at(s.pair, vec1(-k)) == doctest::Approx(1 / k));
    }
  }

  TEST_CASE("monte carlo measures of the Gaussian") {
    const SurfaceMeasures s = surface_measures_mc(LogConcaveDensity(fixtures::gaussian_2d()), 200000, 7);
    CHECK(s.provenance == Provenance::monte_carlo);
    CHECK(s.seed == 7);
    CHECK(std::abs(s.pair.mu_mass() - 2 * kPi) <= 3 * s.integral_stderr);
    double m2 = 0;
    for (const auto& a : s.pair.mu) m2 += a.m * a.x.squaredNorm();
    CHECK(m2 == doctest::Approx(4 * kPi).epsilon(0.03));

    const SurfaceMeasures r = surface_measures_mc(LogConcaveDensity(fixtures::gaussian_2d()), 200000, 7);
    CHECK(r.pair.mu_mass() == s.pair.mu_mass());
  }

  TEST_CASE("monte carlo measures of e^{-|x|} are uniform on the circle") {
    const SurfaceMeasures s = surface_measures_mc(LogConcaveDensity(fixtures::abs_2d()), 100000, 3);
    CHECK(std::abs(s.pair.mu_mass() - 2 * kPi) <= 3 * s.integral_stderr);
    std::vector<double> bins(8, 0);
    for (const auto& a : s.pair.mu) {
      CHECK(a.x.norm() == doctest::Approx(1));
      const double ang = std::atan2(a.x(1), a.x(0)) + kPi;
      bins[std::min(7, static_cast<int>(ang / (2 * kPi) * 8))] += a.m;
    }
    const double each = s.pair.mu_mass() / 8;
    for (double b : bins) CHECK(b == doctest::Approx(each).epsilon(0.05));
  }

  TEST_CASE("monte carlo mass of the square matches its area") {
    const SurfaceMeasures s = surface_measures_mc(LogConcaveDensity(fixtures::square_indicator()), 100000, 5);
    CHECK(std::abs(s.pair.mu_mass() - 4) <= 3 * s.integral_stderr);
    for (const auto& a : s.pair.mu) CHECK(a.x.norm() < 1e-12);
  }

  TEST_CASE("delta via measures") {
    const LogConcaveDensity sq(fixtures::square_indicator()), g(fixtures::gaussian_2d()), c(fixtures::abs_2d());
    CHECK(delta_via_measures(sq, sq) == doctest::Approx(8));
    CHECK(delta_via_measures(g, g) == doctest::Approx(2 * kPi).epsilon(1e-8));
    CHECK(delta_via_measures(c, ball()) == doctest::Approx(2 * kPi).epsilon(1e-8));
  }

  TEST_CASE("delta by difference quotients") {
    const LogConcaveDensity sq(fixtures::square_indicator()), g(fixtures::gaussian_2d());
    const DeltaNumeric d = delta_numeric(sq, sq, {}, true);
    CHECK(d.right.value == doctest::Approx(8).epsilon(1e-3 / 8));
    REQUIRE(d.left.has_value());
    CHECK(d.left->value == doctest::Approx(8).epsilon(1e-3 / 8));
    CHECK(delta_numeric(g, g).right.value == doctest::Approx(delta_via_measures(g, g)).epsilon(1e-6));
  }

  TEST_CASE("beta of the square") {
    const LogConcaveDensity sq(fixtures::square_indicator());
    // Dilation for t >= 0 and erosion for t < 0 share the closed form 4(1 + t)^2.
    for (double t : {-0.5, -0.1, 0.0, 0.3, 1.0}) CHECK(beta(sq, sq, t) == doctest::Approx(4 * (1 + t) * (1 + t)));
  }

  TEST_CASE("delta via level sets") {
    const LogConcaveDensity sq(fixtures::square_indicator());
    const Polygon K = make_box(Vec2(-1, -1), Vec2(1, 1));
    CHECK(delta_via_levelsets(sq, K) == doctest::Approx(8));
    CHECK(delta_via_levelsets(sq, make_point_polygon(Vec2(0, 0))) == doctest::Approx(0));
    CHECK(delta_via_levelsets(sq, make_segment_polygon(Vec2(-1, 0), Vec2(1, 0))) == doctest::Approx(4));
    const LogConcaveDensity rc(fixtures::random_cone_box(2026));
    CHECK(delta_via_levelsets(rc, K) == doctest::Approx(delta_via_measures(rc, sq)).epsilon(1e-6));
  }

  TEST_CASE("self-check identity") {
    const SelfCheck g = delta_self_check(LogConcaveDensity(fixtures::gaussian_2d()));
    CHECK(g.lhs == doctest::Approx(2 * kPi).epsilon(1e-8));
    CHECK(g.rhs == doctest::Approx(2 * kPi).epsilon(1e-8));
    const SelfCheck s = delta_self_check(LogConcaveDensity(fixtures::square_indicator()));
    CHECK(s.lhs == doctest::Approx(8));
    CHECK(s.rhs == doctest::Approx(8));
    const SelfCheck a = delta_self_check(LogConcaveDensity(fixtures::abs_1d()));
    CHECK(a.lhs == doctest::Approx(0));
    CHECK(std::abs(a.rhs) < 1e-10);
    CHECK(entropy_integral(LogConcaveDensity(fixtures::abs_1d())) == doctest::Approx(2));
  }

  TEST_CASE("isoperimetric ratios") {
    CHECK(isoperimetric_ratio(LogConcaveDensity(fixtures::abs_2d())).ratio ==
          doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-3));
    CHECK(isoperimetric_ratio(LogConcaveDensity(fixtures::gaussian_2d())).ratio == doctest::Approx(kPi).epsilon(1e-3));
    CHECK(isoperimetric_ratio(LogConcaveDensity(fixtures::square_indicator())).ratio ==
          doctest::Approx(4).epsilon(1e-3));
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      CHECK(isoperimetric_ratio(LogConcaveDensity(fixtures::random_cone_box(seed))).ratio >=
            std::sqrt(2 * kPi) * (1 - 1e-3));
  }

  TEST_CASE("indicator polygon") {
    const auto sq = indicator_polygon(fixtures::square_indicator());
    REQUIRE(sq.has_value());
    CHECK(sq->area() == doctest::Approx(4));
    CHECK(indicator_polygon(make_ball_indicator(2, 1))->size() == 128);
    CHECK_FALSE(indicator_polygon(fixtures::gaussian_2d()).has_value());
  }
}
