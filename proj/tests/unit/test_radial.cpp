#include "helpers.hpp"

#include "lcm/radial.hpp"

using namespace lcm;
using namespace lcm::test;

TEST_SUITE("radial") {
  TEST_CASE("class membership") {
    CHECK(make_eps_class(fixtures::abs_1d(), 0.49).eps == 0.49);
    CHECK_THROWS(make_eps_class(fixtures::abs_1d(), 0.6));
    const EpsClassFunction t = make_eps_class(translate(fixtures::abs_1d(), vec1(5)));
    CHECK(t.shift(0) == doctest::Approx(5).epsilon(1e-6));
  }

  TEST_CASE("curvilinear radial function") {
    const EpsClassFunction g = make_eps_class(fixtures::gaussian_2d(), 0.9);
    CHECK(curvilinear_radial(g, vec2(0, 0)) == doctest::Approx(1).epsilon(1e-12));
    const EpsClassFunction a = make_eps_class(fixtures::abs_1d(), 0.49);
    CHECK(curvilinear_radial(a, vec1(kE)) == doctest::Approx(1 / kE).epsilon(1e-12));
    CHECK(curvilinear_radial(a, vec1(-kE)) == doctest::Approx(1 / kE).epsilon(1e-12));
    const EpsClassFunction i = make_eps_class(make_interval_indicator(-1, 1), 0.9);
    CHECK(curvilinear_radial(i, vec1(2)) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("boundary parametrization") {
    const EpsClassFunction g = make_eps_class(fixtures::gaussian_2d(), 0.9);
    const BoundaryPoint p = boundary_param(g, vec2(0, 0));
    CHECK(p.point.x.norm() < 1e-12);
    CHECK(p.point.t == doctest::Approx(0));
    CHECK(p.normal(2) == doctest::Approx(-1));

    const EpsClassFunction a = make_eps_class(fixtures::abs_1d(), 0.49);
    const BoundaryPoint q = boundary_param(a, vec1(kE));
    CHECK(q.point.x(0) == doctest::Approx(1));
    CHECK(q.point.t == doctest::Approx(1));
    CHECK(boundary_inverse(q.point)(0) == doctest::Approx(kE));

    const EpsClassFunction i = make_eps_class(make_interval_indicator(-1, 1), 0.9);
    const BoundaryPoint w = boundary_param(i, vec1(2));
    CHECK(w.wall);
    CHECK(w.normal(0) == doctest::Approx(1));
  }

  TEST_CASE("boundary bijection on a polyhedral cone") {
    const EpsClassFunction c = make_eps_class(fixtures::random_cone_box(2026));
    for (int k = 0; k < 1000; ++k) {
      const double r = 0.05 * k, a = 2.399963 * k;
      const Vec u = vec2(r * std::cos(a), r * std::sin(a));
      const BoundaryPoint p = boundary_param(c, u);
      CHECK((boundary_inverse(p.point) - u).norm() <= 1e-9 * (1 + u.norm()));
    }
  }

  TEST_CASE("radial gradient") {
    const EpsClassFunction g = make_eps_class(fixtures::gaussian_2d(), 0.9);
    const auto g0 = radial_gradient(g, vec2(0, 0));
    REQUIRE(g0.has_value());
    CHECK(g0->norm() < 1e-12);

    const EpsClassFunction a = make_eps_class(fixtures::abs_1d(), 0.49);
    const auto ga = radial_gradient(a, vec1(kE));
    REQUIRE(ga.has_value());
    CHECK((*ga)(0) == doctest::Approx(-1 / (2 * kE * kE)));

    const EpsClassFunction c = make_eps_class(fixtures::random_polyhedral(2, 4, true));
    const double h = 1e-6;
    for (int k = 1; k < 30; ++k) {
      const Vec u = vec2(1.3 * std::cos(0.9 * k) * k / 10, 1.3 * std::sin(0.9 * k) * k / 10);
      const auto gr = radial_gradient(c, u);
      if (!gr) continue;
      for (int d = 0; d < 2; ++d) {
        Vec e = Vec::Zero(2);
        e(d) = h;
        const double fd = (curvilinear_radial(c, u + e) - curvilinear_radial(c, u - e)) / (2 * h);
        CHECK(fd == doctest::Approx((*gr)(d)).epsilon(1e-6).scale(1));
      }
    }
  }

  TEST_CASE("boundary integrals reproduce surface pairings") {
    const EpsClassFunction a = make_eps_class(fixtures::abs_1d(), 0.49);
    CHECK(boundary_integral(a, constant_one()) == doctest::Approx(2).epsilon(1e-8));

    const TestFunction lin{"x", [](const Vec& x) { return x(0) / std::sqrt(1 + x.squaredNorm()); },
                           [](const Vec& t) { return t(0); }};
    CHECK(std::abs(boundary_integral(a, lin)) < 1e-9);

    const EpsClassFunction s = make_eps_class(fixtures::square_indicator(), 0.9);
    const TestFunction soft{"soft |x|", [](const Vec& x) { return std::sqrt(1 + x.squaredNorm()) - 1; },
                            [](const Vec&) { return 1.0; }};
    CHECK(boundary_integral(s, soft) == doctest::Approx(8).epsilon(1e-8));
  }

  TEST_CASE("radial bound") {
    const RadialBoundReport one = radial_bound_check(1, 0, {vec1(kE)});
    CHECK(one.C == doctest::Approx(1));
    CHECK(one.max_ratio == doctest::Approx(1 / std::log(1 + kE)).epsilon(1e-9));
    CHECK(one.holds);

    std::vector<Vec> us;
    for (int k = 1; k <= 1000; ++k) us.push_back(vec2(0.01 * k * std::cos(k), 0.01 * k * std::sin(k)));
    const RadialBoundReport two = radial_bound_check(2, 0, us);
    CHECK(two.C == doctest::Approx(1));
    CHECK(two.holds);
    CHECK(two.samples == us.size());
    const RadialBoundReport big = radial_bound_check(0.5, 5, us);
    CHECK(big.C == doctest::Approx(2));
    CHECK(big.holds);
  }

  TEST_CASE("radial functions converge along the example family") {
    const EpsClassFunction lim = make_eps_class(make_interval_indicator(-1, 1), 0.9);
    double prev = kInf;
    for (double k : {4.0, 16.0, 64.0}) {
      const EpsClassFunction fk = make_eps_class(fixtures::example_family(k), 0.9);
      double err = 0;
      for (double u = -6; u <= 6; u += 0.25)
        err = std::max(err, std::abs(curvilinear_radial(fk, vec1(u)) - curvilinear_radial(lim, vec1(u))));
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 0.01);
  }
}
