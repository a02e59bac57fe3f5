#include "helpers.hpp"

using namespace lcm;
using namespace lcm::test;

TEST_SUITE("convex_core") {
  TEST_CASE("evaluate") {
    CHECK(evaluate(make_cone(2, 1, 0), vec2(3, 4)) == doctest::Approx(5).epsilon(1e-15));
    CHECK(evaluate(fixtures::abs_1d(), vec1(2)) == 2);
    CHECK(evaluate(make_interval_indicator(-1, 1), vec1(2)) == kInf);
    CHECK_THROWS_AS(evaluate(fixtures::abs_1d(), vec2(1, 1)), DimensionError);
  }

  TEST_CASE("legendre closed forms") {
    const ConvexFunction q = legendre(gaussian_1d());
    for (double y : {-2.0, 0.0, 0.5, 3.0}) CHECK(evaluate(q, vec1(y)) == doctest::Approx(y * y / 2));

    const ConvexFunction b = legendre(make_cone(2, 1, 0));
    CHECK(evaluate(b, vec2(0.6, 0.7)) == doctest::Approx(0));
    CHECK(evaluate(b, vec2(0.8, 0.7)) == kInf);

    const ConvexFunction i = legendre(fixtures::abs_1d());
    CHECK(evaluate(i, vec1(0.3)) == doctest::Approx(0));
    CHECK(evaluate(i, vec1(-1)) == doctest::Approx(0));
    CHECK(evaluate(i, vec1(1.01)) == kInf);
  }

  TEST_CASE("biconjugation and Fenchel") {
    const std::vector<ConvexFunction> fx = {fixtures::abs_1d(), fixtures::example_family(3), gaussian_1d(),
                                            fixtures::random_polyhedral(1, 11, false),
                                            fixtures::random_polyhedral(2, 12, false), fixtures::abs_2d()};
    for (const auto& phi : fx) {
      const ConvexFunction s = legendre(phi);
      const ConvexFunction ss = legendre(s);
      for (int k = 0; k < 25; ++k) {
        Vec x = Vec::Zero(phi.dim), y = Vec::Zero(phi.dim);
        for (int d = 0; d < phi.dim; ++d) {
          x(d) = std::sin(1.7 * k + d) * 2.5;
          y(d) = std::cos(2.3 * k + 3 * d) * 0.6;
        }
        const double fv = evaluate(phi, x);
        CHECK(evaluate(ss, x) == doctest::Approx(fv).epsilon(1e-9));
        const double sy = evaluate(s, y);
        if (sy < kInf) CHECK(x.dot(y) <= fv + sy + 1e-12);
      }
    }
  }

  TEST_CASE("horizon") {
    CHECK(horizon(make_cone(2, 1, 0), vec2(0.6, 0.8)).value == doctest::Approx(1));
    CHECK(horizon(fixtures::gaussian_2d(), vec2(1, 0)).value == kInf);
    const ConvexFunction aff = make_polyhedral({vec2(2, -1)}, {-3});
    CHECK(horizon(aff, vec2(0.6, 0.8)).value == doctest::Approx(0.4));
    CHECK(horizon(make_interval_indicator(-1, 2), vec1(1)).value == kInf);
  }

  TEST_CASE("sup-convolution") {
    const LogConcaveDensity k(make_interval_indicator(0, 1)), l(make_interval_indicator(0, 2));
    const ConvexFunction kl = sup_convolution(k, l).phi();
    CHECK(evaluate(kl, vec1(2.9)) == doctest::Approx(0));
    CHECK(evaluate(kl, vec1(0)) == doctest::Approx(0));
    CHECK(evaluate(kl, vec1(3.1)) == kInf);
    CHECK(evaluate(kl, vec1(-0.1)) == kInf);

    const LogConcaveDensity g(gaussian_1d());
    const ConvexFunction gg = sup_convolution(g, g).phi();
    for (double x : {-3.0, 0.0, 1.0, 2.0}) CHECK(evaluate(gg, vec1(x)) == doctest::Approx(x * x / 4));

    const LogConcaveDensity f(fixtures::example_family(2));
    const ConvexFunction fd = sup_convolution(f, LogConcaveDensity(make_point_indicator(vec1(0)))).phi();
    for (double x : {-2.0, -0.5, 0.3, 1.7}) CHECK(evaluate(fd, vec1(x)) == doctest::Approx(evaluate(f.phi(), vec1(x))));
  }

  TEST_CASE("dilate") {
    const LogConcaveDensity g(gaussian_1d());
    CHECK(evaluate(dilate(1, g).phi(), vec1(1.3)) == doctest::Approx(1.3 * 1.3 / 2));
    CHECK(evaluate(dilate(2, g).phi(), vec1(2)) == doctest::Approx(1));
    const ConvexFunction k2 = dilate(2, LogConcaveDensity(make_interval_indicator(-1, 1))).phi();
    CHECK(evaluate(k2, vec1(1.9)) == doctest::Approx(0));
    CHECK(evaluate(k2, vec1(2.1)) == kInf);
    CHECK_THROWS(dilate(0, g));
  }

  TEST_CASE("support function") {
    const ConvexFunction h1 = support_function(LogConcaveDensity(fixtures::interval_indicator()));
    CHECK(evaluate(h1, vec1(-2.5)) == doctest::Approx(2.5));
    const ConvexFunction h2 = support_function(LogConcaveDensity(fixtures::gaussian_2d()));
    CHECK(evaluate(h2, vec2(1, 2)) == doctest::Approx(2.5));
    const ConvexFunction h3 = support_function(LogConcaveDensity(fixtures::abs_1d()));
    CHECK(evaluate(h3, vec1(0.9)) == doctest::Approx(0));
    CHECK(evaluate(h3, vec1(1.1)) == kInf);
  }

  TEST_CASE("support additivity") {
    auto check = [](const LogConcaveDensity& f, const LogConcaveDensity& g, double tol) {
      const double lam = 0.7, mu = 1.6;
      const ConvexFunction h = support_function(sup_convolution(dilate(lam, f), dilate(mu, g)));
      const ConvexFunction hf = support_function(f), hg = support_function(g);
      for (double y : {-0.4, 0.0, 0.3, 0.8}) {
        const double want = sat_add(lam * evaluate(hf, vec1(y)), mu * evaluate(hg, vec1(y)));
        if (want < kInf) CHECK(std::abs(evaluate(h, vec1(y)) - want) <= tol);
      }
    };
    const LogConcaveDensity p(fixtures::random_polyhedral(1, 3, false)), q(fixtures::example_family(2));
    check(p, q, 1e-9);
    // Mixed representations go through a grid.
    check(p, LogConcaveDensity(gaussian_1d()), 1e-4);
  }

  TEST_CASE("horizon of the support function of an indicator") {
    const ConvexFunction h = support_function(LogConcaveDensity(fixtures::square_indicator()));
    for (double a : {0.0, 0.4, 1.3, 2.9}) {
      const Vec th = vec2(std::cos(a), std::sin(a));
      CHECK(horizon(h, th).value == doctest::Approx(std::abs(th(0)) + std::abs(th(1))));
    }
  }

  TEST_CASE("epi_contains") {
    double m = -1;
    CHECK(epi_contains(fixtures::abs_1d(), {vec1(1), 1}, &m));
    CHECK(m == doctest::Approx(0));
    CHECK_FALSE(epi_contains(fixtures::abs_1d(), {vec1(0), -1}));
    CHECK_FALSE(epi_contains(make_interval_indicator(-1, 1), {vec1(2), 1e6}));
  }

  TEST_CASE("epi_distance") {
    const ConvexFunction a = fixtures::abs_1d();
    CHECK(epi_distance(a, a).value == doctest::Approx(0));
    const ConvexFunction b = add_affine(a, vec1(0), 1);
    CHECK(epi_distance(a, b, {2}).value == doctest::Approx(0.25).epsilon(1e-3));
    CHECK_THROWS(epi_distance(a, b, {}));

    const ConvexFunction lim = make_interval_indicator(-1, 1);
    double prev = kInf;
    for (double k : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double d = epi_distance(fixtures::example_family(k), lim).value;
      CHECK(d < prev);
      prev = d;
    }
  }

  TEST_CASE("epi_distance is a pseudometric") {
    const std::vector<ConvexFunction> fx = {fixtures::abs_1d(), add_affine(fixtures::abs_1d(), vec1(0.3), 0.2),
                                            fixtures::example_family(2), make_interval_indicator(-1, 1)};
    for (const auto& p : fx)
      for (const auto& q : fx) {
        const double pq = epi_distance(p, q).value;
        CHECK(pq == doctest::Approx(epi_distance(q, p).value).epsilon(1e-9));
        for (const auto& r : fx) {
          const auto pr = epi_distance(p, r), rq = epi_distance(r, q);
          CHECK(pq <= pr.value + rq.value + pr.resolution + rq.resolution);
        }
      }
  }

  TEST_CASE("translate_to_eps_class") {
    struct Case {
      ConvexFunction phi;
      double v;
      double eps_max;
    };
    const std::vector<Case> cases = {{gaussian_1d(), 0, 1.0},
                                     {fixtures::abs_1d(), 0, 0.5},
                                     {translate(fixtures::abs_1d(), vec1(5)), 5, 0.5}};
    for (const auto& c : cases) {
      const EpsTranslation t = translate_to_eps_class(c.phi);
      CHECK(t.v(0) == doctest::Approx(c.v).epsilon(1e-6));
      CHECK(t.eps > 0);
      CHECK(t.eps < c.eps_max);
      const double mn = minimize(t.translated).value;
      CHECK(sampled_ball_sup(t.translated, Vec::Zero(1), t.eps, 5000) < mn + 0.5);
    }
  }

  TEST_CASE("integral") {
    CHECK(integral(LogConcaveDensity(fixtures::gaussian_2d())) == doctest::Approx(2 * kPi).epsilon(1e-9));
    CHECK(integral(LogConcaveDensity(fixtures::abs_2d())) == doctest::Approx(2 * kPi).epsilon(1e-9));
    CHECK(integral(LogConcaveDensity(fixtures::square_indicator())) == doctest::Approx(4).epsilon(1e-12));
    CHECK(integral(LogConcaveDensity(fixtures::abs_1d())) == doctest::Approx(2).epsilon(1e-12));
    const ConvexFunction rc = fixtures::random_cone_box(2026);
    CHECK(integral(LogConcaveDensity(rc)) == doctest::Approx(integral_uncached(rc)));
  }

  TEST_CASE("coercivity witness bounds phi") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const ConvexFunction phi = fixtures::random_polyhedral(2, seed, seed % 2 == 0);
      const CoercivityWitness w = coercivity_witness(phi);
      CHECK(w.a > 0);
      for (int k = 0; k < 40; ++k) {
        const Vec x = vec2(7 * std::sin(1.1 * k), 7 * std::cos(0.7 * k));
        CHECK(evaluate(phi, x) >= w.a * x.norm() + w.b - 1e-12);
      }
    }
  }
}
