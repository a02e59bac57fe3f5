#include "helpers.hpp"

using namespace lcm;
using namespace lcm::test;

namespace {

MeasurePair pair1(std::vector<std::pair<double, double>> mu, std::vector<std::pair<double, double>> nu = {}) {
  std::vector<MuAtom> m;
  std::vector<NuAtom> n;
  for (auto [x, w] : mu) m.push_back({vec1(x), w});
  for (auto [t, w] : nu) n.push_back({vec1(t), w});
  return make_measure_pair(1, m, n);
}

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("measure pair construction") {
    const MeasurePair p = pair1({{1, 0.5}, {1, 0.25}, {-1, 1}});
    CHECK(p.mu.size() == 2);
    CHECK(p.mu_mass() == doctest::Approx(1.75));
    CHECK_THROWS(pair1({{1, -1}}));
    CHECK_THROWS(make_measure_pair(2, {}, {{vec2(1, 1), 1}}));
  }

  TEST_CASE("gnomonic") {
    const Vec s = gnomonic(vec2(0, 0));
    CHECK(s(0) == 0);
    CHECK(s(2) == doctest::Approx(-1));
    const Vec g = gnomonic(vec1(1));
    CHECK(g(0) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(g(1) == doctest::Approx(-1 / std::sqrt(2.0)));
    const Vec far = gnomonic(vec2(0.6e9, 0.8e9));
    CHECK(far(0) == doctest::Approx(0.6));
    CHECK(far(1) == doctest::Approx(0.8));
    CHECK(std::abs(far(2)) < 1e-8);
    const Vec x = vec2(-3.5, 0.25);
    CHECK((inverse_gnomonic(gnomonic(x)) - x).norm() < 1e-12);
  }

  TEST_CASE("hat embedding") {
    const HemisphereMeasure a = hat_embed(pair1({{0, 1}}));
    REQUIRE(a.atoms.size() == 1);
    CHECK(a.atoms[0].p(1) == doctest::Approx(-1));
    CHECK(a.atoms[0].mass == doctest::Approx(1));

    const double k = 8;
    const HemisphereMeasure b = hat_embed(pair1({{k, 1 / k}}));
    CHECK(b.atoms[0].p(0) == doctest::Approx(k / std::sqrt(1 + k * k)));
    CHECK(b.atoms[0].mass == doctest::Approx(std::sqrt(1 + k * k) / k));

    const HemisphereMeasure c = hat_embed(make_measure_pair(2, {}, {{vec2(1, 0), 2}}));
    CHECK(c.atoms[0].p(0) == doctest::Approx(1));
    CHECK(c.atoms[0].p(2) == 0);
    CHECK(c.atoms[0].mass == doctest::Approx(2));
  }

  TEST_CASE("hat embedding preserves dictionary pairings") {
    const MeasurePair p = make_measure_pair(2, {{vec2(0.5, -1), 0.7}, {vec2(-2, 3), 1.1}, {vec2(0, 0), 0.4}},
                                            {{vec2(0.6, 0.8), 0.9}, {vec2(-1, 0), 0.3}});
    const HemisphereMeasure h = hat_embed(p);
    for (const auto& xi : standard_dictionary(2)) {
      double hv = 0;
      for (const auto& a : h.atoms) hv += a.mass * xi.hat(a.p);
      CHECK(hv == doctest::Approx(pairing(p, xi)).epsilon(1e-12));
    }
    CHECK(standard_dictionary(3).size() == 2 + 4 * 3 + 8);
  }

  TEST_CASE("validate pair") {
    const ValidationReport a = validate_pair(pair1({{1, 1}, {-1, 1}}));
    CHECK(a.valid());
    CHECK(a.centering_defect == doctest::Approx(0));
    CHECK(a.norm_floor == doctest::Approx(2));

    const ValidationReport b = validate_pair(pair1({{0, 2}}, {{1, 1}, {-1, 1}}));
    CHECK(b.valid());
    CHECK(b.centering_defect == doctest::Approx(0));
    CHECK(b.norm_floor == doctest::Approx(2));

    const ValidationReport c = validate_pair(make_measure_pair(2, {{vec2(1, 0), 1}}, {}));
    CHECK_FALSE(c.valid());
    CHECK_FALSE(c.centered);
    CHECK_FALSE(c.spans);
    CHECK(c.centering_defect == doctest::Approx(1));
    CHECK(c.norm_floor == doctest::Approx(0).epsilon(1e-9));
    CHECK_FALSE(c.failure().empty());

    CHECK_FALSE(validate_pair(make_measure_pair(1, {}, {{vec1(1), 1}, {vec1(-1), 1}})).mu_nonzero);
  }

  TEST_CASE("cosmic distance") {
    const MeasurePair a = pair1({{0, 1}});
    CHECK(cosmic_distance(a, a) == doctest::Approx(0));
    CHECK(cosmic_distance(a, pair1({{0, 2}})) == doctest::Approx(1));

    const MeasurePair lim = pair1({{0, 2}}, {{1, 1}, {-1, 1}});
    double prev = kInf;
    for (double k : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
      const double d = cosmic_distance(fixtures::example_family_measures(k), lim);
      CHECK(d < prev);
      CHECK(d * k <= 3);
      prev = d;
    }
  }

  TEST_CASE("wasserstein on the sphere") {
    const std::vector<Vec> pts = {vec2(1, 0), vec2(0, 1)};
    CHECK(wasserstein1(pts, {1, 1}, pts, {2, 2}) == doctest::Approx(0));
    CHECK(wasserstein1({vec2(1, 0)}, {1}, {vec2(0, 1)}, {1}) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("dictionary discrepancy") {
    const MeasurePair a = pair1({{1, 1}, {-1, 1}}), b = pair1({{1, 2}, {-1, 0.5}});
    const std::vector<TestFunction> one = {constant_one()};
    CHECK(dictionary_discrepancy(a, b, one) == doctest::Approx(0.5));
    const TestFunction lin{"x", [](const Vec& x) { return x(0); }, [](const Vec& t) { return t(0); }};
    CHECK(dictionary_discrepancy(a, b, {lin}) == doctest::Approx(1.5));

    const TestFunction absx{"|x|", [](const Vec& x) { return std::abs(x(0)); }, [](const Vec&) { return 1.0; }};
    const MeasurePair lim = pair1({{0, 2}}, {{1, 1}, {-1, 1}});
    for (double k : {2.0, 16.0}) CHECK(pairing(fixtures::example_family_measures(k), absx) ==
                                       doctest::Approx(pairing(lim, absx)));
  }
}
