#include "helpers.hpp"

#include "lcm/io.hpp"

using namespace lcm;
using namespace lcm::test;

namespace {

void check_same(const ConvexFunction& a, const ConvexFunction& b) {
  REQUIRE(a.dim == b.dim);
  for (int k = 0; k < 20; ++k) {
    Vec x(a.dim);
    for (int d = 0; d < a.dim; ++d) x(d) = 1.8 * std::sin(0.77 * k + 1.3 * d);
    CHECK(evaluate(a, x) == evaluate(b, x));
  }
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("infinities") {
    CHECK(io::real_to_json(kInf) == "inf");
    CHECK(io::real_from_json(io::json("inf")) == kInf);
    CHECK(io::real_from_json(io::json("-inf")) == -kInf);
    CHECK_THROWS_AS(io::real_from_json(io::json("nope")), std::invalid_argument);
  }

  TEST_CASE("function round trips") {
    const std::vector<ConvexFunction> fx = {
        fixtures::abs_1d(),
        fixtures::square_indicator(),
        fixtures::random_cone_box(3),
        fixtures::gaussian_2d(),
        make_cone(2, 1.5, 0, vec2(1, -1)),
        make_ball_indicator(2, 2),
        make_interval_indicator(-1, 3),
        make_polygon_indicator(make_regular_polygon(5, 1)),
        sample_to_grid(fixtures::gaussian_2d(), vec2(-1, -1), vec2(1, 1), 9),
    };
    for (const auto& phi : fx) {
      const io::json j = io::to_json(phi);
      check_same(phi, io::function_from_json(io::json::parse(io::dump(j))));
    }
  }

  TEST_CASE("function parsing") {
    const auto j = io::json::parse(R"({"kind":"indicator","set":"interval","vertices":[[-1],[1]]})");
    const ConvexFunction phi = io::function_from_json(j);
    CHECK(evaluate(phi, vec1(0.5)) == 0);
    CHECK(evaluate(phi, vec1(1.5)) == kInf);
    CHECK_THROWS_AS(io::function_from_json(io::json::parse(R"({"kind":"spline"})")), std::invalid_argument);
  }

  TEST_CASE("measure pair round trip") {
    const MeasurePair p = make_measure_pair(2, {{vec2(0.1, 0.2), 1.5}, {vec2(-3, 1), 0.25}}, {{vec2(0.6, 0.8), 2}});
    const MeasurePair q = io::pair_from_json(io::json::parse(io::dump(io::to_json(p))));
    CHECK(q.dim == 2);
    REQUIRE(q.mu.size() == 2);
    CHECK(q.mu[1].x(0) == -3);
    CHECK(q.mu[0].m == 1.5);
    REQUIRE(q.nu.size() == 1);
    CHECK(q.nu[0].theta(1) == 0.8);
  }

  TEST_CASE("doubles round trip exactly") {
    const double v = 0.1 + 0.2;
    CHECK(io::json::parse(io::dump(io::json(v))).get<double>() == v);
  }

  TEST_CASE("polygon round trip") {
    const Polygon P = make_regular_polygon(7, 1.3, Vec2(0.2, 0.1));
    const Polygon Q = io::polygon_from_json(io::to_json(P));
    CHECK(Q.area() == doctest::Approx(P.area()).epsilon(1e-15));
  }
}
