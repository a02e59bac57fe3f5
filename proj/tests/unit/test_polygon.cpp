#include "helpers.hpp"

#include "lcm/cells.hpp"
#include "lcm/polygon.hpp"

using namespace lcm;
using namespace lcm::test;

namespace {

const Polygon kSquare = make_box(Vec2(-1, -1), Vec2(1, 1));

std::vector<Halfplane> axis_constraints(double h) {
  return {{Vec2(1, 0), h}, {Vec2(-1, 0), h}, {Vec2(0, 1), h}, {Vec2(0, -1), h}};
}

}  // namespace

TEST_SUITE("polyhedral2d") {
  TEST_CASE("halfplane intersection") {
    const Polygon sq = halfplane_intersection(axis_constraints(1));
    CHECK_FALSE(sq.degenerate);
    CHECK(sq.size() == 4);
    CHECK(sq.area() == doctest::Approx(4));

    const Polygon none = halfplane_intersection(
        {{Vec2(1, 0), 1}, {Vec2(-1, 0), -2}, {Vec2(0, 1), 5}, {Vec2(0, -1), 5}});
    CHECK(none.degenerate);
    CHECK(none.empty());

    std::vector<Halfplane> tri;
    for (int k = 0; k < 3; ++k) {
      const double a = 2 * kPi * k / 3;
      tri.push_back({Vec2(std::cos(a), std::sin(a)), 1});
    }
    CHECK(halfplane_intersection(tri).area() == doctest::Approx(3 * std::sqrt(3.0)));

    CHECK_THROWS_AS(halfplane_intersection({{Vec2(1, 0), 1}}), UnboundedRegion);
  }

  TEST_CASE("cell decomposition") {
    const Polyhedral p = make_polyhedral({vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)}, {0, 0, 0, 0}).polyhedral();
    const CellComplex cc = cell_decomposition(p, kSquare);
    REQUIRE(cc.cells.size() == 4);
    for (const auto& c : cc.cells) {
      REQUIRE(c.has_value());
      CHECK(c->size() == 3);
      CHECK(c->area() == doctest::Approx(1));
    }

    const Polyhedral box = fixtures::square_indicator().polyhedral();
    const CellComplex cb = cell_decomposition(box, make_box(Vec2(-3, -3), Vec2(3, 3)));
    REQUIRE(cb.cells.size() == 1);
    CHECK(cb.cells[0]->area() == doctest::Approx(4));
    REQUIRE(cb.facets.size() == 4);
    for (const auto& f : cb.facets) {
      REQUIRE(f.size() == 1);
      CHECK((f[0].segment[1] - f[0].segment[0]).norm() == doctest::Approx(2));
    }

    const Polyhedral dom{{vec2(1, 0), vec2(1, 0)}, {0, 1}, {}, {}};
    const CellComplex cd = cell_decomposition(dom, kSquare);
    CHECK(cd.cells[0].has_value());
    CHECK_FALSE(cd.cells[1].has_value());
  }

  TEST_CASE("cells partition the truncation") {
    const ConvexFunction phi = fixtures::random_polyhedral(2, 21, false);
    const CellComplex cc = cell_decomposition(phi.polyhedral(), kSquare.scaled(2));
    double area = 0;
    for (const auto& c : cc.cells)
      if (c) area += c->area();
    CHECK(area == doctest::Approx(16).epsilon(1e-10));
  }

  TEST_CASE("exp-affine polygon integrals") {
    const Polygon unit = make_box(Vec2(0, 0), Vec2(1, 1));
    CHECK(exp_affine_polygon_integral(kSquare, Vec2(0, 0), 0) == doctest::Approx(4).epsilon(1e-14));
    CHECK(exp_affine_polygon_integral(unit, Vec2(1, 0), 0) == doctest::Approx(0.632120558).epsilon(1e-9));
    CHECK(exp_affine_polygon_integral(unit, Vec2(1, 1), 0) == doctest::Approx(0.399576400).epsilon(1e-9));
    CHECK(exp_affine_polygon_integral(unit, Vec2(1e-10, 0), 0) == doctest::Approx(1 - 0.5e-10).epsilon(1e-14));
    CHECK(exp_affine_polygon_integral(unit, Vec2(0, 0), 2) == doctest::Approx(std::exp(-2.0)));
  }

  TEST_CASE("exp-affine segment integrals") {
    CHECK(exp_affine_segment_integral(Vec2(0, 0), Vec2(1, 0), Vec2(0, 0), 0) == doctest::Approx(1));
    CHECK(exp_affine_segment_integral(Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), 0) ==
          doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(exp_affine_segment_integral(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), 0) == doctest::Approx(1));
  }

  TEST_CASE("minkowski sum") {
    const Polygon s = minkowski_sum(kSquare, kSquare);
    CHECK(s.area() == doctest::Approx(16));
    CHECK(s.support(Vec2(1, 0)) == doctest::Approx(2));

    const Polygon t = minkowski_sum(kSquare, make_point_polygon(Vec2(3, -1)));
    CHECK(t.area() == doctest::Approx(4));
    CHECK(t.support(Vec2(1, 0)) == doctest::Approx(4));
    CHECK(t.support(Vec2(0, -1)) == doctest::Approx(2));

    const Polygon dia = make_regular_polygon(4, std::sqrt(2.0));
    const Polygon oct = minkowski_sum(kSquare, dia);
    CHECK(oct.size() == 8);
    CHECK(oct.area() == doctest::Approx(kSquare.area() + 2 * mixed_volume_v1(kSquare, dia) + dia.area()));
    for (double a : {0.1, 0.9, 2.0, 4.4}) {
      const Vec2 d(std::cos(a), std::sin(a));
      CHECK(oct.support(d) == doctest::Approx(kSquare.support(d) + dia.support(d)));
    }
  }

  TEST_CASE("minkowski difference") {
    for (double t : {0.1, 0.5, 0.9}) {
      const Polygon e = minkowski_difference(kSquare, kSquare.scaled(t));
      CHECK(e.area() == doctest::Approx(4 * (1 - t) * (1 - t)));
    }
    const Polygon pp = minkowski_difference(kSquare, kSquare);
    CHECK(pp.degenerate);
    CHECK(pp.area() == doctest::Approx(0));

    const Polygon tri = make_polygon({Vec2(0, 0), Vec2(4, 0), Vec2(1, 3)});
    const Polygon disk = make_regular_polygon(16, 0.3);
    const Polygon er = minkowski_difference(tri, disk);
    REQUIRE_FALSE(er.empty());
    for (const auto& v : er.vertices)
      for (const auto& q : disk.vertices) CHECK(tri.contains(v + q, 1e-9));
    const Polygon back = minkowski_sum(er, disk);
    for (const auto& v : back.vertices) CHECK(tri.contains(v, 1e-9));
  }

  TEST_CASE("mixed volume") {
    CHECK(mixed_volume_v1(kSquare, kSquare) == doctest::Approx(4));
    CHECK(mixed_volume_v1(kSquare, make_point_polygon(Vec2(0, 0))) == doctest::Approx(0));
    CHECK(mixed_volume_v1(kSquare, make_segment_polygon(Vec2(-1, 0), Vec2(1, 0))) == doctest::Approx(2));
    const Polygon tri = make_polygon({Vec2(0, 0), Vec2(2, 0), Vec2(0, 1)});
    CHECK(mixed_volume_v1(tri, tri) == doctest::Approx(tri.area()));
    const Polygon l1 = make_regular_polygon(5, 0.7), l2 = make_box(Vec2(-0.2, -0.1), Vec2(0.5, 0.3));
    CHECK(mixed_volume_v1(tri, minkowski_sum(l1, l2)) ==
          doctest::Approx(mixed_volume_v1(tri, l1) + mixed_volume_v1(tri, l2)));
  }

  TEST_CASE("matheron beta") {
    CHECK(matheron_beta(kSquare, kSquare, 0.5) == doctest::Approx(9));
    CHECK(matheron_beta(kSquare, kSquare, -0.5) == doctest::Approx(1));
    const double h = 1e-4;
    const double d = (matheron_beta(kSquare, kSquare, h) - matheron_beta(kSquare, kSquare, -h)) / (2 * h);
    CHECK(d == doctest::Approx(8).epsilon(1e-3 / 8));
    CHECK_THROWS(matheron_beta(kSquare, kSquare, -1.5));
  }

  TEST_CASE("matheron beta is convex") {
    const Polygon a = make_polygon({Vec2(0, 0), Vec2(3, 0), Vec2(2, 2), Vec2(0, 1)});
    const Polygon b = make_regular_polygon(6, 0.4);
    const double dt = 0.05;
    for (double t = -0.3; t <= 1.0; t += dt) {
      const double d2 = matheron_beta(a, b, t - dt) - 2 * matheron_beta(a, b, t) + matheron_beta(a, b, t + dt);
      CHECK(d2 >= -1e-9);
    }
  }
}
