#include "lcm/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lcm/rng.hpp"

namespace lcm::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

struct Draw {
  CounterRng rng;
  std::uint64_t c = 0;
  double operator()(double lo, double hi) { return lo + (hi - lo) * rng.uniform(c++); }
};

}  // namespace

ConvexFunction abs_1d() { return make_polyhedral({vec1(1), vec1(-1)}, {0, 0}); }

ConvexFunction interval_indicator() { return make_polyhedral({vec1(0)}, {0}, {vec1(1), vec1(-1)}, {1, 1}); }

ConvexFunction square_indicator() {
  return make_polyhedral({vec2(0, 0)}, {0}, {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)}, {1, 1, 1, 1});
}

ConvexFunction abs_2d() { return make_cone(2, 1, 0); }

ConvexFunction gaussian_2d() { return make_quadratic(Mat::Identity(2, 2), Vec::Zero(2)); }

ConvexFunction example_family(double k) {
  if (!(k > 0)) throw std::invalid_argument("example_family: k must be positive");
  return make_polyhedral({vec1(-k), vec1(0), vec1(k)}, {k, 0, k});
}

MeasurePair example_family_measures(double k) {
  return make_measure_pair(1, {{vec1(-k), 1 / k}, {vec1(0), 2}, {vec1(k), 1 / k}}, {});
}

ConvexFunction random_cone_box(std::uint64_t seed) {
  Draw d{CounterRng(seed, 101)};
  std::vector<Vec> slopes;
  std::vector<double> offsets;
  const double phase = d(0, 2 * kPi);
  for (int k = 0; k < 6; ++k) {
    const double a = phase + 2 * kPi * k / 6 + d(-0.15, 0.15), r = d(0.9, 1.1);
    slopes.push_back(vec2(r * std::cos(a), r * std::sin(a)));
    offsets.push_back(0);
  }
  const double x0 = d(0.6, 1.5), x1 = d(0.6, 1.5), y0 = d(0.6, 1.5), y1 = d(0.6, 1.5);
  return make_polyhedral(slopes, offsets, {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)}, {x1, x0, y1, y0});
}

ConvexFunction random_polyhedral(int dim, std::uint64_t seed, bool with_domain) {
  Draw d{CounterRng(seed, 202)};
  std::vector<Vec> slopes, normals;
  std::vector<double> offsets, heights;
  if (dim == 1) {
    const int np = 1 + static_cast<int>(d(0, 2.999)), nn = 1 + static_cast<int>(d(0, 2.999));
    for (int k = 0; k < np; ++k) slopes.push_back(vec1(d(0.3, 2.5)));
    for (int k = 0; k < nn; ++k) slopes.push_back(vec1(-d(0.3, 2.5)));
    for (std::size_t k = 0; k < slopes.size(); ++k) offsets.push_back(d(-0.5, 0.5));
    if (with_domain) {
      const int mode = static_cast<int>(d(0, 2.999));
      if (mode != 1) normals.push_back(vec1(1)), heights.push_back(d(0.5, 2));
      if (mode != 2) normals.push_back(vec1(-1)), heights.push_back(d(0.5, 2));
    }
    return make_polyhedral(slopes, offsets, normals, heights);
  }
  if (dim != 2) throw DimensionError("random_polyhedral: dimension must be 1 or 2");
  // Slope directions with every angular gap below 2pi/3 so that 0 is interior to their hull.
  std::vector<double> ang;
  for (int tries = 0;; ++tries) {
    ang.clear();
    const int N = 3 + static_cast<int>(d(0, 4.999));
    for (int k = 0; k < N; ++k) ang.push_back(d(0, 2 * kPi));
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2 * kPi - ang.back();
    for (std::size_t k = 1; k < ang.size(); ++k) gap = std::max(gap, ang[k] - ang[k - 1]);
    if (gap < 2 * kPi / 3) break;
  }
  for (double a : ang) {
    const double r = d(0.5, 2);
    slopes.push_back(vec2(r * std::cos(a), r * std::sin(a)));
    offsets.push_back(d(-0.5, 0.5));
  }
  if (with_domain) {
    const int J = 1 + static_cast<int>(d(0, 4.999));
    const double phase = d(0, 2 * kPi);
    for (int j = 0; j < J; ++j) {
      const double a = phase + 2 * kPi * j / J + d(-0.3, 0.3);
      normals.push_back(vec2(std::cos(a), std::sin(a)));
      heights.push_back(d(0.5, 2));
    }
  }
  return make_polyhedral(slopes, offsets, normals, heights);
}

}  // namespace lcm::fixtures
