#pragma once

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lcm/convex.hpp"
#include "lcm/fixtures.hpp"
#include "lcm/measures.hpp"

namespace lcm::test {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kE = std::numbers::e;

inline ConvexFunction gaussian_1d() { return make_quadratic(Mat::Identity(1, 1), Vec::Zero(1)); }

inline TestFunction constant_one() {
  return {"one", [](const Vec&) { return 1.0; }, [](const Vec&) { return 1.0; }};
}

}  // namespace lcm::test
