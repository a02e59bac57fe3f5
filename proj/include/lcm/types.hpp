#ifndef LCM_TYPES_HPP
#define LCM_TYPES_HPP

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>

namespace lcm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

/// +infinity sentinel. IEEE infinity is ordered above every real and saturates under addition.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double v) { return v == kInf; }

inline double sat_add(double a, double b) {
  if (a == kInf || b == kInf) return kInf;
  return a + b;
}

// Tolerance hierarchy.
inline constexpr double kPredicateTol = 1e-12;
inline constexpr double kTailCutoff = 1e-10;

struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require_dim(const Vec& x, int n, const char* where) {
  if (x.size() != n)
    throw DimensionError(std::string(where) + ": dimension mismatch (expected " + std::to_string(n) +
                         ", got " + std::to_string(x.size()) + ")");
}

inline Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace lcm

#endif
