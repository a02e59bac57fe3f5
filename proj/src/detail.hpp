#ifndef LCM_SRC_DETAIL_HPP
#define LCM_SRC_DETAIL_HPP

#include <vector>

#include "lcm/convex.hpp"

namespace lcm::detail {

struct Piece1D {
  double a, b;
  int piece;
};

/// Domain interval of a 1D polyhedral function and the binding facet at each end (-1 if none).
void domain_1d(const Polyhedral& P, double& lo, double& hi, int& jlo, int& jhi);
/// Upper envelope of 1D affine pieces on [lo, hi] as consecutive intervals.
std::vector<Piece1D> envelope_1d(const Polyhedral& P, double lo, double hi);

inline Vec2 v2(const Vec& v) { return Vec2(v(0), v(1)); }
inline Vec vx(const Vec2& v) { return vec2(v.x(), v.y()); }

}  // namespace lcm::detail

#endif
