#ifndef LCM_FIXTURES_HPP
#define LCM_FIXTURES_HPP

#include <cstdint>

#include "lcm/convex.hpp"
#include "lcm/measures.hpp"

namespace lcm::fixtures {

ConvexFunction abs_1d();               // |x|
ConvexFunction interval_indicator();   // indicator of [-1, 1], polyhedral form
ConvexFunction square_indicator();     // indicator of [-1, 1]^2, polyhedral form
ConvexFunction abs_2d();               // |x| in the plane
ConvexFunction gaussian_2d();          // |x|^2 / 2 in the plane

/// max(k|x| - k, 0) on the line.
ConvexFunction example_family(double k);
/// Closed-form surface measures of example_family(k): 2 at 0 and 1/k at +-k.
MeasurePair example_family_measures(double k);

/// Six-piece cone through the origin restricted to a random box around it.
ConvexFunction random_cone_box(std::uint64_t seed);
/// Coercive max of 2..7 random affine pieces, optionally on a random bounded or unbounded domain.
ConvexFunction random_polyhedral(int dim, std::uint64_t seed, bool with_domain);

}  // namespace lcm::fixtures

#endif
