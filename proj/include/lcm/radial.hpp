#ifndef LCM_RADIAL_HPP
#define LCM_RADIAL_HPP

#include <optional>
#include <vector>

#include "lcm/convex.hpp"
#include "lcm/measures.hpp"

namespace lcm {

/// phi with phi(x) < min phi + 1/2 on the closed eps-ball.
struct EpsClassFunction {
  ConvexFunction phi;   // polyhedral form when one exists
  double eps = 0;
  double min_value = 0;
  CoercivityWitness witness;
  Vec shift;            // translation applied by make_eps_class (zero when checked as given)
};

/// Checks the class condition on the given phi (no translation).
EpsClassFunction make_eps_class(const ConvexFunction& phi, double eps);
/// Translates phi into the class first.
EpsClassFunction make_eps_class(const ConvexFunction& phi);

struct BoundaryPoint {
  Vec u;
  double s = 0;
  EpiPoint point;
  Vec normal;                // unit, last coordinate <= 0
  bool normal_unique = true;
  bool wall = false;         // on a vertical face of the epigraph
  int face = -1;             // piece index (graph) or facet index (wall), polyhedral only
};

double curvilinear_radial(const EpsClassFunction& phi, const Vec& u);
BoundaryPoint boundary_param(const EpsClassFunction& phi, const Vec& u);
/// G(x, t) = e^t x.
Vec boundary_inverse(const EpiPoint& p);
/// Gradient of s at u; nullopt when the normal at F(u) is not unique.
std::optional<Vec> radial_gradient(const EpsClassFunction& phi, const Vec& u);
/// sqrt(det(DF^T DF)) at u with DF assembled from the radial gradient.
double radial_jacobian(const EpsClassFunction& phi, const Vec& u);

struct BoundaryIntegral {
  std::vector<double> values;  // one per test function
  double error = 0;            // quadrature error estimate
  double radius = 0;           // truncation radius in u
  double tail_bound = 0;
  double C = 0;
};

/// Integral over R^n of hat(xi)(n(F(u))) s(u) JF(u) du for each test function.
BoundaryIntegral boundary_integral(const EpsClassFunction& phi, const std::vector<TestFunction>& xi);
double boundary_integral(const EpsClassFunction& phi, const TestFunction& xi);

struct RadialBoundReport {
  double C = 0;
  double max_ratio = 0;
  bool holds = false;
  std::size_t samples = 0;
};

/// Checks s(u) |u| / log(1 + |u|) <= max{1/a, e^{-b}} for psi = a|x| + b.
RadialBoundReport radial_bound_check(double a, double b, const std::vector<Vec>& us);

}  // namespace lcm

#endif
