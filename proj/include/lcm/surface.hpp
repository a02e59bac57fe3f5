#ifndef LCM_SURFACE_HPP
#define LCM_SURFACE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcm/convex.hpp"
#include "lcm/measures.hpp"
#include "lcm/polygon.hpp"

namespace lcm {

enum class Provenance { exact, quadrature, monte_carlo };
std::string to_string(Provenance p);

struct SurfaceMeasures {
  MeasurePair pair;
  Provenance provenance = Provenance::exact;
  std::size_t samples = 0;       // Monte Carlo draws (accepted)
  std::uint64_t seed = 0;
  double acceptance = 0;         // Monte Carlo acceptance rate
  double integral_stderr = 0;    // standard error of the acceptance-based estimate of the integral
  double f_integral = 0;
  double tail_bound = 0;         // certified truncation error (exact mode)
};

/// Exact (mu_f, nu_f) for polyhedral-representable phi in dimension 1 or 2.
SurfaceMeasures surface_measures_exact(const LogConcaveDensity& f);
/// Rejection-sampling estimate from the witness envelope.
SurfaceMeasures surface_measures_mc(const LogConcaveDensity& f, std::size_t n_samples, std::uint64_t seed);
/// Exact when polyhedral; closed-form quadrature atoms for the analytic shapes; Monte Carlo otherwise.
SurfaceMeasures surface_measures(const LogConcaveDensity& f, std::size_t mc_samples = 200000, std::uint64_t seed = 1);

/// int h_g dmu + int horizon(h_g) dnu, or +inf.
double delta_via_measures(const SurfaceMeasures& mf, const LogConcaveDensity& g);
double delta_via_measures(const LogConcaveDensity& f, const LogConcaveDensity& g);

struct DeltaEstimate {
  double value = 0;
  double error = 0;
  std::vector<double> steps;
  std::vector<double> quotients;
};

struct DeltaNumeric {
  DeltaEstimate right;
  std::optional<DeltaEstimate> left;
};

/// t -> int f * (t.g): sup-convolution for t > 0, level-set erosion for t < 0 (g an indicator).
double beta(const LogConcaveDensity& f, const LogConcaveDensity& g, double t);

/// Richardson-extrapolated difference quotients of beta at 0; steps default to {1e-1, 10^-2.5, 1e-4} * scale.
DeltaNumeric delta_numeric(const LogConcaveDensity& f, const LogConcaveDensity& g, std::vector<double> steps = {},
                           bool two_sided = false);

/// 2 * int V1(F_tau, L) e^{-tau} dtau over the sublevel sets F_tau (2D polyhedral f).
double delta_via_levelsets(const LogConcaveDensity& f, const Polygon& L);

/// int phi e^{-phi}.
double entropy_integral(const LogConcaveDensity& f);

struct SelfCheck {
  double lhs = 0;
  double rhs = 0;
};
SelfCheck delta_self_check(const LogConcaveDensity& f);

struct IsoperimetricRatio {
  double ratio = 0;
  double delta = 0;
  double polygon_defect = 0;  // relative gap of the inscribed polygon's support function
};
IsoperimetricRatio isoperimetric_ratio(const LogConcaveDensity& f);

/// Indicator body of g (2D): a polygon for polytope or polyhedral indicators, the inscribed 128-gon for balls.
std::optional<Polygon> indicator_polygon(const ConvexFunction& g, int ball_sides = 128);

}  // namespace lcm

#endif
