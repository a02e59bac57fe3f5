#ifndef LCM_SOLVER_HPP
#define LCM_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "lcm/convex.hpp"
#include "lcm/measures.hpp"

namespace lcm {

/// phi(x) = max_i (<x, y_i> - psi_i) on {<x, theta_j> <= h_j}, with y_i the mu atoms and theta_j the nu atoms.
struct SolverState {
  std::vector<double> psi;
  std::vector<double> h;
  double objective = 0;
  double gradient_norm = 0;
  int iteration = 0;
};

ConvexFunction induced_function(const SolverState& s, const MeasurePair& target);

struct Gradient {
  std::vector<double> dpsi;
  std::vector<double> dh;
};

/// Sum m psi + sum w h - M log int e^{-phi}; +inf when the integral vanishes or diverges.
double objective(const SolverState& s, const MeasurePair& target);
Gradient gradient(const SolverState& s, const MeasurePair& target);

struct SolveOptions {
  double tol = 1e-9;
  int max_iterations = 5000;
  int memory = 10;
  std::uint64_t seed = 1;
  double init_jitter = 0;        // random perturbation of the initial point (0: deterministic start)
  std::size_t mc_samples = 200000;  // n >= 3 only
};

struct SolveReport {
  ConvexFunction phi;  // normalized and aligned solution, f = e^{-phi}
  LogConcaveDensity density() const { return LogConcaveDensity(phi); }
  SolverState state;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
  double normalization_shift = 0;
  Vec alignment;
  double max_mass_error = 0;  // max over atoms of |cell or facet mass - target|
  double min_atom_gap = 0;    // smallest distance between two mu atoms (inf for a single atom)
  bool ill_conditioned = false;  // some pair of mu atoms closer than 1e-6
};

/// Validates the target (throws std::invalid_argument naming the failing condition), then minimizes.
SolveReport solve(const MeasurePair& target, const SolveOptions& opts = {});

struct CoercivityDiagnostic {
  double c = 0;
  double min_slack = 0;
  bool holds = false;
  std::size_t samples = 0;
};

/// Checks phi(x) >= (c/2 |x| - int phi* dmu - int horizon dnu) / M with min phi moved to 0.
CoercivityDiagnostic coercivity_diagnostic(const SolverState& s, const MeasurePair& target);

struct RecoveryResult {
  ConvexFunction recovered;
  double epi_distance = 0;
  double resolution = 0;
  double residual = 0;
};

/// Exact measures of f, solve, align both by barycenter, compare epigraphs.
RecoveryResult recover_and_compare(const LogConcaveDensity& f, const SolveOptions& opts = {});

/// x -> phi(x + b) with b the barycenter of e^{-phi}.
ConvexFunction barycenter_aligned(const ConvexFunction& phi, Vec* barycenter = nullptr);

}  // namespace lcm

#endif
