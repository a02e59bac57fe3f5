#ifndef LCM_MEASURES_HPP
#define LCM_MEASURES_HPP

#include <functional>
#include <string>
#include <vector>

#include "lcm/types.hpp"

namespace lcm {

struct MuAtom {
  Vec x;
  double m = 0;
};

struct NuAtom {
  Vec theta;
  double w = 0;
};

/// Discrete mu on R^n plus discrete nu on the unit sphere.
struct MeasurePair {
  int dim = 0;
  std::vector<MuAtom> mu;
  std::vector<NuAtom> nu;

  double mu_mass() const;
  double nu_mass() const;
};

/// Validating constructor: positive masses, unit directions, coincident atoms merged.
MeasurePair make_measure_pair(int dim, std::vector<MuAtom> mu, std::vector<NuAtom> nu, double merge_radius = 1e-12);

struct HemiAtom {
  Vec p;  // unit vector in R^{n+1}, last coordinate <= 0
  double mass = 0;
};

struct HemisphereMeasure {
  std::vector<HemiAtom> atoms;
  double mass() const;
};

/// (x, -1) / sqrt(1 + |x|^2).
Vec gnomonic(const Vec& x);
/// Inverse on the open lower hemisphere.
Vec inverse_gnomonic(const Vec& p);

HemisphereMeasure hat_embed(const MeasurePair& pair);

struct ValidationReport {
  bool mu_nonzero = false;
  bool centered = false;
  bool spans = false;
  double mu_mass = 0;
  double centering_defect = 0;
  Vec centering_vector;
  double norm_floor = 0;        // min over the unit sphere of sum m|<x,y>| + sum w|<theta,y>|
  double certified_floor = 0;   // grid minimum minus Lipschitz slack
  double lipschitz = 0;
  double affine_residual = 0;   // smallest singular value of the centered atom matrix
  double centering_tol = 1e-8;

  bool valid() const { return mu_nonzero && centered && spans; }
  /// Empty when valid; otherwise names the first failing condition.
  std::string failure() const;
};

ValidationReport validate_pair(const MeasurePair& pair, double centering_tol = 1e-8);

/// Exact 1-Wasserstein distance between two discrete probability measures given as points and
/// weights (weights are normalized internally), chordal ground metric.
double wasserstein1(const std::vector<Vec>& a, const std::vector<double>& wa, const std::vector<Vec>& b,
                    const std::vector<double>& wb);

/// |M_a - M_b| + min(M_a, M_b) * W1 of the normalized hat embeddings.
double cosmic_distance(const MeasurePair& a, const MeasurePair& b);

struct TestFunction {
  std::string name;
  std::function<double(const Vec&)> xi;       // on R^n
  std::function<double(const Vec&)> horizon;  // on the unit sphere
  /// Value on the closed lower hemisphere: xi(x)/sqrt(1+|x|^2) below, horizon on the equator.
  double hat(const Vec& p) const;
};

/// The fixed dictionary of 2 + 4n + 8 test functions.
std::vector<TestFunction> standard_dictionary(int n);

/// int xi dmu + int horizon dnu.
double pairing(const MeasurePair& pair, const TestFunction& xi);

double dictionary_discrepancy(const MeasurePair& a, const MeasurePair& b, const std::vector<TestFunction>& dict);

}  // namespace lcm

#endif
