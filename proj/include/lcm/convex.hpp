#ifndef LCM_CONVEX_HPP
#define LCM_CONVEX_HPP

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "lcm/polygon.hpp"
#include "lcm/types.hpp"

namespace lcm {

/// phi(x) = max_i (<x, slopes[i]> - offsets[i]) on {<x, normals[j]> <= heights[j]}.
struct Polyhedral {
  std::vector<Vec> slopes;
  std::vector<double> offsets;
  std::vector<Vec> normals;
  std::vector<double> heights;
  bool has_domain() const { return !normals.empty(); }
};

/// Multilinear interpolant of node values on an axis-aligned box; +inf outside the box.
struct Grid {
  Vec lo;
  Vec step;
  std::vector<int> shape;
  std::vector<double> values;  // row-major, last axis fastest
  int dim() const { return static_cast<int>(shape.size()); }
  Vec hi() const;
  std::size_t index(const std::vector<int>& idx) const;
};

struct Quadratic {
  Mat A;  // positive definite; base(z) = z^T A z / 2
};
struct Cone {
  double a = 1;
  double r0 = 0;  // base(z) = a * max(|z| - r0, 0)
};
struct Ball {
  double radius = 1;  // base = indicator of the closed ball
};
struct Polytope {
  std::vector<Vec> vertices;  // 1D: one or two endpoints; 2D: CCW cycle, or a single point
};

/// Built-in closed forms: phi(x) = base(x - center) + <linear, x> + constant.
struct Analytic {
  std::variant<Quadratic, Cone, Ball, Polytope> shape;
  Vec center;
  Vec linear;
  double constant = 0;
};

struct ConvexFunction {
  int dim = 0;
  std::variant<Polyhedral, Grid, Analytic> rep;

  bool is_polyhedral() const { return std::holds_alternative<Polyhedral>(rep); }
  bool is_grid() const { return std::holds_alternative<Grid>(rep); }
  bool is_analytic() const { return std::holds_alternative<Analytic>(rep); }
  const Polyhedral& polyhedral() const { return std::get<Polyhedral>(rep); }
  const Grid& grid() const { return std::get<Grid>(rep); }
  const Analytic& analytic() const { return std::get<Analytic>(rep); }
  template <class T>
  bool analytic_is() const {
    return is_analytic() && std::holds_alternative<T>(analytic().shape);
  }
};

struct EpiPoint {
  Vec x;
  double t = 0;
};

// ---- construction -------------------------------------------------------

ConvexFunction make_polyhedral(std::vector<Vec> slopes, std::vector<double> offsets, std::vector<Vec> normals = {},
                               std::vector<double> heights = {});
ConvexFunction make_grid(Vec lo, Vec step, std::vector<int> shape, std::vector<double> values);
ConvexFunction make_quadratic(const Mat& A, const Vec& center);
ConvexFunction make_cone(int n, double a, double b, const Vec& center = Vec());
ConvexFunction make_ball_indicator(int n, double radius, const Vec& center = Vec());
ConvexFunction make_interval_indicator(double lo, double hi);
ConvexFunction make_polygon_indicator(const Polygon& P);
ConvexFunction make_point_indicator(const Vec& p);
/// x -> phi(x) + <linear, x> + constant.
ConvexFunction add_affine(const ConvexFunction& phi, const Vec& linear, double constant);
/// x -> phi(x - v).
ConvexFunction translate(const ConvexFunction& phi, const Vec& v);
/// Polyhedral form of a polyhedral-representable function (polytope indicators, 1D cones).
std::optional<ConvexFunction> as_polyhedral(const ConvexFunction& phi);

// ---- evaluation ---------------------------------------------------------

double evaluate(const ConvexFunction& phi, const Vec& x);
/// A subgradient (lowest-index active piece for Polyhedral; central differences for Grid).
Vec subgradient(const ConvexFunction& phi, const Vec& x);
/// Index of the maximizing affine piece (lowest index among ties), -1 off the domain.
int active_piece(const Polyhedral& P, const Vec& x);
bool in_domain(const Polyhedral& P, const Vec& x, double tol = kPredicateTol);

/// Interval {s : p + s d in dom(phi)} (may be infinite, or empty with lo > hi).
std::pair<double, double> line_domain(const ConvexFunction& phi, const Vec& p, const Vec& d);

struct Minimum {
  Vec x;
  double value = 0;
};
Minimum minimize(const ConvexFunction& phi);

/// Points where n pieces/facets meet inside the domain (dimension 1 or 2), plus domain vertices.
/// Their images under phi carry every affine minorant needed for the conjugate.
std::vector<Vec> polyhedral_vertices(const Polyhedral& P, int dim);

/// Vertex polygon of a bounded 2D polyhedral domain; nullopt when unbounded or absent.
std::optional<Polygon> domain_polygon(const Polyhedral& P);

// ---- transforms ---------------------------------------------------------

ConvexFunction legendre(const ConvexFunction& phi);

struct HorizonValue {
  double value = 0;
  double error = 0;
};
HorizonValue horizon(const ConvexFunction& psi, const Vec& theta);

bool epi_contains(const ConvexFunction& phi, const EpiPoint& p, double* margin = nullptr);

struct EpiDistance {
  double value = 0;
  double resolution = 0;
};
EpiDistance epi_distance(const ConvexFunction& phi, const ConvexFunction& psi,
                         const std::vector<double>& radii = {1, 2, 4, 8}, int directions = 512);

struct EpsTranslation {
  Vec v;
  double eps = 0;
  ConvexFunction translated;
};
/// Find v and eps with phi(x + v) < min phi + 1/2 on the closed eps-ball (checked with margin 0.45).
EpsTranslation translate_to_eps_class(const ConvexFunction& phi);
/// Sampled sup of phi over the closed ball B(c, r) with 10^3 * n samples.
double sampled_ball_sup(const ConvexFunction& phi, const Vec& c, double r, int samples_per_dim = 1000);

// ---- log-concave densities ---------------------------------------------

/// phi(x) >= a |x| + b for all x.
struct CoercivityWitness {
  double a = 0;
  double b = 0;
};

CoercivityWitness coercivity_witness(const ConvexFunction& phi);

class LogConcaveDensity {
 public:
  explicit LogConcaveDensity(ConvexFunction phi);
  const ConvexFunction& phi() const { return phi_; }
  int dim() const { return phi_.dim; }
  const CoercivityWitness& witness() const { return witness_; }
  double value(const Vec& x) const;

 private:
  friend double integral(const LogConcaveDensity& f);
  struct Cache {
    std::once_flag once;
    double value = 0;
  };
  ConvexFunction phi_;
  CoercivityWitness witness_;
  std::shared_ptr<Cache> cache_;
};

/// Integral of e^{-phi}.
double integral(const LogConcaveDensity& f);
double integral_uncached(const ConvexFunction& phi);

LogConcaveDensity dilate(double lambda, const LogConcaveDensity& f);
ConvexFunction dilate(double lambda, const ConvexFunction& phi);
LogConcaveDensity sup_convolution(const LogConcaveDensity& f, const LogConcaveDensity& g);
/// Infimal convolution phi box psi, i.e. -log of the sup-convolution.
ConvexFunction inf_convolution(const ConvexFunction& phi, const ConvexFunction& psi);
ConvexFunction support_function(const LogConcaveDensity& f);

/// Sum of two polyhedral functions (pieces pairwise added, domains intersected).
ConvexFunction polyhedral_sum(const ConvexFunction& a, const ConvexFunction& b);

/// Sample phi onto a regular grid over the box [lo, hi] with `nodes` nodes per axis.
ConvexFunction sample_to_grid(const ConvexFunction& phi, const Vec& lo, const Vec& hi, int nodes);

}  // namespace lcm

#endif
