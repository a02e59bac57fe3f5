#ifndef LCM_CELLS_HPP
#define LCM_CELLS_HPP

#include <array>
#include <optional>
#include <vector>

#include "lcm/convex.hpp"
#include "lcm/polygon.hpp"

namespace lcm {

struct FacetPiece {
  std::array<Vec2, 2> segment;
  int piece = -1;
};

/// Cells of a 2D max-of-affine function inside a truncation polygon.
struct CellComplex {
  std::vector<std::optional<Polygon>> cells;      // indexed by piece
  std::vector<std::vector<FacetPiece>> facets;    // indexed by domain facet
  Polygon truncation;
};

CellComplex cell_decomposition(const Polyhedral& phi, const Polygon& truncation);

/// Integral of exp(-<a,x> - b) over a polygon (zero for degenerate input).
double exp_affine_polygon_integral(const Polygon& P, const Vec2& a, double b);
/// Integral of exp(-<a,x> - b) along a segment against arclength.
double exp_affine_segment_integral(const Vec2& p, const Vec2& q, const Vec2& a, double b);
/// Integral of (<a,x> + b) exp(-<a,x> - b) over a polygon.
double affine_exp_affine_polygon_integral(const Polygon& P, const Vec2& a, double b);
/// First moment (integral of x exp(-<a,x> - b)) over a polygon.
Vec2 exp_affine_polygon_moment(const Polygon& P, const Vec2& a, double b);

// Removable-singularity-safe kernels on the standard simplex.
double expint_g1(double x);                               // (1 - e^{-x}) / x
double expint_simplex2(double a0, double a1, double a2);  // integral over the 2-simplex of e^{-sum l_i a_i}

/// Certified truncation for a polyhedral function: outside `box` the integrand is bounded by
/// exp(-phi0 - kappa |x - x0|) and the discarded mass by `tail`.
struct TailCertificate {
  bool bounded_domain = false;
  Vec x0;
  double phi0 = 0;
  double half_width = 0;
  double kappa = 0;
  double tail = 0;
  Polygon box;         // 2D
  double lo = 0, hi = 0;  // 1D
};

/// Square (or interval) around the minimizer, grown until the witness slope is positive and,
/// when `reference_mass` > 0, the tail bound is below kTailCutoff * reference_mass.
TailCertificate certify_tail(const Polyhedral& P, int dim, double reference_mass);

struct PolyhedralIntegrals {
  double total = 0;
  std::vector<double> cell;   // mass of e^{-phi} on each piece's cell
  std::vector<double> facet;  // boundary mass on each domain facet
  double entropy = 0;         // integral of phi e^{-phi}
  Vec moment;                 // integral of x e^{-phi}
  double tail_bound = 0;
};

/// Exact integration (dimension 1 or 2).
PolyhedralIntegrals integrate_polyhedral(const Polyhedral& P, int dim, bool with_moments = false);

}  // namespace lcm

#endif
