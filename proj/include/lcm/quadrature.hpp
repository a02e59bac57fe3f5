#ifndef LCM_QUADRATURE_HPP
#define LCM_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

namespace lcm {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre on [-1,1].
const Rule& gauss_legendre(int n);
/// Gauss-Laguerre for the weight e^{-x} on [0,inf).
const Rule& gauss_laguerre(int n);
/// Gauss-Hermite for the weight e^{-x^2/2} on the line (weights sum to sqrt(2 pi)).
const Rule& gauss_hermite(int n);

using VecFn = std::function<Eigen::VectorXd(double)>;

struct QuadResult {
  Eigen::VectorXd value;
  double error = 0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) for a vector-valued integrand on [a,b].
/// Subdivision stops when the Kronrod-Gauss gap (max over components) is below tol.
QuadResult integrate_gk(const VecFn& f, int m, double a, double b, double tol, int max_depth = 30);

double integrate_gk(const std::function<double(double)>& f, double a, double b, double tol,
                    double* err = nullptr);

/// Fixed Gauss-Legendre on [a,b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace lcm

#endif
