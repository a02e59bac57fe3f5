#include "lcm/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <map>
#include <mutex>
#include <numbers>

namespace lcm {
namespace {

// Golub-Welsch: nodes/weights from the symmetric Jacobi matrix.
Rule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta_sqrt, double mu0) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = alpha[i];
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = beta_sqrt[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v * v;
  }
  return r;
}

// Polish Legendre nodes by Newton on P_n; weights from the derivative.
void polish_legendre(Rule& r) {
  const int n = static_cast<int>(r.x.size());
  for (int i = 0; i < n; ++i) {
    double x = r.x[i];
    double dp = 1;
    for (int it = 0; it < 4; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      x -= p1 / dp;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    r.x[i] = x;
    r.w[i] = 2 / ((1 - x * x) * dp * dp);
  }
}

std::mutex g_mutex;

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(g_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> a(n, 0.0), b(n > 0 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) b[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Rule r = golub_welsch(a, b, 2.0);
  if (n > 1) polish_legendre(r);
  return cache.emplace(n, std::move(r)).first->second;
}

const Rule& gauss_laguerre(int n) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(g_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> a(n), b(n > 0 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) a[k] = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) b[k - 1] = k;
  return cache.emplace(n, golub_welsch(a, b, 1.0)).first->second;
}

const Rule& gauss_hermite(int n) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(g_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> a(n, 0.0), b(n > 0 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) b[k - 1] = std::sqrt(static_cast<double>(k));
  return cache.emplace(n, golub_welsch(a, b, std::sqrt(2 * std::numbers::pi))).first->second;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  Eigen::VectorXd k, g;
};

Panel gk15(const VecFn& f, int m, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Panel p{Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(m)};
  const Eigen::VectorXd fc = f(c);
  p.k += kWgk[7] * fc;
  p.g += kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const Eigen::VectorXd f1 = f(c - dx), f2 = f(c + dx);
    p.k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) p.g += kWg[j / 2] * (f1 + f2);
  }
  p.k *= h;
  p.g *= h;
  return p;
}

void gk_recurse(const VecFn& f, int m, double a, double b, double tol, int depth, QuadResult& out) {
  Panel p = gk15(f, m, a, b);
  out.evaluations += 15;
  const double err = (p.k - p.g).cwiseAbs().maxCoeff();
  if (err <= tol || depth <= 0 || !(b - a > 1e-15 * (std::abs(a) + std::abs(b)))) {
    out.value += p.k;
    out.error += err;
    return;
  }
  const double c = 0.5 * (a + b);
  gk_recurse(f, m, a, c, 0.5 * tol, depth - 1, out);
  gk_recurse(f, m, c, b, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadResult integrate_gk(const VecFn& f, int m, double a, double b, double tol, int max_depth) {
  QuadResult out;
  out.value = Eigen::VectorXd::Zero(m);
  if (b == a) return out;
  gk_recurse(f, m, a, b, tol, max_depth, out);
  return out;
}

double integrate_gk(const std::function<double(double)>& f, double a, double b, double tol, double* err) {
  VecFn g = [&](double x) {
    Eigen::VectorXd v(1);
    v(0) = f(x);
    return v;
  };
  QuadResult r = integrate_gk(g, 1, a, b, tol);
  if (err) *err = r.error;
  return r.value(0);
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
  const Rule& r = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < n; ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

}  // namespace lcm
