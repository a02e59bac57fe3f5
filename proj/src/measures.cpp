#include "lcm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace lcm {

double MeasurePair::mu_mass() const {
  double s = 0;
  for (const auto& a : mu) s += a.m;
  return s;
}

double MeasurePair::nu_mass() const {
  double s = 0;
  for (const auto& a : nu) s += a.w;
  return s;
}

double HemisphereMeasure::mass() const {
  double s = 0;
  for (const auto& a : atoms) s += a.mass;
  return s;
}

MeasurePair make_measure_pair(int dim, std::vector<MuAtom> mu, std::vector<NuAtom> nu, double merge_radius) {
  if (dim < 1) throw DimensionError("make_measure_pair: dimension must be positive");
  MeasurePair p;
  p.dim = dim;
  for (auto& a : mu) {
    require_dim(a.x, dim, "make_measure_pair (mu)");
    if (!(a.m > 0) || !std::isfinite(a.m)) throw std::invalid_argument("make_measure_pair: mu masses must be positive");
    bool merged = false;
    for (auto& b : p.mu)
      if ((b.x - a.x).norm() <= merge_radius * (1 + a.x.norm())) {
        b.m += a.m;
        merged = true;
        break;
      }
    if (!merged) p.mu.push_back(a);
  }
  for (auto& a : nu) {
    require_dim(a.theta, dim, "make_measure_pair (nu)");
    if (!(a.w > 0) || !std::isfinite(a.w)) throw std::invalid_argument("make_measure_pair: nu masses must be positive");
    if (std::abs(a.theta.norm() - 1) > 1e-12) throw std::invalid_argument("make_measure_pair: nu directions must be unit");
    bool merged = false;
    for (auto& b : p.nu)
      if ((b.theta - a.theta).norm() <= merge_radius) {
        b.w += a.w;
        merged = true;
        break;
      }
    if (!merged) p.nu.push_back(a);
  }
  return p;
}

Vec gnomonic(const Vec& x) {
  Vec p(x.size() + 1);
  p << x, -1.0;
  return p / std::sqrt(1 + x.squaredNorm());
}

Vec inverse_gnomonic(const Vec& p) {
  const double t = p(p.size() - 1);
  if (!(t < 0)) throw std::domain_error("inverse_gnomonic: point on or above the equator");
  return -p.head(p.size() - 1) / t;
}

HemisphereMeasure hat_embed(const MeasurePair& pair) {
  HemisphereMeasure h;
  for (const auto& a : pair.mu) h.atoms.push_back({gnomonic(a.x), a.m * std::sqrt(1 + a.x.squaredNorm())});
  for (const auto& a : pair.nu) {
    Vec p(pair.dim + 1);
    p << a.theta, 0.0;
    h.atoms.push_back({p, a.w});
  }
  return h;
}

std::string ValidationReport::failure() const {
  auto num = [](double v) {
    std::ostringstream s;
    s << std::setprecision(3) << v;
    return s.str();
  };
  if (!mu_nonzero) return "mu is identically zero";
  if (!centered)
    return "pair is not centered: |sum m x + sum w theta| = " + num(centering_defect) + " exceeds " + num(centering_tol);
  if (!spans) return "atoms lie on a common hyperplane through the origin (norm floor " + num(norm_floor) + ")";
  return "";
}

namespace {

double floor_value(const MeasurePair& p, const Vec& y) {
  double s = 0;
  for (const auto& a : p.mu) s += a.m * std::abs(a.x.dot(y));
  for (const auto& a : p.nu) s += a.w * std::abs(a.theta.dot(y));
  return s;
}

}  // namespace

ValidationReport validate_pair(const MeasurePair& pair, double centering_tol) {
  ValidationReport r;
  const int n = pair.dim;
  r.centering_tol = centering_tol;
  r.mu_mass = pair.mu_mass();
  r.mu_nonzero = !pair.mu.empty() && r.mu_mass > 0;
  Vec v = Vec::Zero(n);
  for (const auto& a : pair.mu) v += a.m * a.x;
  for (const auto& a : pair.nu) v += a.w * a.theta;
  r.centering_vector = v;
  r.centering_defect = v.norm();
  r.centered = r.centering_defect <= centering_tol;
  double lip = 0;
  for (const auto& a : pair.mu) lip += a.m * a.x.norm();
  for (const auto& a : pair.nu) lip += a.w;
  r.lipschitz = lip;
  if (n == 1) {
    r.norm_floor = floor_value(pair, vec1(1));
    r.certified_floor = r.norm_floor;
  } else if (n == 2) {
    // p is concave between consecutive zeros of its terms, so the minimum sits at one of them.
    std::vector<double> angles;
    auto zero_of = [&](const Vec& x) {
      if (x.norm() == 0) return;
      const double t = std::atan2(x(1), x(0)) + std::numbers::pi / 2;
      angles.push_back(t);
    };
    for (const auto& a : pair.mu) zero_of(a.x);
    for (const auto& a : pair.nu) zero_of(a.theta);
    double best = kInf;
    for (double t : angles) best = std::min(best, floor_value(pair, vec2(std::cos(t), std::sin(t))));
    if (angles.empty()) best = 0;
    r.norm_floor = best;
    const int G = 4096;
    double gmin = kInf;
    for (int i = 0; i < G; ++i) {
      const double t = std::numbers::pi * i / G;  // p is even
      gmin = std::min(gmin, floor_value(pair, vec2(std::cos(t), std::sin(t))));
    }
    r.certified_floor = gmin - lip * (std::numbers::pi / G) / 2;
  } else {
    const int G = 20000;
    double gmin = kInf;
    const double ga = std::numbers::pi * (3 - std::sqrt(5.0));
    for (int i = 0; i < G; ++i) {
      Vec y = Vec::Zero(n);
      const double z = 1 - 2 * (i + 0.5) / G, rr = std::sqrt(1 - z * z);
      y(0) = rr * std::cos(ga * i);
      y(1) = rr * std::sin(ga * i);
      y(2) = z;
      gmin = std::min(gmin, floor_value(pair, y));
    }
    r.norm_floor = gmin;
    r.certified_floor = gmin - lip * std::sqrt(4 * std::numbers::pi / G);
  }
  r.spans = r.norm_floor > 1e-12 * std::max(1.0, lip);
  // Affine hyperplane residual on the combined atom cloud.
  const std::size_t rows = pair.mu.size() + pair.nu.size();
  if (rows >= 1) {
    Vec mean = Vec::Zero(n);
    double tw = 0;
    for (const auto& a : pair.mu) mean += a.m * a.x, tw += a.m;
    if (tw > 0) mean /= tw;
    Mat M(rows, n);
    std::size_t k = 0;
    for (const auto& a : pair.mu) M.row(k++) = std::sqrt(a.m) * (a.x - mean).transpose();
    for (const auto& a : pair.nu) M.row(k++) = std::sqrt(a.w) * a.theta.transpose();
    Eigen::JacobiSVD<Mat> svd(M);
    r.affine_residual = rows >= static_cast<std::size_t>(n) ? svd.singularValues()(n - 1) : 0.0;
  }
  return r;
}

double cosmic_distance(const MeasurePair& a, const MeasurePair& b) {
  if (a.dim != b.dim) throw DimensionError("cosmic_distance: dimension mismatch");
  const HemisphereMeasure A = hat_embed(a), B = hat_embed(b);
  const double MA = A.mass(), MB = B.mass();
  if (MA == 0 || MB == 0) return std::abs(MA - MB);
  std::vector<Vec> pa, pb;
  std::vector<double> wa, wb;
  for (const auto& x : A.atoms) pa.push_back(x.p), wa.push_back(x.mass);
  for (const auto& x : B.atoms) pb.push_back(x.p), wb.push_back(x.mass);
  return std::abs(MA - MB) + std::min(MA, MB) * wasserstein1(pa, wa, pb, wb);
}

double TestFunction::hat(const Vec& p) const {
  const int n = static_cast<int>(p.size()) - 1;
  const double t = p(n);
  if (t > -1e-300 && t <= 0) {
    const Vec th = p.head(n);
    return horizon(th / th.norm());
  }
  if (t > 0) throw std::domain_error("TestFunction::hat: point above the equator");
  const Vec x = -p.head(n) / t;
  return xi(x) * (-t);
}

std::vector<TestFunction> standard_dictionary(int n) {
  std::vector<TestFunction> d;
  d.push_back({"one", [](const Vec&) { return 1.0; }, [](const Vec&) { return 1.0; }});
  d.push_back({"smoothed_norm", [](const Vec& x) { return std::sqrt(1 + x.squaredNorm()) - 1; },
               [](const Vec&) { return 1.0; }});
  for (int k = 0; k < n; ++k) {
    const std::string c = std::to_string(k);
    d.push_back({"+x" + c, [k](const Vec& x) { return x(k); }, [k](const Vec& t) { return t(k); }});
    d.push_back({"-x" + c, [k](const Vec& x) { return -x(k); }, [k](const Vec& t) { return -t(k); }});
    d.push_back({"(+x" + c + ")+", [k](const Vec& x) { return std::max(x(k), 0.0); },
                 [k](const Vec& t) { return std::max(t(k), 0.0); }});
    d.push_back({"(-x" + c + ")+", [k](const Vec& x) { return std::max(-x(k), 0.0); },
                 [k](const Vec& t) { return std::max(-t(k), 0.0); }});
  }
  for (int j = 0; j < 8; ++j) {
    Vec c = Vec::Zero(n);
    c(j % n) = 0.5 * (j - 3.5);
    d.push_back({"bump" + std::to_string(j), [c](const Vec& x) { return std::exp(-0.5 * (x - c).squaredNorm()); },
                 [](const Vec&) { return 0.0; }});
  }
  return d;
}

double pairing(const MeasurePair& pair, const TestFunction& xi) {
  double s = 0;
  for (const auto& a : pair.mu) s += a.m * xi.xi(a.x);
  for (const auto& a : pair.nu) s += a.w * xi.horizon(a.theta);
  return s;
}

double dictionary_discrepancy(const MeasurePair& a, const MeasurePair& b, const std::vector<TestFunction>& dict) {
  double m = 0;
  for (const auto& t : dict) {
    if (!t.xi || !t.horizon) throw std::invalid_argument("dictionary_discrepancy: entry lacks a horizon");
    m = std::max(m, std::abs(pairing(a, t) - pairing(b, t)));
  }
  return m;
}

}  // namespace lcm
