#include <algorithm>
#include <cmath>
#include <numbers>

#include "lcm/convex.hpp"

namespace lcm {
namespace {

// Points spanning epi(phi) ∩ B_R, sampled along axis-parallel lines of the x-grid.
struct Cloud {
  std::vector<Vec> pts;
  double spacing = 0;
};

Cloud truncated_epigraph(const ConvexFunction& phi, double R, int lines, int samples) {
  const int n = phi.dim;
  Cloud cl;
  auto add_line = [&](const Vec& p, const Vec& d) {
    // d is a unit axis vector; parameter s ranges over the ball chord.
    const double pd = p.dot(d), c = p.squaredNorm() - R * R;
    const double disc = pd * pd - c;
    if (disc <= 0) return;
    double a = -pd - std::sqrt(disc), b = -pd + std::sqrt(disc);
    const auto [dl, dh] = line_domain(phi, p, d);
    a = std::max(a, dl);
    b = std::min(b, dh);
    if (!(a <= b)) return;
    auto cap = [&](double s) {
      const Vec x = p + s * d;
      return std::sqrt(std::max(0.0, R * R - x.squaredNorm()));
    };
    auto q = [&](double s) {
      const double v = evaluate(phi, p + s * d);
      return v == kInf ? kInf : v - cap(s);
    };
    // Golden-section minimum of the convex q.
    double lo = a, hi = b;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo), f1 = q(x1), f2 = q(x2);
    for (int it = 0; it < 90 && hi - lo > 1e-15 * (1 + std::abs(lo) + std::abs(hi)); ++it) {
      if (f1 <= f2) {
        hi = x2, x2 = x1, f2 = f1;
        x1 = hi - g * (hi - lo), f1 = q(x1);
      } else {
        lo = x1, x1 = x2, f1 = f2;
        x2 = lo + g * (hi - lo), f2 = q(x2);
      }
    }
    double sm = 0.5 * (lo + hi);
    for (double cand : {a, b})
      if (q(cand) < q(sm)) sm = cand;
    if (!(q(sm) <= 0)) return;
    auto bisect = [&](double in, double out) {
      if (q(out) <= 0) return out;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (in + out);
        (q(m) <= 0 ? in : out) = m;
      }
      return in;
    };
    const double s0 = bisect(sm, a), s1 = bisect(sm, b);
    for (int i = 0; i < samples; ++i) {
      const double s = samples == 1 ? s0 : s0 + (s1 - s0) * i / (samples - 1);
      const Vec x = p + s * d;
      const double c2 = cap(s);
      double v = evaluate(phi, x);
      if (v == kInf) continue;
      Vec lo_pt(n + 1), hi_pt(n + 1);
      lo_pt << x, std::max(v, -c2);
      hi_pt << x, c2;
      cl.pts.push_back(lo_pt);
      cl.pts.push_back(hi_pt);
    }
    cl.spacing = std::max(cl.spacing, (s1 - s0) / std::max(1, samples - 1));
  };
  if (n == 1) {
    add_line(vec1(0), vec1(1));
  } else if (n == 2) {
    for (int axis = 0; axis < 2; ++axis)
      for (int i = 0; i < lines; ++i) {
        Vec p = Vec::Zero(2), d = Vec::Zero(2);
        p(1 - axis) = -R + 2 * R * (i + 0.5) / lines;
        d(axis) = 1;
        add_line(p, d);
      }
    cl.spacing = std::max(cl.spacing, 2 * R / lines);
  } else {
    throw DimensionError("epi_distance: dimension must be 1 or 2");
  }
  return cl;
}

std::vector<Vec> sphere_directions(int dim, int count) {
  std::vector<Vec> dirs;
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = 2 * std::numbers::pi * i / count;
      dirs.push_back(vec2(std::cos(t), std::sin(t)));
    }
  } else {
    // Fibonacci sphere.
    const double ga = std::numbers::pi * (3 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1 - 2 * (i + 0.5) / count, r = std::sqrt(1 - z * z);
      Vec d(3);
      d << r * std::cos(ga * i), r * std::sin(ga * i), z;
      dirs.push_back(d);
    }
  }
  return dirs;
}

}  // namespace

EpiDistance epi_distance(const ConvexFunction& phi, const ConvexFunction& psi, const std::vector<double>& radii,
                         int directions) {
  if (radii.empty()) throw std::invalid_argument("epi_distance: empty radii list");
  if (phi.dim != psi.dim) throw DimensionError("epi_distance: dimension mismatch");
  const int n = phi.dim;
  const auto dirs = sphere_directions(n + 1, directions);
  const double dtheta = n == 1 ? 2 * std::numbers::pi / directions : std::sqrt(4 * std::numbers::pi / directions);
  EpiDistance out;
  for (double R : radii) {
    const Cloud A = truncated_epigraph(phi, R, 201, 101), B = truncated_epigraph(psi, R, 201, 101);
    double H = 0;
    if (A.pts.empty() != B.pts.empty()) {
      H = 1;
    } else if (!A.pts.empty()) {
      for (const auto& u : dirs) {
        double ha = -kInf, hb = -kInf;
        for (const auto& p : A.pts) ha = std::max(ha, p.dot(u));
        for (const auto& p : B.pts) hb = std::max(hb, p.dot(u));
        H = std::max(H, std::abs(ha - hb));
      }
    }
    const double w = std::pow(2.0, -R);
    out.value += w * std::min(1.0, H);
    out.resolution += w * (std::max(A.spacing, B.spacing) + R * dtheta * dtheta / 2);
  }
  return out;
}

}  // namespace lcm
