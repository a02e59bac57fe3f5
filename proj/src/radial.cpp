#include "lcm/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "lcm/quadrature.hpp"

namespace lcm {

namespace {

constexpr double kPi = std::numbers::pi;

double witness_C(const CoercivityWitness& w) {
  if (!(w.a > 0)) return kInf;
  return std::max(1.0 / w.a, std::exp(-w.b));
}

// log(1/s) - phi(s u); positive inside the epigraph interior.
double margin(const ConvexFunction& phi, const Vec& u, double s) {
  const double v = evaluate(phi, s * u);
  if (v == kInf) return -kInf;
  return -std::log(s) - v;
}

Vec graph_normal(const Vec& y) {
  const int n = static_cast<int>(y.size());
  Vec nrm(n + 1);
  nrm.head(n) = y;
  nrm(n) = -1;
  return nrm / nrm.norm();
}

Vec wall_normal(const Vec& theta) {
  const int n = static_cast<int>(theta.size());
  Vec nrm = Vec::Zero(n + 1);
  nrm.head(n) = theta / theta.norm();
  return nrm;
}

// Restriction of a polyhedral phi to the ray r -> r w, r >= 0.
struct RaySeg {
  double r0, r1;      // x-radius range
  double rho0, rho1;  // matching u-radius range, rho = r e^{phi(r w)}
  int piece;
  double a, c;        // phi(r w) = a r - c on the segment
};

struct Ray {
  Vec omega;
  std::vector<RaySeg> segs;
  double r_exit = kInf;
  int wall = -1;
  double rho_exit = kInf;
};

double rho_of(double r, double a, double c) {
  if (r == 0) return 0;
  if (r == kInf) return kInf;
  return r * std::exp(a * r - c);
}

Ray ray_structure(const Polyhedral& P, const Vec& omega) {
  Ray ray;
  ray.omega = omega;
  for (std::size_t j = 0; j < P.normals.size(); ++j) {
    const double d = P.normals[j].dot(omega);
    if (d <= 0) continue;
    const double r = P.heights[j] / d;
    if (r < ray.r_exit) {
      ray.r_exit = r;
      ray.wall = static_cast<int>(j);
    }
  }
  Polyhedral Q;
  for (std::size_t i = 0; i < P.slopes.size(); ++i) {
    Q.slopes.push_back(vec1(P.slopes[i].dot(omega)));
    Q.offsets.push_back(P.offsets[i]);
  }
  for (const auto& pc : detail::envelope_1d(Q, 0, ray.r_exit)) {
    if (!(pc.b > pc.a)) continue;
    const double a = Q.slopes[pc.piece](0), c = Q.offsets[pc.piece];
    if (pc.b == kInf && !(a > 0)) throw std::domain_error("boundary_param: phi is not coercive along a ray");
    ray.segs.push_back({pc.a, pc.b, rho_of(pc.a, a, c), rho_of(pc.b, a, c), pc.piece, a, c});
  }
  if (ray.r_exit < kInf) {
    const RaySeg& L = ray.segs.back();
    ray.rho_exit = rho_of(ray.r_exit, L.a, L.c);
  }
  return ray;
}

// x-radius r in [r0, r1] with log r + a r - c = log rho.
double solve_radius(const RaySeg& sg, double rho) {
  const double target = std::log(rho);
  auto g = [&](double r) { return std::log(r) + sg.a * r - sg.c - target; };
  double lo = sg.r0, hi = sg.r1;
  if (hi == kInf) {
    hi = std::max(1.0, 2 * lo);
    while (g(hi) < 0) hi *= 2;
  }
  if (lo <= 0) {
    lo = std::min(hi, 1.0);
    while (g(lo) > 0) lo *= 0.5;
  }
  double r = std::clamp(rho * std::exp(sg.c), lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double v = g(r);
    if (v == 0) break;
    (v < 0 ? lo : hi) = r;
    double nr = r - v / (1 / r + sg.a);
    if (!(nr > lo && nr < hi)) nr = 0.5 * (lo + hi);
    if (std::abs(nr - r) <= 1e-16 * r) {
      r = nr;
      break;
    }
    r = nr;
    if (hi - lo <= 4e-16 * hi) break;
  }
  return r;
}

// Faces of the polyhedral epigraph containing (x, t); unique when exactly one.
int face_count(const Polyhedral& P, const Vec& x, double t) {
  double best = -kInf;
  for (std::size_t i = 0; i < P.slopes.size(); ++i) best = std::max(best, P.slopes[i].dot(x) - P.offsets[i]);
  const double tol = 1e-10 * (1 + std::abs(best) + x.norm());
  int count = 0;
  if (std::abs(t - best) <= tol)
    for (std::size_t i = 0; i < P.slopes.size(); ++i)
      if (P.slopes[i].dot(x) - P.offsets[i] >= best - tol) ++count;
  for (std::size_t j = 0; j < P.normals.size(); ++j) {
    const double htol = 1e-10 * (1 + std::abs(P.heights[j]) + x.norm() * P.normals[j].norm());
    if (std::abs(P.normals[j].dot(x) - P.heights[j]) <= htol) ++count;
  }
  return count;
}

double bisect_radial(const EpsClassFunction& E, const Vec& u, double* s_out_hi = nullptr) {
  const ConvexFunction& phi = E.phi;
  const double nu = u.norm();
  if (nu == 0) {
    const double s = std::exp(-evaluate(phi, u));
    if (s_out_hi) *s_out_hi = s;
    return s;
  }
  double lo = 0.5 * std::min(std::exp(-(E.min_value + 0.5)), E.eps / nu);
  for (int k = 0; k < 200 && !(margin(phi, u, lo) > 0); ++k) lo *= 0.5;
  if (!(margin(phi, u, lo) > 0)) throw std::domain_error("curvilinear_radial: lower bracket not certified");
  const double C = witness_C(E.witness);
  double hi = C < kInf ? 2 * C * std::log1p(nu) / nu : 2 * lo;
  hi = std::max(hi, 2 * lo);
  for (int k = 0; k < 400 && !(margin(phi, u, hi) < 0); ++k) hi *= 2;
  if (!(margin(phi, u, hi) < 0)) throw std::domain_error("curvilinear_radial: upper bracket not certified");
  while (std::log(hi / lo) > 1e-13) {
    const double mid = std::sqrt(lo * hi);
    (margin(phi, u, mid) > 0 ? lo : hi) = mid;
  }
  if (s_out_hi) *s_out_hi = hi;
  return std::sqrt(lo * hi);
}

Vec grad_from_normal(const Vec& nrm, const Vec& x0, double s) {
  const int n = static_cast<int>(x0.size());
  const Vec nx = nrm.head(n);
  const double den = nx.dot(x0) - nrm(n);
  return -s * s * nx / den;
}

double jacobian_from(const Vec& u, double s, const Vec& gs) {
  const int n = static_cast<int>(u.size());
  Mat DF(n + 1, n);
  DF.topRows(n) = u * gs.transpose() + s * Mat::Identity(n, n);
  DF.row(n) = -gs.transpose() / s;
  const double d = (DF.transpose() * DF).determinant();
  return std::sqrt(std::max(d, 0.0));
}

Vec domain_normal(const ConvexFunction& phi, const Vec& x) {
  const int n = phi.dim;
  if (const auto* A = std::get_if<Analytic>(&phi.rep)) {
    if (std::holds_alternative<Ball>(A->shape)) {
      const Vec z = x - A->center;
      return wall_normal(z);
    }
  }
  if (const auto* G = std::get_if<Grid>(&phi.rep)) {
    const Vec hi = G->hi();
    int best = 0;
    double bd = kInf, sign = 1;
    for (int k = 0; k < n; ++k) {
      const double dl = std::abs(x(k) - G->lo(k)), dh = std::abs(hi(k) - x(k));
      if (dl < bd) bd = dl, best = k, sign = -1;
      if (dh < bd) bd = dh, best = k, sign = 1;
    }
    Vec th = Vec::Zero(n);
    th(best) = sign;
    return wall_normal(th);
  }
  throw std::domain_error("boundary_param: no wall normal for this representation");
}

}  // namespace

EpsClassFunction make_eps_class(const ConvexFunction& phi, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("make_eps_class: eps must be positive");
  EpsClassFunction E;
  E.phi = phi;
  if (!phi.is_polyhedral())
    if (auto p = as_polyhedral(phi)) E.phi = *p;
  E.eps = eps;
  E.shift = Vec::Zero(phi.dim);
  E.min_value = minimize(E.phi).value;
  const double sup = sampled_ball_sup(E.phi, Vec::Zero(phi.dim), eps, 1000);
  if (!(sup < E.min_value + 0.5))
    throw std::domain_error("make_eps_class: phi(x) < min + 1/2 fails on the eps-ball (sampled sup " +
                            std::to_string(sup - E.min_value) + " above the minimum)");
  E.witness = coercivity_witness(E.phi);
  return E;
}

EpsClassFunction make_eps_class(const ConvexFunction& phi) {
  const EpsTranslation t = translate_to_eps_class(phi);
  EpsClassFunction E = make_eps_class(t.translated, t.eps);
  E.shift = t.v;
  return E;
}

double curvilinear_radial(const EpsClassFunction& E, const Vec& u) { return boundary_param(E, u).s; }

Vec boundary_inverse(const EpiPoint& p) { return std::exp(p.t) * p.x; }

BoundaryPoint boundary_param(const EpsClassFunction& E, const Vec& u) {
  require_dim(u, E.phi.dim, "boundary_param");
  BoundaryPoint bp;
  bp.u = u;
  double s_hi = 0;
  double s = bisect_radial(E, u, &s_hi);
  const double nu = u.norm();

  if (const auto* P = std::get_if<Polyhedral>(&E.phi.rep)) {
    if (nu > 0) {
      // Polish on the face found by bisection.
      const Ray ray = ray_structure(*P, u / nu);
      const double r = s * nu;
      if (ray.wall >= 0 && nu >= ray.rho_exit) {
        s = ray.r_exit / nu;
        bp.wall = true;
        bp.face = ray.wall;
      } else {
        const RaySeg* sg = &ray.segs.front();
        for (const auto& q : ray.segs)
          if (r >= q.r0 && r <= q.r1) sg = &q;
        for (const auto& q : ray.segs)
          if (nu >= q.rho0 && nu <= q.rho1) sg = &q;
        s = solve_radius(*sg, nu) / nu;
        bp.face = sg->piece;
      }
    } else {
      bp.face = active_piece(*P, u);
    }
    bp.s = s;
    bp.point = {s * u, -std::log(s)};
    bp.normal = bp.wall ? wall_normal(P->normals[bp.face]) : graph_normal(P->slopes[bp.face]);
    bp.normal_unique = face_count(*P, bp.point.x, bp.point.t) == 1;
    return bp;
  }

  bp.s = s;
  bp.point = {s * u, -std::log(s)};
  const double v = evaluate(E.phi, bp.point.x);
  const bool outside_hi = evaluate(E.phi, s_hi * u) == kInf;
  if (outside_hi && v < kInf && bp.point.t - v > 1e-8 * (1 + std::abs(v))) {
    bp.wall = true;
    bp.normal = domain_normal(E.phi, bp.point.x);
  } else {
    bp.normal = graph_normal(subgradient(E.phi, bp.point.x));
  }
  return bp;
}

std::optional<Vec> radial_gradient(const EpsClassFunction& E, const Vec& u) {
  const BoundaryPoint bp = boundary_param(E, u);
  if (!bp.normal_unique) return std::nullopt;
  return grad_from_normal(bp.normal, bp.point.x, bp.s);
}

double radial_jacobian(const EpsClassFunction& E, const Vec& u) {
  const auto g = radial_gradient(E, u);
  if (!g) throw std::domain_error("radial_jacobian: normal not unique at F(u)");
  return jacobian_from(u, curvilinear_radial(E, u), *g);
}

namespace {

// Tail of the majorant K log^p(1+rho)/rho^2 over [R, inf), times the sphere area.
double majorant_tail(int n, double K, double R) {
  const int p = 2 * n + 1;
  const double L = std::log(2 * R);
  double sum = 0, fact = 1;
  for (int k = 0; k <= p; ++k) {
    sum += fact * std::pow(L, p - k);
    fact *= (p - k);
  }
  const double area = n == 1 ? 2 : 2 * kPi;
  return area * K * sum / R;
}

struct TailPlan {
  double C, K, R, bound;
};

TailPlan plan_tail(const EpsClassFunction& E) {
  const int n = E.phi.dim;
  TailPlan t;
  t.C = witness_C(E.witness);
  if (!(t.C < kInf)) throw std::domain_error("boundary_integral: no coercivity witness, tail bound unattainable");
  const double e = std::min(E.eps, 0.5);
  t.K = t.C * t.C / e + t.C * (1 + 1 / e);
  t.R = std::exp(1.0);
  while (majorant_tail(n, t.K, t.R) > kTailCutoff) {
    t.R *= 2;
    if (t.R > 1e300) throw std::domain_error("boundary_integral: tail bound unattainable");
  }
  t.bound = majorant_tail(n, t.K, t.R);
  return t;
}

// u-space weight s JF rho^{n-1} at u = rho w on a fixed face.
double face_weight(const Ray& ray, const RaySeg* sg, double rho, const Vec& nrm, int n) {
  double s;
  if (sg) {
    s = solve_radius(*sg, rho) / rho;
  } else {
    s = ray.r_exit / rho;
  }
  const Vec u = rho * ray.omega;
  const Vec x0 = s * u;
  const Vec gs = grad_from_normal(nrm, x0, s);
  return s * jacobian_from(u, s, gs) * std::pow(rho, n - 1);
}

// Per-face integrals along one ray, truncated at rho = R.
Vec ray_face_weights(const Polyhedral& P, const Vec& omega, int n, double R, double tol, double* err) {
  const int N = static_cast<int>(P.slopes.size()), J = static_cast<int>(P.normals.size());
  Vec W = Vec::Zero(N + J);
  const Ray ray = ray_structure(P, omega);
  auto run = [&](const RaySeg* sg, double a, double b, const Vec& nrm) {
    b = std::min(b, R);
    if (!(b > a)) return 0.0;
    double e = 0, v;
    v = 0;
    if (a == 0) {
      // Linear scale near the origin, logarithmic beyond.
      const double c = std::min(b, 1.0);
      v = integrate_gk([&](double rho) { return rho > 0 ? face_weight(ray, sg, rho, nrm, n) : 0.0; }, 0, c, tol, &e);
      if (err) *err += e;
      a = c;
    }
    if (b > a) {
      v += integrate_gk(
          [&](double w) {
            const double rho = std::exp(w);
            return rho * face_weight(ray, sg, rho, nrm, n);
          },
          std::log(a), std::log(b), tol, &e);
      if (err) *err += e;
    }
    return v;
  };
  for (const auto& sg : ray.segs) W(sg.piece) += run(&sg, sg.rho0, sg.rho1, graph_normal(P.slopes[sg.piece]));
  if (ray.wall >= 0) W(N + ray.wall) += run(nullptr, ray.rho_exit, kInf, wall_normal(P.normals[ray.wall]));
  return W;
}

std::vector<double> sector_angles(const Polyhedral& P) {
  std::vector<double> ang = {0, 0.5 * kPi, kPi, 1.5 * kPi, 2 * kPi};
  auto add = [&](double a) {
    a = std::fmod(a + 2 * kPi, 2 * kPi);
    ang.push_back(a);
  };
  for (const auto& v : polyhedral_vertices(P, 2))
    if (v.norm() > 0) add(std::atan2(v(1), v(0)));
  // Cell edges through the origin split rays as well.
  for (std::size_t i = 0; i < P.slopes.size(); ++i)
    for (std::size_t k = i + 1; k < P.slopes.size(); ++k) {
      const Vec d = P.slopes[i] - P.slopes[k];
      if (d.norm() == 0) continue;
      if (std::abs(P.offsets[i] - P.offsets[k]) <= 1e-12 * (1 + std::abs(P.offsets[i]))) {
        add(std::atan2(d(0), -d(1)));
        add(std::atan2(-d(0), d(1)));
      }
    }
  std::sort(ang.begin(), ang.end());
  std::vector<double> out;
  for (double a : ang)
    if (out.empty() || a - out.back() > 1e-12) out.push_back(a);
  return out;
}

BoundaryIntegral polyhedral_boundary_integral(const EpsClassFunction& E, const Polyhedral& P,
                                              const std::vector<TestFunction>& xi, const TailPlan& plan) {
  const int n = E.phi.dim;
  const int N = static_cast<int>(P.slopes.size()), J = static_cast<int>(P.normals.size());
  BoundaryIntegral out;
  out.radius = plan.R;
  out.tail_bound = plan.bound;
  out.C = plan.C;
  Vec W = Vec::Zero(N + J);
  double err = 0;
  if (n == 1) {
    for (double sgn : {1.0, -1.0}) W += ray_face_weights(P, vec1(sgn), 1, plan.R, 1e-12, &err);
  } else if (n == 2) {
    const auto ang = sector_angles(P);
    for (std::size_t k = 0; k + 1 < ang.size(); ++k) {
      const QuadResult q = integrate_gk(
          [&](double al) {
            double e = 0;
            return ray_face_weights(P, vec2(std::cos(al), std::sin(al)), 2, plan.R, 1e-11, &e);
          },
          N + J, ang[k], ang[k + 1], 1e-10 / static_cast<double>(ang.size()));
      W += q.value;
      err += q.error;
    }
  } else {
    throw DimensionError("boundary_integral: dimension must be 1 or 2");
  }
  for (const auto& t : xi) {
    double v = 0;
    for (int i = 0; i < N; ++i)
      if (W(i) != 0) v += t.hat(graph_normal(P.slopes[i])) * W(i);
    for (int j = 0; j < J; ++j)
      if (W(N + j) != 0) v += t.hat(wall_normal(P.normals[j])) * W(N + j);
    out.values.push_back(v);
  }
  out.error = err;
  return out;
}

BoundaryIntegral generic_boundary_integral(const EpsClassFunction& E, const std::vector<TestFunction>& xi,
                                           const TailPlan& plan) {
  const int n = E.phi.dim;
  const int m = static_cast<int>(xi.size());
  BoundaryIntegral out;
  out.radius = plan.R;
  out.tail_bound = plan.bound;
  out.C = plan.C;
  auto point = [&](const Vec& omega, double rho) {
    Vec r = Vec::Zero(m);
    if (rho <= 0) return r;
    const Vec u = rho * omega;
    const BoundaryPoint bp = boundary_param(E, u);
    const Vec gs = grad_from_normal(bp.normal, bp.point.x, bp.s);
    const double w = bp.s * jacobian_from(u, bp.s, gs) * std::pow(rho, n - 1);
    for (int k = 0; k < m; ++k) r(k) = xi[k].hat(bp.normal) * w;
    return r;
  };
  auto ray = [&](const Vec& omega, double tol, double* err) {
    QuadResult a = integrate_gk([&](double rho) { return point(omega, rho); }, m, 0, 1, tol, 20);
    QuadResult b = integrate_gk(
        [&](double w) {
          const double rho = std::exp(w);
          return Vec(rho * point(omega, rho));
        },
        m, 0, std::log(plan.R), tol, 20);
    if (err) *err += a.error + b.error;
    return Vec(a.value + b.value);
  };
  Vec total = Vec::Zero(m);
  double err = 0;
  if (n == 1) {
    total = ray(vec1(1), 1e-10, &err) + ray(vec1(-1), 1e-10, &err);
  } else if (n == 2) {
    const QuadResult q = integrate_gk(
        [&](double al) { return ray(vec2(std::cos(al), std::sin(al)), 1e-9, nullptr); }, m, 0, 2 * kPi, 1e-8, 12);
    total = q.value;
    err = q.error;
  } else {
    throw DimensionError("boundary_integral: dimension must be 1 or 2");
  }
  out.values.assign(total.data(), total.data() + m);
  out.error = err;
  return out;
}

}  // namespace

BoundaryIntegral boundary_integral(const EpsClassFunction& E, const std::vector<TestFunction>& xi) {
  const TailPlan plan = plan_tail(E);
  if (const auto* P = std::get_if<Polyhedral>(&E.phi.rep)) return polyhedral_boundary_integral(E, *P, xi, plan);
  return generic_boundary_integral(E, xi, plan);
}

double boundary_integral(const EpsClassFunction& E, const TestFunction& xi) {
  return boundary_integral(E, std::vector<TestFunction>{xi}).values.front();
}

RadialBoundReport radial_bound_check(double a, double b, const std::vector<Vec>& us) {
  if (!(a > 0)) throw std::invalid_argument("radial_bound_check: a must be positive");
  RadialBoundReport rep;
  rep.C = std::max(1 / a, std::exp(-b));
  rep.samples = us.size();
  rep.holds = true;
  if (us.empty()) return rep;
  const int n = static_cast<int>(us.front().size());
  // psi = a|x| + b; eps keeps psi below its minimum + 1/2 on the eps-ball.
  const EpsClassFunction E = make_eps_class(make_cone(n, a, b), 0.4 / a);
  for (const auto& u : us) {
    const double nu = u.norm();
    if (nu == 0) continue;
    const double ratio = bisect_radial(E, u) * nu / std::log1p(nu);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.holds = rep.max_ratio <= rep.C * (1 + 1e-12);
  return rep;
}

}  // namespace lcm
