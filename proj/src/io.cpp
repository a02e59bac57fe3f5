#include "lcm/io.hpp"

#include <fstream>
#include <sstream>

namespace lcm::io {

json real_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double real_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) throw std::invalid_argument("expected a number");
  return j.get<double>();
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(real_to_json(v(i)));
  return a;
}

Vec vec_from_json(const json& j) {
  if (j.is_number()) return vec1(j.get<double>());
  if (!j.is_array()) throw std::invalid_argument("expected a vector");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = real_from_json(j[i]);
  return v;
}

namespace {

json vecs_to_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec_to_json(v));
  return a;
}

std::vector<Vec> vecs_from_json(const json& j) {
  std::vector<Vec> out;
  for (const auto& e : j) out.push_back(vec_from_json(e));
  return out;
}

json reals_to_json(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(real_to_json(x));
  return a;
}

std::vector<double> reals_from_json(const json& j) {
  std::vector<double> out;
  for (const auto& e : j) out.push_back(real_from_json(e));
  return out;
}

void put_affine(json& j, const Analytic& a) {
  j["center"] = vec_to_json(a.center);
  j["linear"] = vec_to_json(a.linear);
  j["constant"] = a.constant;
}

ConvexFunction with_affine(ConvexFunction phi, const json& j) {
  auto& a = std::get<Analytic>(phi.rep);
  if (j.contains("linear")) {
    a.linear = vec_from_json(j["linear"]);
    require_dim(a.linear, phi.dim, "function_from_json: linear");
  }
  if (j.contains("constant")) a.constant = real_from_json(j["constant"]);
  return phi;
}

Vec center_of(const json& j, int n) {
  if (!j.contains("center")) return Vec::Zero(n);
  Vec c = vec_from_json(j["center"]);
  require_dim(c, n, "function_from_json: center");
  return c;
}

}  // namespace

json to_json(const ConvexFunction& phi) {
  json j;
  if (const auto* P = std::get_if<Polyhedral>(&phi.rep)) {
    j["kind"] = "polyhedral";
    j["dim"] = phi.dim;
    j["slopes"] = vecs_to_json(P->slopes);
    j["offsets"] = reals_to_json(P->offsets);
    j["normals"] = vecs_to_json(P->normals);
    j["heights"] = reals_to_json(P->heights);
    return j;
  }
  if (const auto* G = std::get_if<Grid>(&phi.rep)) {
    j["kind"] = "grid";
    j["dim"] = phi.dim;
    j["lo"] = vec_to_json(G->lo);
    j["step"] = vec_to_json(G->step);
    j["shape"] = G->shape;
    j["values"] = reals_to_json(G->values);
    return j;
  }
  const Analytic& a = phi.analytic();
  j["dim"] = phi.dim;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          j["kind"] = "quadratic";
          json A = json::array();
          for (int r = 0; r < s.A.rows(); ++r) A.push_back(vec_to_json(s.A.row(r).transpose()));
          j["A"] = A;
        } else if constexpr (std::is_same_v<T, Cone>) {
          j["kind"] = "cone";
          j["a"] = s.a;
          j["r0"] = s.r0;
        } else if constexpr (std::is_same_v<T, Ball>) {
          j["kind"] = "indicator";
          j["set"] = "ball";
          j["radius"] = s.radius;
        } else {
          j["kind"] = "indicator";
          j["set"] = "polytope";
          j["vertices"] = vecs_to_json(s.vertices);
        }
      },
      a.shape);
  put_affine(j, a);
  return j;
}

ConvexFunction function_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "polyhedral") {
    auto normals = j.contains("normals") ? vecs_from_json(j["normals"]) : std::vector<Vec>{};
    auto heights = j.contains("heights") ? reals_from_json(j["heights"]) : std::vector<double>{};
    return make_polyhedral(vecs_from_json(j.at("slopes")), reals_from_json(j.at("offsets")), std::move(normals),
                           std::move(heights));
  }
  if (kind == "grid") {
    return make_grid(vec_from_json(j.at("lo")), vec_from_json(j.at("step")), j.at("shape").get<std::vector<int>>(),
                     reals_from_json(j.at("values")));
  }
  if (kind == "quadratic") {
    const auto rows = vecs_from_json(j.at("A"));
    const int n = static_cast<int>(rows.size());
    Mat A(n, n);
    for (int r = 0; r < n; ++r) {
      require_dim(rows[r], n, "function_from_json: A");
      A.row(r) = rows[r].transpose();
    }
    return with_affine(make_quadratic(A, center_of(j, n)), j);
  }
  if (kind == "cone") {
    const int n = j.at("dim").get<int>();
    ConvexFunction phi = make_cone(n, j.at("a").get<double>(), 0, center_of(j, n));
    std::get<Cone>(std::get<Analytic>(phi.rep).shape).r0 = j.value("r0", 0.0);
    return with_affine(phi, j);
  }
  if (kind == "indicator") {
    const std::string set = j.at("set").get<std::string>();
    if (set == "ball") {
      const int n = j.at("dim").get<int>();
      return with_affine(make_ball_indicator(n, j.at("radius").get<double>(), center_of(j, n)), j);
    }
    if (set == "polytope" || set == "interval" || set == "polygon") {
      const auto vs = vecs_from_json(j.at("vertices"));
      if (vs.empty()) throw std::invalid_argument("function_from_json: polytope needs vertices");
      const int n = static_cast<int>(vs.front().size());
      ConvexFunction phi;
      if (vs.size() == 1) {
        phi = make_point_indicator(vs.front());
      } else if (n == 1) {
        phi = make_interval_indicator(std::min(vs[0](0), vs[1](0)), std::max(vs[0](0), vs[1](0)));
      } else if (n == 2) {
        std::vector<Vec2> p;
        for (const auto& v : vs) p.emplace_back(v(0), v(1));
        phi = make_polygon_indicator(make_polygon(p));
      } else {
        throw DimensionError("function_from_json: polytope indicators need dimension 1 or 2");
      }
      auto& a = std::get<Analytic>(phi.rep);
      if (j.contains("center")) a.center += center_of(j, n);
      return with_affine(phi, j);
    }
    throw std::invalid_argument("function_from_json: unknown indicator set \"" + set + "\"");
  }
  throw std::invalid_argument("function_from_json: unknown kind \"" + kind + "\"");
}

json to_json(const Polygon& P) {
  json v = json::array();
  for (const auto& p : P.vertices) v.push_back(json::array({p.x(), p.y()}));
  return json{{"vertices", v}};
}

Polygon polygon_from_json(const json& j) {
  std::vector<Vec2> pts;
  for (const auto& e : j.at("vertices")) pts.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return make_polygon(pts);
}

json to_json(const MeasurePair& p) {
  json mu = json::array(), nu = json::array();
  for (const auto& a : p.mu) mu.push_back(json{{"x", vec_to_json(a.x)}, {"m", a.m}});
  for (const auto& a : p.nu) nu.push_back(json{{"theta", vec_to_json(a.theta)}, {"w", a.w}});
  return json{{"dim", p.dim}, {"mu", mu}, {"nu", nu}};
}

MeasurePair pair_from_json(const json& j) {
  std::vector<MuAtom> mu;
  std::vector<NuAtom> nu;
  if (j.contains("mu"))
    for (const auto& a : j["mu"]) mu.push_back({vec_from_json(a.at("x")), real_from_json(a.at("m"))});
  if (j.contains("nu"))
    for (const auto& a : j["nu"]) nu.push_back({vec_from_json(a.at("theta")), real_from_json(a.at("w"))});
  int dim = j.value("dim", 0);
  if (dim == 0) {
    if (!mu.empty()) dim = static_cast<int>(mu.front().x.size());
    else if (!nu.empty()) dim = static_cast<int>(nu.front().theta.size());
  }
  return make_measure_pair(dim, std::move(mu), std::move(nu));
}

json to_json(const SurfaceMeasures& s) {
  json j = to_json(s.pair);
  j["provenance"] = to_string(s.provenance);
  j["f_integral"] = s.f_integral;
  j["tail_bound"] = s.tail_bound;
  if (s.provenance == Provenance::monte_carlo) {
    j["samples"] = s.samples;
    j["seed"] = s.seed;
    j["acceptance"] = s.acceptance;
    j["integral_stderr"] = s.integral_stderr;
  }
  return j;
}

json to_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["max_mass_error"] = r.max_mass_error;
  j["min_atom_gap"] = real_to_json(r.min_atom_gap);
  j["ill_conditioned"] = r.ill_conditioned;
  j["objective"] = real_to_json(r.state.objective);
  j["gradient_norm"] = r.state.gradient_norm;
  j["normalization_shift"] = r.normalization_shift;
  j["alignment"] = vec_to_json(r.alignment);
  j["psi"] = reals_to_json(r.state.psi);
  j["h"] = reals_to_json(r.state.h);
  j["f"] = to_json(r.phi);
  return j;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

std::string dump(const json& j) { return j.dump(2); }

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump(j) << '\n';
}

}  // namespace lcm::io
