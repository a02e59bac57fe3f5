#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lcm/acceptance.hpp"
#include "lcm/io.hpp"
#include "lcm/radial.hpp"
#include "lcm/solver.hpp"
#include "lcm/surface.hpp"
#include "lcm/version.hpp"

using namespace lcm;
using io::json;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kNoConvergence = 2, kCriteriaFailed = 3, kError = 4 };

int verbosity() {
  const char* v = std::getenv("LCMINK_LOG");
  return v ? std::atoi(v) : 0;
}

void log(const std::string& s) {
  if (verbosity() > 0) std::cerr << "lcmink: " << s << '\n';
}

json meta(std::uint64_t seed, double tol) {
  return json{{"version", kVersion}, {"seed", seed}, {"tol", tol}};
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) std::cout << io::dump(j) << '\n';
  else io::write_file(path, j);
}

// A ConvexFunction, or a solve report carrying one under "f".
ConvexFunction read_function(const std::string& path) {
  const json j = io::read_file(path);
  if (!j.contains("kind") && j.contains("f")) return io::function_from_json(j["f"]);
  return io::function_from_json(j);
}

std::vector<Vec> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const char c = static_cast<char>(in.peek());
  std::vector<Vec> out;
  if (c == '[' || c == '{') {
    const json j = json::parse(in);
    const json& arr = j.is_object() ? j.at("u") : j;
    for (const auto& e : arr) out.push_back(io::vec_from_json(e));
    return out;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> xs;
    for (double x; ls >> x;) xs.push_back(x);
    if (xs.empty()) continue;
    out.push_back(Eigen::Map<Vec>(xs.data(), static_cast<int>(xs.size())));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface area measures and the Minkowski problem for log-concave functions"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string input, output, trace_path, g_path, u_path, a_path, b_path;
  double tol = 1e-9;
  int max_iter = 5000;
  std::uint64_t seed = 1;
  std::size_t samples = 200000;
  std::string mode = "auto";
  bool two_sided = false;
  std::vector<double> steps;
  std::vector<int> criteria;

  auto* solve_cmd = app.add_subcommand("solve", "Solve the discrete Minkowski problem for a measure pair");
  solve_cmd->add_option("--input", input, "MeasurePair JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--output", output, "SolveReport JSON (stdout when omitted)");
  solve_cmd->add_option("--trace", trace_path, "objective trace CSV");
  solve_cmd->add_option("--tol", tol, "gradient-norm tolerance");
  solve_cmd->add_option("--max-iter", max_iter, "iteration cap");
  solve_cmd->add_option("--seed", seed, "seed for Monte Carlo integrals (dimension >= 3)");

  auto* meas_cmd = app.add_subcommand("measures", "Surface area measures of e^{-phi}");
  meas_cmd->add_option("--input", input, "ConvexFunction JSON")->required()->check(CLI::ExistingFile);
  meas_cmd->add_option("--output", output, "output JSON");
  meas_cmd->add_option("--samples", samples, "Monte Carlo samples");
  meas_cmd->add_option("--seed", seed, "Monte Carlo seed");
  meas_cmd->add_option("--mode", mode, "auto, exact or mc")->check(CLI::IsMember({"auto", "exact", "mc"}));

  auto* var_cmd = app.add_subcommand("variation", "First variation delta(f, g) by measures and by difference quotients");
  var_cmd->add_option("--f", input, "ConvexFunction JSON for f")->required()->check(CLI::ExistingFile);
  var_cmd->add_option("--g", g_path, "ConvexFunction JSON for g")->required()->check(CLI::ExistingFile);
  var_cmd->add_option("--steps", steps, "difference-quotient steps");
  var_cmd->add_flag("--two-sided", two_sided, "also left quotients (g an indicator, dimension 2)");
  var_cmd->add_option("--output", output, "output JSON");
  var_cmd->add_option("--samples", samples, "Monte Carlo samples when measures are not exact");
  var_cmd->add_option("--seed", seed, "Monte Carlo seed");

  auto* rad_cmd = app.add_subcommand("radial", "Curvilinear radial function, boundary point and gradient as CSV");
  rad_cmd->add_option("--input", input, "ConvexFunction JSON")->required()->check(CLI::ExistingFile);
  rad_cmd->add_option("--u", u_path, "points u (JSON array or CSV rows)")->required()->check(CLI::ExistingFile);
  rad_cmd->add_option("--output", output, "output CSV");

  auto* dist_cmd = app.add_subcommand("distance", "Cosmic distance between two measure pairs");
  dist_cmd->add_option("--a", a_path, "MeasurePair JSON")->required()->check(CLI::ExistingFile);
  dist_cmd->add_option("--b", b_path, "MeasurePair JSON")->required()->check(CLI::ExistingFile);
  dist_cmd->add_option("--output", output, "output JSON");

  auto* ver_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  ver_cmd->add_option("--criteria", criteria, "criterion numbers (all when omitted)")->delimiter(',');
  ver_cmd->add_option("--output", output, "pass/fail table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*solve_cmd) {
      const MeasurePair target = io::pair_from_json(io::read_file(input));
      const ValidationReport vr = validate_pair(target);
      if (!vr.valid()) {
        std::cerr << "lcmink: target is not admissible: " << vr.failure() << '\n';
        return kInvalid;
      }
      SolveOptions opts;
      opts.tol = tol;
      opts.max_iterations = max_iter;
      opts.seed = seed;
      log("solving with " + std::to_string(target.mu.size()) + " mu atoms and " + std::to_string(target.nu.size()) +
          " nu atoms");
      const SolveReport rep = solve(target, opts);
      if (rep.ill_conditioned)
        std::cerr << "lcmink: warning: two mu atoms are " << rep.min_atom_gap << " apart; the problem is ill-conditioned\n";
      json j = io::to_json(rep);
      j["meta"] = meta(seed, tol);
      emit(j, output);
      if (!trace_path.empty()) {
        std::ofstream tr(trace_path);
        tr << "iteration,objective\n" << std::setprecision(17);
        for (std::size_t i = 0; i < rep.trace.size(); ++i) tr << i << ',' << rep.trace[i] << '\n';
      }
      if (!rep.converged) {
        std::cerr << "lcmink: no convergence after " << rep.iterations << " iterations (gradient norm "
                  << rep.state.gradient_norm << "); last state written\n";
        return kNoConvergence;
      }
      return kOk;
    }
    if (*meas_cmd) {
      const LogConcaveDensity f(read_function(input));
      SurfaceMeasures sm;
      if (mode == "exact") sm = surface_measures_exact(f);
      else if (mode == "mc") sm = surface_measures_mc(f, samples, seed);
      else sm = surface_measures(f, samples, seed);
      json j = io::to_json(sm);
      j["meta"] = meta(seed, 0);
      emit(j, output);
      return kOk;
    }
    if (*var_cmd) {
      const LogConcaveDensity f(read_function(input));
      const LogConcaveDensity g(read_function(g_path));
      const SurfaceMeasures sm = surface_measures(f, samples, seed);
      const double dm = delta_via_measures(sm, g);
      const DeltaNumeric dn = delta_numeric(f, g, steps, two_sided);
      auto est = [](const DeltaEstimate& e) {
        json s = json::array(), q = json::array();
        for (double v : e.steps) s.push_back(v);
        for (double v : e.quotients) q.push_back(io::real_to_json(v));
        return json{{"value", io::real_to_json(e.value)}, {"error", e.error}, {"steps", s}, {"quotients", q}};
      };
      json j{{"via_measures", io::real_to_json(dm)}, {"provenance", to_string(sm.provenance)}, {"right", est(dn.right)}};
      if (dn.left) j["left"] = est(*dn.left);
      j["meta"] = meta(seed, 0);
      emit(j, output);
      return kOk;
    }
    if (*rad_cmd) {
      const EpsClassFunction E = make_eps_class(read_function(input));
      const auto us = read_points(u_path);
      std::ostringstream csv;
      csv << std::setprecision(17);
      const int n = E.phi.dim;
      csv << "# version " << kVersion << ", eps " << E.eps << ", shift";
      for (int d = 0; d < n; ++d) csv << ' ' << E.shift(d);
      csv << '\n';
      for (int d = 0; d < n; ++d) csv << "u" << d << ',';
      csv << "s,";
      for (int d = 0; d < n; ++d) csv << "x" << d << ',';
      csv << "t";
      for (int d = 0; d < n; ++d) csv << ",grad" << d;
      csv << '\n';
      for (const auto& u : us) {
        const BoundaryPoint bp = boundary_param(E, u);
        const auto g = radial_gradient(E, u);
        for (int d = 0; d < n; ++d) csv << u(d) << ',';
        csv << bp.s << ',';
        for (int d = 0; d < n; ++d) csv << bp.point.x(d) << ',';
        csv << bp.point.t;
        for (int d = 0; d < n; ++d) {
          csv << ',';
          if (g) csv << (*g)(d);
          else csv << "nan";
        }
        csv << '\n';
      }
      if (output.empty()) std::cout << csv.str();
      else std::ofstream(output) << csv.str();
      return kOk;
    }
    if (*dist_cmd) {
      const MeasurePair a = io::pair_from_json(io::read_file(a_path));
      const MeasurePair b = io::pair_from_json(io::read_file(b_path));
      json j{{"cosmic_distance", cosmic_distance(a, b)}, {"meta", meta(0, 0)}};
      emit(j, output);
      return kOk;
    }
    if (*ver_cmd) {
      std::ostringstream table;
      bool all = true;
      const auto results = run_acceptance(criteria);
      for (const auto& r : results) {
        const std::string line = format_result(r);
        std::cout << line << '\n' << std::flush;
        table << line << '\n';
        all = all && r.passed;
      }
      if (!output.empty()) std::ofstream(output) << table.str();
      return all ? kOk : kCriteriaFailed;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "lcmink: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "lcmink: " << e.what() << '\n';
    return kError;
  }
  return kOk;
}
