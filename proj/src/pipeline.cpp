#include "roughlab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "roughlab/corpus.hpp"
#include "roughlab/inequality.hpp"
#include "roughlab/report.hpp"
#include "roughlab/scaling.hpp"
#include "roughlab/snapshot.hpp"
#include "roughlab/solver.hpp"

namespace roughlab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Serializes every write through the manifest so no emitted file goes unlisted.
class Emitter {
 public:
  Emitter(fs::path dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {}

  void csv(const std::string& name, const CsvTable& table) {
    write_csv(path(name), table);
    manifest_.files.push_back(name);
  }
  void json_file(const std::string& name, const json& value) {
    write_json(path(name), value);
    manifest_.files.push_back(name);
  }
  void snapshot(const std::string& name, const Field& field) {
    write_snapshot(path(name), field);
    manifest_.files.push_back(name);
  }
  void check(std::string name, bool pass, std::string detail = {}) {
    manifest_.checks.push_back({std::move(name), pass, std::move(detail)});
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
  RunManifest& manifest_;
};

ExponentBudget accepted_budget(const ExperimentConfig& cfg) {
  const BudgetDecision d = exponent_budget(cfg.budget);
  if (!d.accepted()) {
    std::string why;
    for (const std::string& v : d.violations) why += (why.empty() ? "" : "; ") + v;
    throw ConfigurationError("budget rejected for " + to_string(cfg.budget.theorem) + ": " + why);
  }
  return *d.budget;
}

Grid config_grid(const ExperimentConfig& cfg) { return Grid(cfg.grid.n, cfg.grid.points, cfg.grid.box_length); }

std::vector<double> solver_times(const ExperimentConfig& cfg) {
  const TimeGridConfig& t = cfg.solver.times;
  if (t.count == 0) return {};
  return log_time_grid(t.t_min, t.t_max, t.count);
}

// ---- calibration store -------------------------------------------------------

struct CalibrationEntry {
  ExponentPair pair;
  bool pass = false;
};

bool same_pair(const ExponentPair& x, const ExponentPair& y) {
  return std::abs(x.a - y.a) <= 1e-14 * std::max(1.0, std::abs(y.a)) &&
         std::abs(x.b - y.b) <= 1e-14 * std::max(1.0, std::abs(y.b));
}

std::vector<CalibrationEntry> load_calibration(const std::string& path) {
  std::vector<CalibrationEntry> out;
  std::ifstream in(path);
  if (!in) return out;
  json doc;
  try {
    doc = json::parse(in);
    for (const json& e : doc.at("pairs")) out.push_back({{e.at("a").get<double>(), e.at("b").get<double>()}, e.at("pass").get<bool>()});
  } catch (const json::exception& e) {
    throw ConfigurationError("calibration file '" + path + "' is malformed: " + e.what());
  }
  return out;
}

json calibration_json(const std::vector<CalibrationEntry>& entries) {
  json pairs = json::array();
  for (const CalibrationEntry& e : entries) pairs.push_back({{"a", e.pair.a}, {"b", e.pair.b}, {"pass", e.pass}});
  return {{"format_version", kConfigFormatVersion}, {"pairs", pairs}};
}

void require_calibration(const Emitter& out, const ExponentBudget& budget) {
  const std::vector<CalibrationEntry> store = load_calibration(out.path(kCalibrationFile));
  for (const auto& [role, pair] : {std::pair{"bilinear", budget.bilinear_pair()}, std::pair{"force", budget.force_pair()}}) {
    const std::string tag = std::string(role) + " pair (a, b) = (" + fmt(pair.a) + ", " + fmt(pair.b) + ")";
    const CalibrationEntry* hit = nullptr;
    for (const CalibrationEntry& e : store)
      if (same_pair(e.pair, pair)) hit = &e;
    if (!hit) throw ConfigurationError("calibration required: run check-beta for the " + tag + " first");
    if (!hit->pass) throw NumericalError("solve refused: the beta check failed for the " + tag);
  }
}

// ---- commands ----------------------------------------------------------------

void run_budget(const ExperimentConfig& cfg, Emitter& out) {
  const BudgetDecision d = exponent_budget(cfg.budget);
  out.json_file("budget.json", to_json(d));
  std::string why;
  for (const std::string& v : d.violations) why += (why.empty() ? "" : "; ") + v;
  out.check("budget " + to_string(cfg.budget.theorem) + " accepted", d.accepted(), why);
}

void run_check_beta(const ExperimentConfig& cfg, Emitter& out) {
  std::vector<ExponentPair> pairs = cfg.beta.pairs;
  if (pairs.empty()) {
    const ExponentBudget b = accepted_budget(cfg);
    pairs = {b.bilinear_pair(), b.force_pair()};
  }
  std::vector<BetaReport> reports;
  json js = json::array();
  for (const ExponentPair& p : pairs) {
    reports.push_back(check_beta_integrals(p.a, p.b, cfg.beta.times));
    js.push_back(to_json(reports.back()));
  }
  out.csv("check-beta.csv", beta_table(reports));
  out.json_file("check-beta.json", {{"reports", js}});

  std::vector<CalibrationEntry> store = load_calibration(out.path(kCalibrationFile));
  for (const BetaReport& r : reports) {
    const ExponentPair p{r.a, r.b};
    bool found = false;
    for (CalibrationEntry& e : store)
      if (same_pair(e.pair, p)) e.pass = r.pass, found = true;
    if (!found) store.push_back({p, r.pass});
    out.check("beta integral a=" + fmt(r.a) + " b=" + fmt(r.b), r.pass);
  }
  out.json_file(kCalibrationFile, calibration_json(store));
}

struct SolveSetup {
  ExponentBudget budget;
  SystemSpec spec;
};

SolveSetup solve_setup(const ExperimentConfig& cfg) {
  const ExponentBudget budget = accepted_budget(cfg);
  const Grid g = config_grid(cfg);
  std::vector<RoughOperator> ops;
  for (const SphereKernel& k : build_component_kernels(cfg.kernel, g.dim())) ops.emplace_back(g, k, budget.inputs.alpha);
  const double w2 = cfg.solver.data_width * cfg.solver.data_width;
  const bool deriv = budget.inputs.theorem == Theorem::T2;
  const Field profile = Field::sample(g, [&](const Point& x) {
    const double e = std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w2));
    return deriv ? -x[0] / w2 * e : e;
  });
  ForceSpec force;
  if (cfg.solver.force.kind == "steady") force = ForceSpec::steady(profile);
  if (cfg.solver.force.kind == "power") force = ForceSpec::power(profile, cfg.solver.force.exponent);
  return {budget, SystemSpec{budget, std::move(ops), profile, std::move(force), cfg.solver.data_scale,
                             cfg.solver.force.scale, solver_times(cfg), cfg.workers}};
}

MildSolver scaled_solver(const ExperimentConfig& cfg, const SystemSpec& spec) {
  MildSolver solver(spec);
  if (cfg.solver.data_norm) {
    const double base = solver.with_scales(1.0, spec.force_scale).data_norm().value;
    if (!(base > 0.0)) throw ConfigurationError("solver.data_norm: the data profile has zero norm");
    solver = solver.with_scales(*cfg.solver.data_norm / base, spec.force_scale);
  }
  return solver;
}

void run_solve(const ExperimentConfig& cfg, Emitter& out) {
  const SolveSetup setup = solve_setup(cfg);
  require_calibration(out, setup.budget);
  const MildSolver solver = scaled_solver(cfg, setup.spec);
  const PicardOptions opt{cfg.solver.max_iterations, cfg.solver.tolerance, false};
  const SolutionTrace trace = picard_solve(solver, opt);

  out.csv("solve_trace.csv", trace_table(trace));
  out.csv("solve_norms.csv", norm_table({{"data", solver.data_norm()},
                                         {"force", solver.forcing_norm()},
                                         {"solution", solver.resolution(trace.final_trajectory)}}));
  out.json_file("solve.json", {{"budget", to_json(exponent_budget(cfg.budget))},
                               {"data_scale", solver.data_scale()},
                               {"force_scale", solver.force_scale()},
                               {"data_norm", to_json(solver.data_norm())},
                               {"force_norm", to_json(solver.forcing_norm())},
                               {"bilinear_time_factor", solver.bilinear_time_factor()},
                               {"force_time_factor", solver.force_time_factor()},
                               {"times", solver.times()},
                               {"trace", to_json(trace)}});
  if (cfg.solver.snapshots) {
    out.snapshot("solve_data.rdf", solver.data_scale() * setup.spec.data);
    out.snapshot("solve_final.rdf", trace.final_trajectory.snapshots.back());
  }

  out.check("picard converged", trace.converged, trace.stop_reason);
  const auto& cf = trace.contraction_factors;
  bool below = true;
  for (std::size_t k = cf.size() >= 3 ? cf.size() - 3 : 0; k < cf.size(); ++k) below = below && cf[k] < 1.0;
  out.check("final contraction factors below 1", trace.converged && below,
            std::to_string(cf.size()) + " factors recorded");
  out.check("fixed-point residual <= 2 x tolerance",
            trace.converged && trace.relative_residual <= 2.0 * opt.tolerance,
            "relative residual " + fmt(trace.relative_residual));
}

void run_scan(const ExperimentConfig& cfg, Emitter& out) {
  const SolveSetup setup = solve_setup(cfg);
  require_calibration(out, setup.budget);
  const MildSolver solver = scaled_solver(cfg, setup.spec);
  std::vector<double> scales = cfg.solver.scales;
  if (scales.empty()) scales = {0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const ScanResult scan =
      smallness_scan(solver, scales, PicardOptions{cfg.solver.max_iterations, cfg.solver.tolerance, false});
  out.csv("smallness-scan.csv", scan_table(scan));
  out.json_file("smallness-scan.json", to_json(scan));
  out.check("convergence/divergence bracket", scan.has_bracket());
  out.check("converged set downward closed", scan.downward_closed);
}

void record_inequality(const std::string& name, const InequalityReport& rep, Emitter& out) {
  out.csv(name + ".csv", ratio_table(rep));
  out.json_file(name + ".json", to_json(rep));
  out.check(rep.id + " holdout <= " + fmt(rep.holdout_factor) + " x fit",
            rep.all_finite && rep.holdout_max <= rep.holdout_factor * rep.fit_max,
            "fit " + fmt(rep.fit_max) + ", holdout " + fmt(rep.holdout_max));
  for (const ExponentCheck& c : rep.checks) out.check(rep.id + " " + c.name, c.pass);
  if (rep.pointwise)
    out.check(rep.id + " pointwise bound", rep.pointwise->pass,
              std::to_string(rep.pointwise->violations) + " violations");
}

void run_operator_check(const ExperimentConfig& cfg, Emitter& out, bool prop1) {
  const ExponentBudget budget = accepted_budget(cfg);
  const FunctionCorpus corpus(config_grid(cfg), cfg.corpus);
  const SphereKernel kernel = build_component_kernels(cfg.kernel, cfg.grid.n).front();
  const InequalityOptions opt{cfg.workers, cfg.inequality.dilation_pairs, cfg.inequality.dilation_tolerance,
                              cfg.inequality.pointwise};
  const InequalityReport rep =
      prop1 ? check_prop1(kernel, budget, corpus, opt) : check_lemma1(kernel, budget, corpus, opt);
  record_inequality(prop1 ? "check-prop1" : "check-lemma1", rep, out);
}

void run_check_ps(const ExperimentConfig& cfg, Emitter& out) {
  const FunctionCorpus corpus(config_grid(cfg), cfg.corpus);
  const PoincareConfig& p = cfg.poincare;
  const InequalityReport rep =
      check_poincare_sobolev(corpus, p.q, p.sigma, PoincareOptions{p.centers, p.radii, p.seed, cfg.workers});
  record_inequality("check-ps", rep, out);
}

void run_check_scaling(const ExperimentConfig& cfg, Emitter& out) {
  ScalingOptions opt;
  opt.budget = cfg.budget;
  opt.points = cfg.grid.points;
  opt.box_length = cfg.grid.box_length;
  opt.data_width = cfg.scaling.data_width;
  opt.times = solver_times(cfg);
  const ScalingReport rep = check_scaling_identities(cfg.budget.theorem, cfg.scaling.lambda, opt);
  out.csv("check-scaling.csv", scaling_table(rep));
  out.json_file("check-scaling.json", to_json(rep));
  for (const ScalingIdentity& id : rep.identities)
    out.check("scaling " + to_string(rep.theorem) + " " + id.name, id.pass,
              "relative difference " + fmt(id.relative_difference));
}

}  // namespace

bool RunManifest::pass() const {
  if (error) return false;
  for (const CheckOutcome& c : checks)
    if (!c.pass) return false;
  return true;
}

json RunManifest::to_json() const {
  json cs = json::array();
  for (const CheckOutcome& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  json out{{"command", command},     {"config_hash", config_hash}, {"code_version", code_version},
           {"started", started},     {"finished", finished},       {"output_dir", output_dir},
           {"workers", workers},     {"files", files},             {"checks", cs},
           {"pass", pass()}};
  out["error"] = error ? json(*error) : json(nullptr);
  return out;
}

std::string resolve_output_dir(const ExperimentConfig& config, const RunOverrides& overrides) {
  if (overrides.output_dir) return *overrides.output_dir;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return kDefaultOutputDir;
}

RunManifest run(const ExperimentConfig& config, const RunOverrides& overrides) {
  ExperimentConfig cfg = config;
  if (overrides.workers) {
    if (*overrides.workers < 1) throw ConfigurationError("workers must be >= 1");
    cfg.workers = *overrides.workers;
  }
  RunManifest manifest;
  manifest.command = to_string(cfg.command);
  manifest.config_hash = config_hash(cfg.source);
  manifest.started = utc_now();
  manifest.output_dir = resolve_output_dir(cfg, overrides);
  manifest.workers = cfg.workers;

  const fs::path dir(manifest.output_dir);
  fs::create_directories(dir);
  Emitter out(dir, manifest);
  try {
    switch (cfg.command) {
      case Command::budget: run_budget(cfg, out); break;
      case Command::check_beta: run_check_beta(cfg, out); break;
      case Command::solve: run_solve(cfg, out); break;
      case Command::smallness_scan: run_scan(cfg, out); break;
      case Command::check_lemma1: run_operator_check(cfg, out, false); break;
      case Command::check_prop1: run_operator_check(cfg, out, true); break;
      case Command::check_ps: run_check_ps(cfg, out); break;
      case Command::check_scaling: run_check_scaling(cfg, out); break;
    }
  } catch (const std::exception& e) {
    manifest.error = e.what();
  }
  manifest.finished = utc_now();
  write_json((dir / kManifestFile).string(), manifest.to_json());
  return manifest;
}

int exit_code(const RunManifest& manifest) {
  if (manifest.error) return 2;
  return manifest.pass() ? 0 : 1;
}

}  // namespace roughlab
