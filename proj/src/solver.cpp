#include "roughlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "roughlab/error.hpp"
#include "roughlab/heat.hpp"
#include "roughlab/parallel.hpp"
#include "roughlab/quadrature.hpp"
#include "roughlab/spectral.hpp"

namespace roughlab {

ForceSpec ForceSpec::steady(Field g) {
  ForceSpec f;
  f.kind = Kind::steady;
  f.profile = std::move(g);
  return f;
}

ForceSpec ForceSpec::power(Field g, double exponent) {
  if (!(exponent < 1.0)) throw DomainError("power force t^{-b} needs b < 1 to be integrable at t = 0");
  ForceSpec f;
  f.kind = Kind::power;
  f.profile = std::move(g);
  f.exponent = exponent;
  return f;
}

ForceSpec ForceSpec::sampled_force(TimeSampledTrajectory samples) {
  ForceSpec f;
  f.kind = Kind::sampled;
  f.samples = std::move(samples);
  return f;
}

std::string to_string(ForceSpec::Kind kind) {
  switch (kind) {
    case ForceSpec::Kind::none: return "none";
    case ForceSpec::Kind::steady: return "steady";
    case ForceSpec::Kind::power: return "power";
    case ForceSpec::Kind::sampled: return "sampled";
  }
  return "none";
}

//===----------------------------------------------------------------------===//
// Precomputed tables
//===----------------------------------------------------------------------===//

struct MildSolver::Tables {
  Tables(ExponentBudget b, Field d) : budget(b), grid(d.grid()), data(std::move(d)) {}

  ExponentBudget budget;
  Grid grid;
  Field data;
  std::unique_ptr<DriftEvaluator> drift;
  ForceSpec force;
  int workers = 1;
  std::vector<double> times;
  // 0 = nodes[0] < ... < nodes[S] = t_1 < nodes[S+1] = t_2 < ...
  std::vector<double> nodes;
  // Distinct |xi|^2 classes and the class of every stored mode.
  std::vector<int> mode_class;
  std::vector<double> class_kappa;
  // Step j (nodes[j-1] -> nodes[j]) and class c live at (j-1) * classes + c.
  std::vector<double> decay, w_new, w_old;
  TimeSampledTrajectory heat;
  TimeSampledTrajectory force_duhamel;
  TimeSampledTrajectory force_values;

  std::size_t classes() const { return class_kappa.size(); }
  std::size_t steps() const { return nodes.size() - 1; }

  // Runs the exponential recursion over all nodes; node_values[j] is the integrand at nodes[j].
  TimeSampledTrajectory integrate(const std::vector<Spectrum>& node_values, const std::string& label) const;
};

namespace {

constexpr double kMaxTimeRatio = 2.0;

void validate_times(const std::vector<double>& times) {
  if (times.size() < 3) throw ConfigurationError("solver time grid needs at least 3 points");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw ConfigurationError("solver times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigurationError("solver times must increase strictly");
    if (i > 0 && times[i] / times[i - 1] > kMaxTimeRatio)
      throw ConfigurationError("time grid too coarse: quadrature weights undefined for t_" + std::to_string(i + 1) +
                               "/t_" + std::to_string(i) + " = " + std::to_string(times[i] / times[i - 1]) +
                               " > 2");
  }
}

}  // namespace

TimeSampledTrajectory MildSolver::Tables::integrate(const std::vector<Spectrum>& node_values,
                                                    const std::string& label) const {
  const std::size_t S = static_cast<std::size_t>(kStartupCells);
  const std::size_t D = classes();
  const std::size_t modes = grid.spectral_size();
  std::vector<Spectrum> outputs(times.size(), Spectrum(grid));
  std::vector<std::complex<double>> acc(modes, 0.0);
  for (std::size_t j = 1; j <= steps(); ++j) {
    const double* E = &decay[(j - 1) * D];
    const double* a = &w_new[(j - 1) * D];
    const double* b = &w_old[(j - 1) * D];
    const auto nj = node_values[j].coeffs();
    const auto np = node_values[j - 1].coeffs();
    for (std::size_t m = 0; m < modes; ++m) {
      const int c = mode_class[m];
      acc[m] = E[c] * acc[m] + a[c] * nj[m] + b[c] * np[m];
    }
    if (j >= S) std::copy(acc.begin(), acc.end(), outputs[j - S].coeffs().begin());
  }
  TimeSampledTrajectory out;
  out.metadata = label;
  out.times = times;
  out.snapshots.assign(times.size(), Field(grid));
  parallel_for(times.size(), workers, [&](std::size_t i) { out.snapshots[i] = inverse(outputs[i]); });
  return out;
}

MildSolver::MildSolver(const SystemSpec& spec) : data_scale_(spec.data_scale), force_scale_(spec.force_scale) {
  auto t = std::make_shared<Tables>(spec.budget, spec.data);
  t->force = spec.force;
  t->workers = spec.workers;
  const Grid& grid = t->grid;
  const Theorem variant = spec.variant();
  if (spec.budget.inputs.n != grid.dim()) throw ConfigurationError("budget dimension does not match the data grid");
  for (const auto& op : spec.operators)
    if (op.alpha() != spec.budget.inputs.alpha) throw ConfigurationError("operator alpha differs from the budget alpha");
  t->drift = std::make_unique<DriftEvaluator>(variant, spec.operators);
  if (variant == Theorem::T2 && !is_mean_zero(spec.data, 1e-10)) throw ConfigurationError("T2 data must be mean-zero");

  t->times = spec.times.empty() ? default_time_grid(grid) : spec.times;
  validate_times(t->times);
  const double t1 = t->times[0];
  t->nodes.push_back(0.0);
  for (int k = 1; k < kStartupCells; ++k) t->nodes.push_back(t1 * k / kStartupCells);
  for (double tt : t->times) t->nodes.push_back(tt);

  // Mode classes by integer |k|^2.
  long max_norm = 0;
  for_each_mode(grid, [&](std::size_t, const WaveVector& w) { max_norm = std::max(max_norm, w.lattice_norm2); });
  std::vector<int> lookup(static_cast<std::size_t>(max_norm + 1), -1);
  t->mode_class.resize(grid.spectral_size());
  const double k0 = grid.fundamental();
  for_each_mode(grid, [&](std::size_t flat, const WaveVector& w) {
    int& slot = lookup[static_cast<std::size_t>(w.lattice_norm2)];
    if (slot < 0) {
      slot = static_cast<int>(t->class_kappa.size());
      t->class_kappa.push_back(k0 * k0 * static_cast<double>(w.lattice_norm2));
    }
    t->mode_class[flat] = slot;
  });

  const std::size_t D = t->classes();
  t->decay.resize(t->steps() * D);
  t->w_new.resize(t->steps() * D);
  t->w_old.resize(t->steps() * D);
  for (std::size_t j = 1; j <= t->steps(); ++j) {
    const double dt = t->nodes[j] - t->nodes[j - 1];
    for (std::size_t c = 0; c < D; ++c) {
      const double z = t->class_kappa[c] * dt;
      const double p1 = phi1(z), ps = psi(z);
      t->decay[(j - 1) * D + c] = std::exp(-z);
      t->w_new[(j - 1) * D + c] = dt * (p1 - ps);
      t->w_old[(j - 1) * D + c] = dt * ps;
    }
  }

  t->heat = heat_trajectory(spec.data, t->times);

  // Force Duhamel term and samples, unscaled.
  const ForceSpec& f = spec.force;
  t->force_values.times = t->times;
  t->force_values.metadata = "force";
  t->force_duhamel.times = t->times;
  t->force_duhamel.metadata = "force-duhamel";
  if (f.kind == ForceSpec::Kind::none) {
    t->force_values.snapshots.assign(t->times.size(), Field(grid));
    t->force_duhamel.snapshots.assign(t->times.size(), Field(grid));
  } else if (f.kind == ForceSpec::Kind::sampled) {
    if (f.samples.times != t->times) throw ConfigurationError("sampled force must be given on the solver time grid");
    f.samples.validate();
    if (!(f.samples.grid() == grid)) throw ConfigurationError("sampled force grid differs from the data grid");
    if (variant == Theorem::T2)
      for (const auto& s : f.samples.snapshots)
        if (!is_mean_zero(s, 1e-10)) throw ConfigurationError("T2 force must be mean-zero");
    t->force_values.snapshots = f.samples.snapshots;
    std::vector<Spectrum> values;
    const Spectrum first = forward(f.samples.snapshots.front());
    for (int k = 0; k < kStartupCells; ++k) values.push_back(first);
    for (const auto& s : f.samples.snapshots) values.push_back(forward(s));
    t->force_duhamel = t->integrate(values, "force-duhamel");
  } else {
    if (!f.profile || !(f.profile->grid() == grid)) throw ConfigurationError("force profile missing or on a different grid");
    if (variant == Theorem::T2 && !is_mean_zero(*f.profile, 1e-10)) throw ConfigurationError("T2 force must be mean-zero");
    const double b = f.kind == ForceSpec::Kind::power ? f.exponent : 0.0;
    auto tau = [b](double s) { return b == 0.0 ? 1.0 : std::pow(s, -b); };
    for (double tt : t->times) t->force_values.snapshots.push_back(tau(tt) * *f.profile);

    // Theta_i(kappa) = int_0^{t_i} e^{-(t_i - s) kappa} tau(s) ds.
    const std::size_t M = t->times.size();
    std::vector<double> theta(M * D);
    GradedRuleOptions opts;
    opts.levels = 30;
    opts.points_per_cell = 12;
    parallel_for(D, spec.workers, [&](std::size_t c) {
      const double kappa = t->class_kappa[c];
      double acc = graded_product_integral(
          t1, 0.0, b, 0.0, t1, [&](double s) { return std::exp(-(t1 - s) * kappa); }, false, true, opts);
      theta[c] = acc;
      for (std::size_t i = 1; i < M; ++i) {
        const double lo = t->times[i - 1], hi = t->times[i];
        const double dt = (hi - lo) / kForceSubcells;
        for (int q = 0; q < kForceSubcells; ++q) {
          const double s0 = lo + q * dt, s1 = (q + 1 == kForceSubcells) ? hi : lo + (q + 1) * dt;
          const double z = kappa * (s1 - s0);
          const double ps = psi(z);
          acc = std::exp(-z) * acc + (s1 - s0) * ((phi1(z) - ps) * tau(s1) + ps * tau(s0));
        }
        theta[i * D + c] = acc;
      }
    });
    const Spectrum gs = forward(*f.profile);
    t->force_duhamel.snapshots.assign(M, Field(grid));
    parallel_for(M, spec.workers, [&](std::size_t i) {
      Spectrum s = gs;
      for (std::size_t m = 0; m < s.size(); ++m) s[m] *= theta[i * D + static_cast<std::size_t>(t->mode_class[m])];
      t->force_duhamel.snapshots[i] = inverse(s);
    });
  }
  tables_ = std::move(t);
}

const std::vector<double>& MildSolver::times() const noexcept { return tables_->times; }
Theorem MildSolver::variant() const noexcept { return tables_->budget.inputs.theorem; }
const ExponentBudget& MildSolver::budget() const noexcept { return tables_->budget; }
const Grid& MildSolver::grid() const noexcept { return tables_->grid; }

MildSolver MildSolver::with_scales(double data_scale, double force_scale) const {
  MildSolver out = *this;
  out.data_scale_ = data_scale;
  out.force_scale_ = force_scale;
  return out;
}

TimeSampledTrajectory MildSolver::heat_term() const {
  return data_scale_ == 1.0 ? tables_->heat : scaled(tables_->heat, data_scale_);
}

TimeSampledTrajectory MildSolver::force_term() const {
  return force_scale_ == 1.0 ? tables_->force_duhamel : scaled(tables_->force_duhamel, force_scale_);
}

TimeSampledTrajectory MildSolver::force_samples() const {
  return force_scale_ == 1.0 ? tables_->force_values : scaled(tables_->force_values, force_scale_);
}

TimeSampledTrajectory MildSolver::affine_term() const {
  TimeSampledTrajectory out = heat_term();
  out.metadata = "affine";
  if (tables_->force.kind != ForceSpec::Kind::none && force_scale_ != 0.0) {
    const TimeSampledTrajectory f = force_term();
    for (std::size_t i = 0; i < out.size(); ++i) out.snapshots[i] += f.snapshots[i];
  }
  if (variant() == Theorem::T2)
    for (auto& s : out.snapshots) s = project_mean_zero(s);
  return out;
}

TimeSampledTrajectory MildSolver::nonlinear_term(const TimeSampledTrajectory& current) const {
  const Tables& t = *tables_;
  if (current.times != t.times) throw ConfigurationError("trajectory is not on the solver time grid");
  const std::size_t S = static_cast<std::size_t>(kStartupCells);
  const std::size_t J = t.nodes.size();
  // Linear extrapolation from (t_1, t_2) on the startup cells.
  const double t1 = t.times[0], t2 = t.times[1];
  std::vector<Spectrum> values(J, Spectrum(t.grid));
  parallel_for(J, t.workers, [&](std::size_t j) {
    if (j >= S) {
      values[j] = t.drift->evaluate_spectrum(current.snapshots[j - S]);
      return;
    }
    const double c = (t.nodes[j] - t1) / (t2 - t1);
    Field theta = current.snapshots[0];
    for (std::size_t m = 0; m < theta.size(); ++m)
      theta[m] += c * (current.snapshots[1][m] - current.snapshots[0][m]);
    values[j] = t.drift->evaluate_spectrum(theta);
  });
  return t.integrate(values, "nonlinear");
}

TimeSampledTrajectory MildSolver::step(const TimeSampledTrajectory& current) const {
  TimeSampledTrajectory out = affine_term();
  const TimeSampledTrajectory nl = nonlinear_term(current);
  for (std::size_t i = 0; i < out.size(); ++i) out.snapshots[i] += nl.snapshots[i];
  if (variant() == Theorem::T2)
    for (auto& s : out.snapshots) s = project_mean_zero(s);
  out.metadata = "iterate";
  return out;
}

WeightedSupNorm MildSolver::resolution(const TimeSampledTrajectory& traj) const {
  const ResolutionSpace space = resolution_space_for(variant());
  const NormDescriptor desc = resolution_descriptor(space, budget());
  const double gamma = budget().resolution_weight();
  traj.validate();
  std::vector<double> values(traj.size());
  parallel_for(traj.size(), tables_->workers, [&](std::size_t i) {
    values[i] = std::pow(traj.times[i], gamma) * space_norm(traj.snapshots[i], desc);
  });
  WeightedSupNorm out;
  out.space = to_string(space);
  out.norm = desc;
  out.weight_exponent = gamma;
  std::size_t best = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    if (values[i] > out.value) {
      out.value = values[i];
      best = i;
    }
  }
  out.argmax_time = traj.times[best];
  out.boundary = out.value > 0.0 && (best == 0 || best + 1 == values.size());
  return out;
}

WeightedSupNorm MildSolver::data_norm() const {
  return caloric_besov_norm(data_scale_ * tables_->data, caloric_variant_for(variant()), budget(), tables_->times);
}

WeightedSupNorm MildSolver::forcing_norm() const {
  if (tables_->force.kind == ForceSpec::Kind::none) {
    WeightedSupNorm out;
    out.space = to_string(force_space_for(variant()));
    out.weight_exponent = budget().force_weight();
    out.norm = force_descriptor(force_space_for(variant()), budget());
    return out;
  }
  return force_norm(force_samples(), force_space_for(variant()), budget());
}

double MildSolver::bilinear_time_factor() const {
  const ExponentPair p = budget().bilinear_pair();
  return graded_product_integral(1.0, p.a, p.b, 0.0, 1.0, [](double) { return 1.0; });
}

double MildSolver::force_time_factor() const {
  const ExponentPair p = budget().force_pair();
  return graded_product_integral(1.0, p.a, p.b, 0.0, 1.0, [](double) { return 1.0; });
}

TimeSampledTrajectory duhamel_step(const SystemSpec& spec, const TimeSampledTrajectory& current) {
  return MildSolver(spec).step(current);
}

//===----------------------------------------------------------------------===//
// Picard iteration
//===----------------------------------------------------------------------===//

namespace {

// Increments at this relative size are rounding noise; the iterate is a fixed point.
constexpr double kRoundoffFloor = 1e-13;
constexpr double kDivergenceFactor = 1.5;
constexpr double kBlowupRatio = 1e8;

}  // namespace

SolutionTrace picard_solve(const MildSolver& solver, const PicardOptions& options) {
  if (options.max_iterations < 3) throw ConfigurationError("picard_solve needs max_iterations >= 3");
  if (!(options.tolerance > 0.0)) throw ConfigurationError("picard tolerance must be positive");
  SolutionTrace trace;
  TimeSampledTrajectory current = solver.affine_term();
  WeightedSupNorm norm = solver.resolution(current);
  trace.reference_norm = norm.value;
  trace.weighted_norms.push_back(norm);
  trace.iterates.push_back(current);
  const double ref = norm.value > 0.0 ? norm.value : 1.0;
  const double tol = options.tolerance * ref;

  for (int m = 1; m <= options.max_iterations; ++m) {
    TimeSampledTrajectory next = solver.step(current);
    const WeightedSupNorm next_norm = solver.resolution(next);
    const double inc = solver.resolution(difference(next, current)).value;
    trace.iterations = m;
    trace.weighted_norms.push_back(next_norm);
    if (!trace.increment_norms.empty()) {
      const double prev = trace.increment_norms.back();
      trace.contraction_factors.push_back(prev > 0.0 ? inc / prev : 0.0);
    }
    trace.increment_norms.push_back(inc);
    current = std::move(next);
    if (options.keep_iterates) trace.iterates.push_back(current);

    if (!std::isfinite(inc) || !std::isfinite(next_norm.value) || next_norm.value > kBlowupRatio * ref) {
      trace.diverged = true;
      trace.stop_reason = "iterates blew up";
      break;
    }
    const auto& cf = trace.contraction_factors;
    if (cf.size() >= 2 && cf[cf.size() - 1] > kDivergenceFactor && cf[cf.size() - 2] > kDivergenceFactor) {
      trace.diverged = true;
      trace.stop_reason = "two successive contraction factors above 1.5";
      break;
    }
    const bool at_floor = inc <= kRoundoffFloor * ref;
    bool contracting = cf.size() >= 3;
    for (std::size_t k = cf.size() >= 3 ? cf.size() - 3 : 0; contracting && k < cf.size(); ++k)
      contracting = cf[k] < 1.0;
    if (inc == 0.0 || (inc <= tol && (contracting || at_floor))) {
      trace.converged = true;
      trace.stop_reason = inc == 0.0 ? "exact fixed point" : "increment below tolerance";
      break;
    }
  }
  if (!trace.converged && !trace.diverged) trace.stop_reason = "max_iterations reached";

  if (trace.converged) {
    const TimeSampledTrajectory extra = solver.step(current);
    trace.residual = solver.resolution(difference(extra, current)).value;
    trace.relative_residual = trace.residual / ref;
  }
  if (!options.keep_iterates) trace.iterates.push_back(current);
  trace.final_trajectory = std::move(current);
  return trace;
}

SolutionTrace picard_solve(const SystemSpec& spec, int max_iterations, double tolerance) {
  PicardOptions options;
  options.max_iterations = max_iterations;
  options.tolerance = tolerance;
  return picard_solve(MildSolver(spec), options);
}

ScanResult smallness_scan(const MildSolver& solver, std::span<const double> scales, const PicardOptions& options) {
  ScanResult out;
  double prev = -1.0;
  for (double s : scales) {
    if (!(s >= 0.0) || !(s > prev)) throw ConfigurationError("scan scales must be nonnegative and increasing");
    prev = s;
  }
  const double d0 = solver.data_scale(), f0 = solver.force_scale();
  bool seen_failure = false;
  for (double s : scales) {
    const MildSolver run = solver.with_scales(d0 * s, f0 * s);
    const SolutionTrace trace = picard_solve(run, options);
    ScanRow row;
    row.scale = s;
    row.data_norm = run.data_norm().value;
    row.force_norm = run.forcing_norm().value;
    row.converged = trace.converged;
    row.diverged = trace.diverged;
    row.iterations = trace.iterations;
    row.final_factor = trace.contraction_factors.empty() ? 0.0 : trace.contraction_factors.back();
    row.final_norm = trace.weighted_norms.back().value;
    if (trace.converged && row.final_norm > 0.0) {
      const double nl = run.resolution(run.nonlinear_term(trace.final_trajectory)).value;
      row.bilinear_ratio = nl / (row.final_norm * row.final_norm);
      out.bilinear_constant = std::max(out.bilinear_constant, row.bilinear_ratio);
    }
    if (trace.converged) {
      if (seen_failure) out.downward_closed = false;
      out.last_converged = s;
    } else {
      if (!seen_failure && out.last_converged) out.first_failed = s;
      seen_failure = true;
    }
    out.rows.push_back(row);
  }
  return out;
}

ScanResult smallness_scan(const SystemSpec& spec, std::span<const double> scales, const PicardOptions& options) {
  return smallness_scan(MildSolver(spec), scales, options);
}

}  // namespace roughlab
