#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roughlab/budget.hpp"
#include "roughlab/drift.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/operators.hpp"

namespace roughlab {

/// Forcing f(t, x).
struct ForceSpec {
  enum class Kind { none, steady, power, sampled };
  Kind kind = Kind::none;
  /// steady: f = g(x); power: f = t^{-exponent} g(x).
  std::optional<Field> profile;
  double exponent = 0.0;
  /// sampled: f at every solver time; held at f(t_1) on [0, t_1].
  TimeSampledTrajectory samples;

  static ForceSpec none_force() { return {}; }
  static ForceSpec steady(Field g);
  static ForceSpec power(Field g, double exponent);
  static ForceSpec sampled_force(TimeSampledTrajectory samples);
};

std::string to_string(ForceSpec::Kind kind);

struct SystemSpec {
  ExponentBudget budget;
  std::vector<RoughOperator> operators;
  Field data;
  ForceSpec force;
  double data_scale = 1.0;
  double force_scale = 1.0;
  /// Solver time grid; empty selects default_time_grid(data.grid()).
  std::vector<double> times;
  int workers = 1;

  Theorem variant() const noexcept { return budget.inputs.theorem; }
};

/// Duhamel map of one system on a fixed time grid.
///
/// Per Fourier mode the heat factor e^{-(t-s)|xi|^2} is integrated exactly against a
/// piecewise-linear interpolant of the integrand in s (exponential product rule).
/// [0, t_1] is split into kStartupCells cells on which the trajectory is extrapolated
/// linearly from t_1, t_2. A power-law force profile s^{-b} uses the graded rule on
/// [0, t_1] so its endpoint singularity is integrated exactly.
class MildSolver {
 public:
  static constexpr int kStartupCells = 4;
  static constexpr int kForceSubcells = 4;

  explicit MildSolver(const SystemSpec& spec);

  const std::vector<double>& times() const noexcept;
  Theorem variant() const noexcept;
  const ExponentBudget& budget() const noexcept;
  const Grid& grid() const noexcept;

  /// Copy sharing all precomputed tables, with new amplitude factors.
  MildSolver with_scales(double data_scale, double force_scale) const;
  double data_scale() const noexcept { return data_scale_; }
  double force_scale() const noexcept { return force_scale_; }

  /// g_t * (data_scale theta0): the same code path as heat_trajectory.
  TimeSampledTrajectory heat_term() const;
  /// int_0^t g_{t-s} * f(s) ds scaled by force_scale.
  TimeSampledTrajectory force_term() const;
  /// f(t_i) scaled by force_scale.
  TimeSampledTrajectory force_samples() const;
  TimeSampledTrajectory affine_term() const;
  /// int_0^t g_{t-s} * N(current)(s) ds.
  TimeSampledTrajectory nonlinear_term(const TimeSampledTrajectory& current) const;
  TimeSampledTrajectory step(const TimeSampledTrajectory& current) const;

  WeightedSupNorm resolution(const TimeSampledTrajectory& traj) const;
  WeightedSupNorm data_norm() const;
  WeightedSupNorm forcing_norm() const;

  /// sup_t t^gamma int_0^t (t-s)^{-a} s^{-b} ds for the bilinear and force pairs, by the graded rule.
  double bilinear_time_factor() const;
  double force_time_factor() const;

 private:
  struct Tables;
  std::shared_ptr<const Tables> tables_;
  double data_scale_ = 1.0;
  double force_scale_ = 1.0;
};

TimeSampledTrajectory duhamel_step(const SystemSpec& spec, const TimeSampledTrajectory& current);

struct SolutionTrace {
  /// Every iterate when keep_iterates is set, else the first and the last.
  std::vector<TimeSampledTrajectory> iterates;
  std::vector<WeightedSupNorm> weighted_norms;
  std::vector<double> increment_norms;
  std::vector<double> contraction_factors;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  /// ||final - step(final)|| in the resolution norm, absolute and relative to ||theta^(0)||.
  double residual = 0.0;
  double relative_residual = 0.0;
  double reference_norm = 0.0;
  std::string stop_reason;
  TimeSampledTrajectory final_trajectory;
};

struct PicardOptions {
  int max_iterations = 40;
  /// Relative to the resolution norm of theta^(0) (absolute when that is zero).
  double tolerance = 1e-10;
  bool keep_iterates = false;
};

SolutionTrace picard_solve(const MildSolver& solver, const PicardOptions& options);
SolutionTrace picard_solve(const SystemSpec& spec, int max_iterations, double tolerance);

struct ScanRow {
  double scale = 0.0;
  double data_norm = 0.0;
  double force_norm = 0.0;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double final_factor = 0.0;
  double final_norm = 0.0;
  /// ||nonlinear term of final|| / ||final||^2, converged runs only.
  double bilinear_ratio = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double bilinear_constant = 0.0;
  /// Largest converged scale and the next scale that failed.
  std::optional<double> last_converged;
  std::optional<double> first_failed;
  bool downward_closed = true;
  bool has_bracket() const { return last_converged.has_value() && first_failed.has_value(); }
};

ScanResult smallness_scan(const MildSolver& solver, std::span<const double> scales, const PicardOptions& options);
ScanResult smallness_scan(const SystemSpec& spec, std::span<const double> scales, const PicardOptions& options = {});

}  // namespace roughlab
