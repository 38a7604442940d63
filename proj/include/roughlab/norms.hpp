#pragma once

#include <span>
#include <string>
#include <vector>

#include "roughlab/budget.hpp"
#include "roughlab/grid.hpp"

namespace roughlab {

enum class SpaceKind { lebesgue, sobolev_plus, sobolev_minus };

/// Spatial norm: L^e, W^{1,e} (gradient) or W^{-1,e} (|xi|^{-1}).
struct NormDescriptor {
  SpaceKind kind = SpaceKind::lebesgue;
  double exponent = 2.0;
};

std::string describe(const NormDescriptor& norm);

/// order +1: L^e norm of |grad field|; order -1: L^e norm of |xi|^{-1} field (mean-zero only).
double sobolev_norm(const Field& field, int order, double exponent);
double space_norm(const Field& field, const NormDescriptor& norm);

/// Snapshots of a field at increasing times on one grid.
struct TimeSampledTrajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::string metadata;

  std::size_t size() const noexcept { return times.size(); }
  const Grid& grid() const { return snapshots.front().grid(); }
  /// Throws ConfigurationError unless times increase strictly and grids agree.
  void validate() const;
};

TimeSampledTrajectory scaled(const TimeSampledTrajectory& traj, double c);
TimeSampledTrajectory difference(const TimeSampledTrajectory& a, const TimeSampledTrajectory& b);

/// max_t t^gamma * ||snapshot(t)||.
struct WeightedSupNorm {
  std::string space;
  NormDescriptor norm;
  double weight_exponent = 0.0;
  double value = 0.0;
  double argmax_time = 0.0;
  /// argmax sits at the first or last sampled time.
  bool boundary = false;
};

/// count points log-spaced on [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, int count);
/// 64 points on [(2h)^2, (L/8)^2].
std::vector<double> default_time_grid(const Grid& grid, int count = 64);

TimeSampledTrajectory heat_trajectory(const Field& data, std::span<const double> times);

WeightedSupNorm weighted_sup(const TimeSampledTrajectory& traj, const NormDescriptor& norm, double gamma,
                             std::string space);

/// Caloric characterizations of the data spaces.
enum class CaloricVariant {
  /// sup t^{(2q-n)/(2q)} ||g_t * theta0||_{W^{1,q}}: regularity (n-q)/q, paired with T1.
  positive,
  /// sup t^{(2q-n)/(2q)} ||g_t * theta0||_{L^q}: regularity -(2q-n)/q, paired with T2.
  negative,
  /// sup t^{((2+alpha)q-n)/(2q)} ||g_t * theta0||_{W^{1,q}}: regularity (n-(1+alpha)q)/q, paired with T3.
  fractional,
};

enum class ResolutionSpace { E, E_bb, E_cal };
enum class ForceSpace { E_f, E_bb_f, E_cal_f };

std::string to_string(CaloricVariant v);
std::string to_string(ResolutionSpace s);
std::string to_string(ForceSpace s);
ResolutionSpace resolution_space_for(Theorem theorem);
ForceSpace force_space_for(Theorem theorem);
CaloricVariant caloric_variant_for(Theorem theorem);

/// Emits the warning "sup not interior; widen [t_min, t_max]" when the argmax is at a grid end.
WeightedSupNorm caloric_besov_norm(const Field& data, CaloricVariant variant, const ExponentBudget& budget,
                                   std::span<const double> times);
WeightedSupNorm resolution_norm(const TimeSampledTrajectory& traj, ResolutionSpace space, const ExponentBudget& budget);
WeightedSupNorm force_norm(const TimeSampledTrajectory& traj, ForceSpace space, const ExponentBudget& budget);

NormDescriptor resolution_descriptor(ResolutionSpace space, const ExponentBudget& budget);
NormDescriptor force_descriptor(ForceSpace space, const ExponentBudget& budget);

}  // namespace roughlab
