#include "roughlab/norms.hpp"

#include <cmath>
#include <sstream>

#include "roughlab/error.hpp"
#include "roughlab/field_ops.hpp"
#include "roughlab/heat.hpp"
#include "roughlab/log.hpp"
#include "roughlab/spectral.hpp"

namespace roughlab {

std::string describe(const NormDescriptor& norm) {
  std::ostringstream ss;
  ss.precision(17);
  switch (norm.kind) {
    case SpaceKind::lebesgue: ss << "L^" << norm.exponent; break;
    case SpaceKind::sobolev_plus: ss << "W^{1," << norm.exponent << "}"; break;
    case SpaceKind::sobolev_minus: ss << "W^{-1," << norm.exponent << "}"; break;
  }
  return ss.str();
}

double sobolev_norm(const Field& field, int order, double exponent) {
  if (order == 1) return lebesgue_norm(gradient_magnitude(field), exponent);
  if (order == -1) {
    if (!is_mean_zero(field)) throw DomainError("negative-order Sobolev norm needs a mean-zero field");
    return lebesgue_norm(apply_multiplier(field, multipliers::fractional_laplacian(-1.0)), exponent);
  }
  throw DomainError("Sobolev order must be +1 or -1");
}

double space_norm(const Field& field, const NormDescriptor& norm) {
  switch (norm.kind) {
    case SpaceKind::lebesgue: return lebesgue_norm(field, norm.exponent);
    case SpaceKind::sobolev_plus: return sobolev_norm(field, 1, norm.exponent);
    case SpaceKind::sobolev_minus: return sobolev_norm(field, -1, norm.exponent);
  }
  return 0.0;
}

void TimeSampledTrajectory::validate() const {
  if (times.size() != snapshots.size()) throw ConfigurationError("trajectory times and snapshots differ in count");
  if (times.empty()) throw ConfigurationError("trajectory is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw ConfigurationError("trajectory times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigurationError("trajectory times must increase strictly");
    if (!(snapshots[i].grid() == snapshots[0].grid())) throw ConfigurationError("trajectory snapshots differ in grid");
  }
}

TimeSampledTrajectory scaled(const TimeSampledTrajectory& traj, double c) {
  TimeSampledTrajectory out = traj;
  for (auto& s : out.snapshots) s *= c;
  return out;
}

TimeSampledTrajectory difference(const TimeSampledTrajectory& a, const TimeSampledTrajectory& b) {
  if (a.times != b.times) throw ConfigurationError("trajectories are sampled at different times");
  TimeSampledTrajectory out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.snapshots[i] -= b.snapshots[i];
  out.metadata = "difference";
  return out;
}

std::vector<double> log_time_grid(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) throw ConfigurationError("time grid needs 0 < t_min < t_max and >= 2 points");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double lo = std::log(t_min), hi = std::log(t_max);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (count - 1));
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

std::vector<double> default_time_grid(const Grid& grid, int count) {
  const double h = grid.spacing(), L = grid.box_length();
  return log_time_grid(4.0 * h * h, L * L / 64.0, count);
}

TimeSampledTrajectory heat_trajectory(const Field& data, std::span<const double> times) {
  TimeSampledTrajectory out;
  out.metadata = "heat";
  const Spectrum ds = forward(data);
  for (double t : times) {
    require_heat_resolved(data.grid(), t);
    out.times.push_back(t);
    out.snapshots.push_back(inverse(apply(ds, multipliers::heat(t))));
  }
  return out;
}

WeightedSupNorm weighted_sup(const TimeSampledTrajectory& traj, const NormDescriptor& norm, double gamma,
                             std::string space) {
  traj.validate();
  WeightedSupNorm out;
  out.space = std::move(space);
  out.norm = norm;
  out.weight_exponent = gamma;
  std::size_t best = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double v = std::pow(traj.times[i], gamma) * space_norm(traj.snapshots[i], norm);
    if (!std::isfinite(v)) throw NumericalError("weighted norm is not finite at t = " + std::to_string(traj.times[i]));
    if (v > out.value) {
      out.value = v;
      best = i;
    }
  }
  out.argmax_time = traj.times[best];
  out.boundary = out.value > 0.0 && (best == 0 || best + 1 == traj.size());
  return out;
}

std::string to_string(CaloricVariant v) {
  switch (v) {
    case CaloricVariant::positive: return "B(n-q)/q";
    case CaloricVariant::negative: return "B-(2q-n)/q";
    case CaloricVariant::fractional: return "B(n-(1+alpha)q)/q";
  }
  return "";
}

std::string to_string(ResolutionSpace s) {
  switch (s) {
    case ResolutionSpace::E: return "E";
    case ResolutionSpace::E_bb: return "E_bb";
    case ResolutionSpace::E_cal: return "E_cal";
  }
  return "";
}

std::string to_string(ForceSpace s) {
  switch (s) {
    case ForceSpace::E_f: return "E_f";
    case ForceSpace::E_bb_f: return "E_bb_f";
    case ForceSpace::E_cal_f: return "E_cal_f";
  }
  return "";
}

ResolutionSpace resolution_space_for(Theorem t) {
  return t == Theorem::T1 ? ResolutionSpace::E : (t == Theorem::T2 ? ResolutionSpace::E_bb : ResolutionSpace::E_cal);
}

ForceSpace force_space_for(Theorem t) {
  return t == Theorem::T1 ? ForceSpace::E_f : (t == Theorem::T2 ? ForceSpace::E_bb_f : ForceSpace::E_cal_f);
}

CaloricVariant caloric_variant_for(Theorem t) {
  return t == Theorem::T1 ? CaloricVariant::positive
                          : (t == Theorem::T2 ? CaloricVariant::negative : CaloricVariant::fractional);
}

namespace {

void require_tag(Theorem expected, const ExponentBudget& budget, const std::string& space) {
  if (budget.inputs.theorem != expected)
    throw ConfigurationError("space " + space + " belongs to " + to_string(expected) + " but the budget is tagged " +
                             to_string(budget.inputs.theorem));
}

Theorem theorem_of(ResolutionSpace s) {
  return s == ResolutionSpace::E ? Theorem::T1 : (s == ResolutionSpace::E_bb ? Theorem::T2 : Theorem::T3);
}

Theorem theorem_of(ForceSpace s) {
  return s == ForceSpace::E_f ? Theorem::T1 : (s == ForceSpace::E_bb_f ? Theorem::T2 : Theorem::T3);
}

}  // namespace

NormDescriptor resolution_descriptor(ResolutionSpace space, const ExponentBudget& budget) {
  const double q = budget.inputs.q;
  return space == ResolutionSpace::E_bb ? NormDescriptor{SpaceKind::lebesgue, q} : NormDescriptor{SpaceKind::sobolev_plus, q};
}

NormDescriptor force_descriptor(ForceSpace space, const ExponentBudget& budget) {
  const double vr = budget.inputs.varrho;
  return space == ForceSpace::E_bb_f ? NormDescriptor{SpaceKind::sobolev_minus, vr} : NormDescriptor{SpaceKind::lebesgue, vr};
}

WeightedSupNorm caloric_besov_norm(const Field& data, CaloricVariant variant, const ExponentBudget& budget,
                                   std::span<const double> times) {
  const Theorem tag = variant == CaloricVariant::positive ? Theorem::T1
                                                          : (variant == CaloricVariant::negative ? Theorem::T2 : Theorem::T3);
  require_tag(tag, budget, to_string(variant));
  const ResolutionSpace space = resolution_space_for(tag);
  WeightedSupNorm out = weighted_sup(heat_trajectory(data, times), resolution_descriptor(space, budget),
                                     budget.resolution_weight(), to_string(variant));
  if (out.boundary) log_warning("sup not interior; widen [t_min, t_max]");
  return out;
}

WeightedSupNorm resolution_norm(const TimeSampledTrajectory& traj, ResolutionSpace space, const ExponentBudget& budget) {
  require_tag(theorem_of(space), budget, to_string(space));
  return weighted_sup(traj, resolution_descriptor(space, budget), budget.resolution_weight(), to_string(space));
}

WeightedSupNorm force_norm(const TimeSampledTrajectory& traj, ForceSpace space, const ExponentBudget& budget) {
  require_tag(theorem_of(space), budget, to_string(space));
  return weighted_sup(traj, force_descriptor(space, budget), budget.force_weight(), to_string(space));
}

}  // namespace roughlab
