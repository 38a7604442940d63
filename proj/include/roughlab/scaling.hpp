#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughlab/budget.hpp"
#include "roughlab/grid.hpp"

namespace roughlab {

/// Amplitude powers of the natural dilation: theta_l(t, x) = l^p theta(l^2 t, l x), and likewise for data and force.
struct ScalingPowers {
  double data = 1.0;
  double force = 3.0;
  double trajectory = 1.0;
};

/// T1: (1, 3, 1); T2: (2, 4, 2); T3: (1 + alpha, 3 + alpha, 1 + alpha).
ScalingPowers scaling_powers(Theorem theorem, double alpha);

struct ScalingIdentity {
  std::string name;
  double base = 0.0;
  double scaled = 0.0;
  double relative_difference = 0.0;
  bool pass = false;
};

struct ScalingReport {
  Theorem theorem = Theorem::T1;
  double lambda = 2.0;
  ScalingPowers powers;
  double tolerance = 0.02;
  std::vector<ScalingIdentity> identities;
  bool pass = false;
};

struct ScalingOptions {
  BudgetInputs budget;
  /// Base grid; the scaled problem lives on grid.companion(lambda).
  int points = 64;
  double box_length = 16.0;
  /// Heat-kernel parameter of the closed-form data exp(-|x|^2 / (4a)).
  double data_width = 0.5;
  /// Base time grid; empty selects default_time_grid(base grid).
  std::vector<double> times;
  /// When given, must equal times / lambda^2.
  std::vector<double> companion_times;
  double tolerance = 0.02;
};

/// Checks the data, force and resolution-norm invariances of the theorem's scaling with
/// closed-form Gaussian data (its x_1-derivative for T2), the exact heat flow of that
/// data as trajectory and force e^{-t} times the data profile.
ScalingReport check_scaling_identities(Theorem theorem, double lambda, const ScalingOptions& options);

}  // namespace roughlab
