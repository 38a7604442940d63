#include "roughlab/scaling.hpp"

#include <cmath>
#include <functional>

#include "roughlab/error.hpp"
#include "roughlab/field_ops.hpp"
#include "roughlab/norms.hpp"

namespace roughlab {

namespace {

// Heat flow of exp(-|x|^2/(4a)) (or of its x_1-derivative) at time t, in closed form.
double gaussian_flow(int n, double a, double t, bool derivative, const Point& x) {
  const double s = a + t;
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
  const double g = std::pow(a / s, 0.5 * n) * std::exp(-r2 / (4.0 * s));
  return derivative ? -x[0] / (2.0 * s) * g : g;
}

Point dilate(const Point& x, double lambda) { return {lambda * x[0], lambda * x[1], lambda * x[2]}; }

ScalingIdentity compare(std::string name, double base, double scaled, double tol) {
  const double rel = base == 0.0 ? std::abs(scaled) : std::abs(scaled - base) / std::abs(base);
  return {std::move(name), base, scaled, rel, rel <= tol};
}

}  // namespace

ScalingPowers scaling_powers(Theorem theorem, double alpha) {
  switch (theorem) {
    case Theorem::T1: return {1.0, 3.0, 1.0};
    case Theorem::T2: return {2.0, 4.0, 2.0};
    case Theorem::T3: return {1.0 + alpha, 3.0 + alpha, 1.0 + alpha};
  }
  return {};
}

ScalingReport check_scaling_identities(Theorem theorem, double lambda, const ScalingOptions& options) {
  BudgetInputs in = options.budget;
  if (in.theorem != theorem) throw ConfigurationError("scaling check: budget is tagged " + to_string(in.theorem) +
                                                      " but the check targets " + to_string(theorem));
  const BudgetDecision decision = exponent_budget(in);
  if (!decision.accepted()) throw ConfigurationError("scaling check: budget rejected: " + decision.violations.front());
  const ExponentBudget& budget = *decision.budget;

  power_of_two_exponent(lambda);
  const Grid base(in.n, options.points, options.box_length);
  const Grid comp = base.companion(lambda);
  const std::vector<double> times = options.times.empty() ? default_time_grid(base) : options.times;
  std::vector<double> ctimes;
  for (double t : times) ctimes.push_back(t / (lambda * lambda));
  if (!options.companion_times.empty()) {
    bool ok = options.companion_times.size() == ctimes.size();
    for (std::size_t i = 0; ok && i < ctimes.size(); ++i)
      ok = std::abs(options.companion_times[i] - ctimes[i]) <= 1e-12 * ctimes[i];
    if (!ok) throw ConfigurationError("scaling check: companion time grid is not the base grid divided by lambda^2");
  }

  ScalingReport rep;
  rep.theorem = theorem;
  rep.lambda = lambda;
  rep.powers = scaling_powers(theorem, in.alpha);
  rep.tolerance = options.tolerance;

  const int n = in.n;
  const double a = options.data_width;
  const bool deriv = theorem == Theorem::T2;
  const double l = lambda;
  const ScalingPowers& p = rep.powers;

  // Data: theta_{l0}(x) = l^p theta0(l x).
  const Field data = Field::sample(base, [&](const Point& x) { return gaussian_flow(n, a, 0.0, deriv, x); });
  const Field data_l = Field::sample(
      comp, [&](const Point& x) { return std::pow(l, p.data) * gaussian_flow(n, a, 0.0, deriv, dilate(x, l)); });
  const CaloricVariant variant = caloric_variant_for(theorem);
  rep.identities.push_back(compare("data " + to_string(variant), caloric_besov_norm(data, variant, budget, times).value,
                                   caloric_besov_norm(data_l, variant, budget, ctimes).value, options.tolerance));

  // Force f(t, x) = e^{-t} theta0(x); f_l(t, x) = l^p f(l^2 t, l x).
  TimeSampledTrajectory f, f_l, u, u_l;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i], tc = ctimes[i];
    f.times.push_back(t);
    f.snapshots.push_back(std::exp(-t) * data);
    f_l.times.push_back(tc);
    f_l.snapshots.push_back(Field::sample(comp, [&](const Point& x) {
      return std::pow(l, p.force) * std::exp(-l * l * tc) * gaussian_flow(n, a, 0.0, deriv, dilate(x, l));
    }));
    u.times.push_back(t);
    u.snapshots.push_back(Field::sample(base, [&](const Point& x) { return gaussian_flow(n, a, t, deriv, x); }));
    u_l.times.push_back(tc);
    u_l.snapshots.push_back(Field::sample(comp, [&](const Point& x) {
      return std::pow(l, p.trajectory) * gaussian_flow(n, a, l * l * tc, deriv, dilate(x, l));
    }));
  }
  const ForceSpace fs = force_space_for(theorem);
  rep.identities.push_back(
      compare("force " + to_string(fs), force_norm(f, fs, budget).value, force_norm(f_l, fs, budget).value,
              options.tolerance));
  const ResolutionSpace rs = resolution_space_for(theorem);
  rep.identities.push_back(compare("resolution " + to_string(rs), resolution_norm(u, rs, budget).value,
                                   resolution_norm(u_l, rs, budget).value, options.tolerance));

  rep.pass = true;
  for (const ScalingIdentity& id : rep.identities) rep.pass = rep.pass && id.pass;
  return rep;
}

}  // namespace roughlab
