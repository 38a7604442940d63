#include "roughlab/drift.hpp"

#include <string>

#include "roughlab/error.hpp"
#include "roughlab/spectral.hpp"

namespace roughlab {

DriftEvaluator::DriftEvaluator(Theorem variant, std::vector<RoughOperator> operators)
    : variant_(variant), operators_(std::move(operators)) {
  if (operators_.empty()) throw ConfigurationError("drift needs one operator per component");
  const Grid& g = operators_.front().grid();
  if (static_cast<int>(operators_.size()) != g.dim())
    throw ConfigurationError("drift needs " + std::to_string(g.dim()) + " operators, got " +
                             std::to_string(operators_.size()));
  for (const auto& op : operators_) {
    if (!(op.grid() == g)) throw ConfigurationError("drift operators live on different grids");
    const bool fractional = op.alpha() > 0.0;
    if (variant_ == Theorem::T3 && !fractional) throw ConfigurationError("T3 drift needs alpha > 0 operators");
    if (variant_ != Theorem::T3 && fractional) throw ConfigurationError("T1/T2 drift needs alpha = 0 operators");
  }
}

Spectrum DriftEvaluator::evaluate_spectrum(const Field& theta) const {
  const Grid& g = theta.grid();
  if (!(g == operators_.front().grid())) throw ConfigurationError("drift field grid differs from operator grid");
  const int n = g.dim();
  const Spectrum ts = forward(theta);
  if (variant_ == Theorem::T2) {
    Spectrum psi = apply(ts, multipliers::fractional_laplacian(-1.0));
    Spectrum out(g);
    for (int k = 0; k < n; ++k) {
      const Field flux = pointwise_product(inverse(apply_rough(operators_[k], psi)), theta);
      const Spectrum d = apply(forward(flux), multipliers::derivative(k));
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
    }
    return out;
  }
  Field acc(g);
  for (int k = 0; k < n; ++k) {
    const Field tk = inverse(apply_rough(operators_[k], ts));
    const Field dk = inverse(apply(ts, multipliers::derivative(k)));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += tk[i] * dk[i];
  }
  return forward(acc);
}

Field DriftEvaluator::evaluate(const Field& theta) const {
  if (variant_ == Theorem::T2) {
    if (!is_mean_zero(theta, 1e-10)) throw DomainError("T2 drift needs a mean-zero field");
    return inverse(evaluate_spectrum(theta));
  }
  const Grid& g = theta.grid();
  const Spectrum ts = forward(theta);
  Field acc(g);
  for (int k = 0; k < g.dim(); ++k) {
    const Field tk = inverse(apply_rough(operators_[k], ts));
    const Field dk = inverse(apply(ts, multipliers::derivative(k)));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += tk[i] * dk[i];
  }
  return acc;
}

Field drift_term(Theorem variant, const Field& theta, const std::vector<RoughOperator>& operators) {
  return DriftEvaluator(variant, operators).evaluate(theta);
}

}  // namespace roughlab
