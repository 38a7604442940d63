#pragma once

#include <vector>

#include "roughlab/budget.hpp"
#include "roughlab/grid.hpp"
#include "roughlab/operators.hpp"

namespace roughlab {

/// Nonlinear drift of a system, evaluated spectrally with pointwise products.
///
///   T1: sum_k T_k(theta) d_k theta
///   T2: sum_k d_k( T_k((-Delta)^{-1/2} theta) theta )
///   T3: sum_k T^alpha_k(theta) d_k theta
class DriftEvaluator {
 public:
  DriftEvaluator(Theorem variant, std::vector<RoughOperator> operators);

  Theorem variant() const noexcept { return variant_; }
  const std::vector<RoughOperator>& operators() const noexcept { return operators_; }

  Field evaluate(const Field& theta) const;
  /// forward(evaluate(theta)), skipping the final inverse for T2.
  Spectrum evaluate_spectrum(const Field& theta) const;

 private:
  Theorem variant_;
  std::vector<RoughOperator> operators_;
};

Field drift_term(Theorem variant, const Field& theta, const std::vector<RoughOperator>& operators);

}  // namespace roughlab
