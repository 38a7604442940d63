#pragma once

#include <optional>
#include <string>
#include <vector>

namespace roughlab {

enum class Theorem { T1, T2, T3 };

std::string to_string(Theorem theorem);
Theorem theorem_from_string(const std::string& name);

struct BudgetInputs {
  int n = 3;
  double rho = 2.0;
  double alpha = 0.0;
  double q = 2.0;
  double varrho = 2.5;
  Theorem theorem = Theorem::T1;
};

/// Exponent pair (a, b) of a time integrand (t-s)^{-a} s^{-b}.
struct ExponentPair {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

/// Accepted exponent set of one theorem.
struct ExponentBudget {
  BudgetInputs inputs;
  /// Sobolev exponent of the operator bound.
  double s = 0.0;
  /// Young exponents: 1/p = 1/q + 1/s and 1 + 1/q = 1/r + 1/p.
  double p = 0.0;
  double r = 0.0;
  /// Heat-kernel exponent for the force term: 1 + 1/q = 1/r_force + 1/varrho.
  double r_force = 0.0;
  double q_lower = 0.0;

  /// Time weight of the resolution (and data) norm.
  double resolution_weight() const;
  /// Time weight of the force norm.
  double force_weight() const;
  /// (a, b) of the bilinear Duhamel integrand.
  ExponentPair bilinear_pair() const;
  /// (a, b) of the force Duhamel integrand.
  ExponentPair force_pair() const;
};

struct BudgetDecision {
  BudgetInputs inputs;
  std::optional<ExponentBudget> budget;
  std::vector<std::string> violations;
  bool accepted() const { return budget.has_value(); }
};

/// rho n / (rho n + rho - n).
double rough_kernel_threshold(int n, double rho);

/// Checks every hypothesis of the tagged theorem and lists all failures.
BudgetDecision exponent_budget(const BudgetInputs& inputs);

/// Operator-bound admissibility with the non-strict lower bound
/// rho n/(rho n + rho - n) <= q < n (alpha = 0) or the analogous operator bound for alpha > 0.
std::vector<std::string> lemma_violations(int n, double rho, double q, double alpha);

/// s = nq/(n - q(1 + alpha)).
double sobolev_exponent(int n, double q, double alpha);

}  // namespace roughlab
