#include "roughlab/budget.hpp"

#include <algorithm>
#include <cmath>

#include "roughlab/error.hpp"

namespace roughlab {

std::string to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
  }
  return "T1";
}

Theorem theorem_from_string(const std::string& name) {
  if (name == "T1") return Theorem::T1;
  if (name == "T2") return Theorem::T2;
  if (name == "T3") return Theorem::T3;
  throw ConfigurationError("unknown theorem tag '" + name + "' (expected T1, T2 or T3)");
}

double rough_kernel_threshold(int n, double rho) { return rho * n / (rho * n + rho - n); }

double sobolev_exponent(int n, double q, double alpha) { return n * q / (n - q * (1.0 + alpha)); }

double ExponentBudget::resolution_weight() const {
  const double n = inputs.n, q = inputs.q;
  return ((2.0 + inputs.alpha) * q - n) / (2.0 * q);
}

double ExponentBudget::force_weight() const {
  const double n = inputs.n;
  return (3.0 + inputs.alpha) / 2.0 - n / (2.0 * inputs.varrho);
}

ExponentPair ExponentBudget::bilinear_pair() const {
  const double n = inputs.n, q = inputs.q, al = inputs.alpha;
  // (1 + n(1/p - 1/q))/2 and twice the resolution weight.
  return {(n - al * q) / (2.0 * q), ((2.0 + al) * q - n) / q};
}

ExponentPair ExponentBudget::force_pair() const {
  const double n = inputs.n;
  return {(1.0 + n * (1.0 / inputs.varrho - 1.0 / inputs.q)) / 2.0, force_weight()};
}

namespace {

class Checker {
 public:
  void require(bool ok, const char* constraint) {
    if (!ok) violations.emplace_back(constraint);
  }
  std::vector<std::string> violations;
};

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

std::vector<std::string> lemma_violations(int n, double rho, double q, double alpha) {
  Checker c;
  c.require(1.0 < rho && rho < n, "1 < rho < n");
  if (1.0 < rho && rho < n)
    c.require(rough_kernel_threshold(n, rho) <= q, "rho*n/(rho*n+rho-n) <= q (q below rough-kernel threshold)");
  if (alpha == 0.0) {
    c.require(q < n, "q < n");
  } else {
    c.require(0.0 < alpha && alpha < n - 1.0, "0 < alpha < n-1");
    c.require(1.0 < q, "1 < q");
    c.require(q < n / (1.0 + alpha), "q < n/(1+alpha)");
  }
  return std::move(c.violations);
}

BudgetDecision exponent_budget(const BudgetInputs& in) {
  BudgetDecision out;
  out.inputs = in;
  if (in.n != 2 && in.n != 3) throw ConfigurationError("budget dimension must be 2 or 3");
  if (!positive_finite(in.rho) || !positive_finite(in.q) || !positive_finite(in.varrho) || !(in.alpha >= 0.0))
    throw ConfigurationError("budget inputs must be positive (alpha nonnegative)");

  const double n = in.n, rho = in.rho, q = in.q, vr = in.varrho, al = in.alpha;
  const bool kernel_ok = 1.0 < rho && rho < n;
  const double lower = kernel_ok ? rough_kernel_threshold(in.n, rho) : 0.0;
  Checker c;
  c.require(kernel_ok, "1 < rho < n");
  if (in.theorem != Theorem::T3) {
    c.require(al == 0.0, "alpha = 0 for T1/T2");
    if (kernel_ok) {
      c.require(1.0 < lower, "1 < rho*n/(rho*n+rho-n)");
      c.require(lower < q, "rho*n/(rho*n+rho-n) < q (q below rough-kernel threshold)");
    }
    c.require(q < n, "q < n");
    c.require(n < 2.0 * q, "n < 2q");
    c.require(1.0 < vr, "1 < varrho");
    c.require(vr < n, "varrho < n");
    c.require(n < 3.0 * vr, "n < 3 varrho");
  } else {
    c.require(0.0 < al && al < n - 1.0, "0 < alpha < n-1");
    if (kernel_ok) c.require(lower < q, "rho*n/(rho*n+rho-n) < q (q below rough-kernel threshold)");
    c.require(n / (2.0 + al) < q, "n/(2+alpha) < q");
    c.require(q < n / (1.0 + al), "q < n/(1+alpha)");
    c.require(1.0 < vr, "1 < varrho");
    c.require(n / (3.0 + al) < vr, "n/(3+alpha) < varrho");
    c.require(vr < n / (1.0 + al), "varrho < n/(1+alpha)");
  }
  c.require(1.0 / q - 1.0 / n < 1.0 / vr, "1/q - 1/n < 1/varrho");
  c.require(1.0 / vr < 1.0 / q, "1/varrho < 1/q");

  ExponentBudget b;
  b.inputs = in;
  b.q_lower = lower;
  const double denom = n - q * (1.0 + al);
  if (denom > 0.0) {
    b.s = n * q / denom;
    const double inv_p = 1.0 / q + 1.0 / b.s;
    b.p = 1.0 / inv_p;
    c.require(b.p > 1.0, "Young exponent p > 1 (1/q + 1/s < 1)");
    b.r = 1.0 / (1.0 + 1.0 / q - inv_p);
    b.r_force = 1.0 / (1.0 + 1.0 / q - 1.0 / vr);
  }

  out.violations = std::move(c.violations);
  if (out.violations.empty()) out.budget = b;
  return out;
}

}  // namespace roughlab
