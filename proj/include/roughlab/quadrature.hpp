#pragma once

#include <functional>
#include <span>
#include <vector>

namespace roughlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `points` nodes on [-1, 1]; cached and thread-safe.
const QuadratureRule& gauss_legendre(int points);

/// Integral of f over [lo, hi] with a Gauss-Legendre rule.
double gauss_integrate(const std::function<double(double)>& f, double lo, double hi, int points);

struct GradedRuleOptions {
  /// Dyadic cells placed toward each graded endpoint.
  int levels = 60;
  int points_per_cell = 20;
};

/// Integral over [lo, hi] of (t-s)^{-a} s^{-b} g(s) ds for smooth g, with 0 <= lo < hi <= t.
///
/// Endpoints s = 0 and s = t are graded dyadically and the innermost cell absorbs the
/// power weight by a change of variables, so any a < 1, b < 1 is integrated to
/// near machine precision. `grade_lo`/`grade_hi` add grading at an endpoint even when
/// it carries no power singularity (boundary layers, e.g. a steep exponential).
double graded_product_integral(double t, double a, double b, double lo, double hi,
                               const std::function<double(double)>& g, bool grade_lo = false,
                               bool grade_hi = false, const GradedRuleOptions& options = {});

/// phi1(z) = (1 - e^{-z}) / z and psi(z) = (1 - (1 + z) e^{-z}) / z^2 for z >= 0.
///
/// int_0^D e^{-k(D-u)} [N0 (1 - u/D) + N1 u/D] du = D[(phi1 - psi) N1 + psi N0] with z = kD.
double phi1(double z);
double psi(double z);

}  // namespace roughlab
