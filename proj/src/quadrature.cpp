#include "roughlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "roughlab/error.hpp"

namespace roughlab {

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // Recompute the derivative at the converged node.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

// Sum over [lo, hi] of f at mapped Gauss nodes.
template <class F>
double gl(const QuadratureRule& rule, double lo, double hi, F&& f) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

}  // namespace

const QuadratureRule& gauss_legendre(int points) {
  if (points < 1) throw DomainError("Gauss-Legendre rule needs at least one point");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_legendre(points));
  return *slot;
}

double gauss_integrate(const std::function<double(double)>& f, double lo, double hi, int points) {
  return gl(gauss_legendre(points), lo, hi, f);
}

namespace {

// Integral over [e, e + c] (toward = +1) or [e - c, e] (toward = -1) of w(|s-e|) h(s) with
// w(d) = d^{-mu}; dyadic cells shrink toward e, the innermost absorbs d^{-mu} exactly.
template <class H>
double graded_half(double e, double c, int toward, double mu, H&& h, const GradedRuleOptions& opt) {
  const QuadratureRule& rule = gauss_legendre(opt.points_per_cell);
  auto at = [&](double d) { return e + toward * d; };
  double total = 0.0;
  double outer = c;
  for (int k = 0; k < opt.levels; ++k) {
    const double inner = 0.5 * outer;
    total += gl(rule, inner, outer, [&](double d) { return std::pow(d, -mu) * h(at(d)); });
    outer = inner;
  }
  // d = outer * v^{1/(1-mu)} turns d^{-mu} dd into outer^{1-mu}/(1-mu) dv.
  const double expo = 1.0 / (1.0 - mu);
  const double core = gl(rule, 0.0, 1.0, [&](double v) { return h(at(outer * std::pow(v, expo))); });
  return total + std::pow(outer, 1.0 - mu) / (1.0 - mu) * core;
}

}  // namespace

double graded_product_integral(double t, double a, double b, double lo, double hi,
                               const std::function<double(double)>& g, bool grade_lo, bool grade_hi,
                               const GradedRuleOptions& options) {
  if (!(a < 1.0) || !(b < 1.0)) throw DomainError("non-integrable endpoint — violates theorem hypotheses");
  if (!(lo >= 0.0) || !(hi > lo) || !(hi <= t)) throw DomainError("graded rule needs 0 <= lo < hi <= t");
  const bool sing_lo = (lo == 0.0 && b != 0.0);
  const bool sing_hi = (hi == t && a != 0.0);
  const bool left = sing_lo || grade_lo;
  const bool right = sing_hi || grade_hi;

  auto full = [&](double s) { return std::pow(t - s, -a) * std::pow(s, -b) * g(s); };
  if (!left && !right) {
    // Plain composite rule on a few equal cells.
    const int cells = 8;
    const double w = (hi - lo) / cells;
    double total = 0.0;
    for (int i = 0; i < cells; ++i)
      total += gl(gauss_legendre(options.points_per_cell), lo + i * w, lo + (i + 1) * w, full);
    return total;
  }

  const double mid = (left && right) ? 0.5 * (lo + hi) : (left ? hi : lo);
  double total = 0.0;
  if (left) {
    // Weight s^{-b} is split off only when lo is the true singular endpoint.
    const double mu = sing_lo ? b : 0.0;
    total += graded_half(lo, mid - lo, +1, mu, [&](double s) {
      const double rest = sing_lo ? 1.0 : std::pow(s, -b);
      return std::pow(t - s, -a) * rest * g(s);
    }, options);
  }
  if (right) {
    const double mu = sing_hi ? a : 0.0;
    total += graded_half(hi, hi - mid, -1, mu, [&](double s) {
      const double rest = sing_hi ? 1.0 : std::pow(t - s, -a);
      return std::pow(s, -b) * rest * g(s);
    }, options);
  }
  return total;
}

double phi1(double z) {
  if (z < 1e-3) {
    // Alternating series sum (-z)^k / (k+1)!.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 8; ++k) {
      term *= -z / (k + 1);
      sum += term;
    }
    return sum;
  }
  return -std::expm1(-z) / z;
}

double psi(double z) {
  if (z < 0.5) {
    // sum (-z)^k / (k! (k+2)); the closed form cancels catastrophically here.
    double fact = 1.0, power = 1.0, sum = 0.5;
    for (int k = 1; k < 25; ++k) {
      fact *= k;
      power *= -z;
      sum += power / (fact * (k + 2));
    }
    return sum;
  }
  return (-std::expm1(-z) - z * std::exp(-z)) / (z * z);
}

}  // namespace roughlab
