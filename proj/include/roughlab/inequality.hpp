#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roughlab/budget.hpp"
#include "roughlab/corpus.hpp"
#include "roughlab/sphere.hpp"

namespace roughlab {

/// One accepted budget per theorem and dimension, used as defaults throughout.
BudgetInputs reference_budget(Theorem theorem, int n);

struct RatioSample {
  std::size_t member = 0;
  std::string label;
  std::string family;
  bool holdout = false;
  /// Ball center index and radius for Poincare-Sobolev samples; unused otherwise.
  std::size_t center = 0;
  double radius = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct ExponentCheck {
  std::string name;
  double expected = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Pointwise |T^alpha phi(x)| <= C M(|grad phi|^q)(x)^{1/q-(1+alpha)/n} ||grad phi||_q^{q(1+alpha)/n} ||Omega||_rho.
struct PointwiseBoundReport {
  /// Max pointwise ratio over the fit half.
  double fit_constant = 0.0;
  /// Max pointwise ratio over the holdout half.
  double holdout_max = 0.0;
  double inflation = 3.0;
  /// Holdout grid points above inflation * fit_constant.
  std::size_t violations = 0;
  std::size_t points_checked = 0;
  bool pass = false;
};

struct InequalityReport {
  std::string id;
  /// Exponents and sizes echoed into the report header.
  std::map<std::string, double> parameters;
  std::size_t corpus_size = 0;
  std::vector<RatioSample> samples;
  std::vector<std::string> skipped;
  double fit_max = 0.0;
  double holdout_max = 0.0;
  bool all_finite = true;
  double holdout_factor = 3.0;
  std::vector<ExponentCheck> checks;
  std::optional<PointwiseBoundReport> pointwise;
  bool pass = false;

  /// Recomputes fit/holdout maxima and the pass flag from samples and checks.
  void finalize();
};

struct InequalityOptions {
  int workers = 1;
  /// Companion-grid Gaussian pairs used for the dilation-invariance checks.
  int dilation_pairs = 4;
  double dilation_tolerance = 0.01;
  bool pointwise = true;
};

/// ||T psi||_{L^s} / ||grad psi||_{L^q}, s = nq/(n-q), over the corpus; requires alpha = 0.
InequalityReport check_lemma1(const SphereKernel& kernel, const ExponentBudget& budget, const FunctionCorpus& corpus,
                              const InequalityOptions& options = {});

/// As check_lemma1 for T^alpha with s = qn/(n-q(1+alpha)), plus the pointwise bound.
InequalityReport check_prop1(const SphereKernel& kernel, const ExponentBudget& budget, const FunctionCorpus& corpus,
                             const InequalityOptions& options = {});

struct PoincareOptions {
  int centers = 20;
  /// Dyadic radii 2h * 2^k, k < radii.
  int radii = 4;
  std::uint64_t seed = 7;
  int workers = 1;
};

/// (avg_B |phi - phi_B|^sigma)^{1/sigma} / (r (avg_B |grad phi|^q)^{1/q}) over corpus x centers x radii.
InequalityReport check_poincare_sobolev(const FunctionCorpus& corpus, double q, double sigma,
                                        const PoincareOptions& options = {});

/// Ball averages by explicit cell enumeration: cells with |m| h <= r around grid point `center`.
double ball_average(const Field& field, std::size_t center, double radius, double power,
                    std::optional<double> subtract = std::nullopt);
/// Signed mean of field over the same cell set.
double ball_mean(const Field& field, std::size_t center, double radius);

struct BetaRow {
  double t = 0.0;
  double numeric = 0.0;
  double exact = 0.0;
  double relative_error = 0.0;
};

struct BetaReport {
  double a = 0.0;
  double b = 0.0;
  std::vector<BetaRow> rows;
  double slope = 0.0;
  double expected_slope = 0.0;
  std::vector<ExponentCheck> checks;
  bool pass = false;
};

/// int_0^t (t-s)^{-a} s^{-b} ds by the graded rule against t^{1-a-b} B(1-a, 1-b) with B from std::tgamma.
BetaReport check_beta_integrals(double a, double b, std::span<const double> times);

/// The bilinear and force exponent pairs of the reference budgets for n = 2, 3 (12 pairs).
std::vector<ExponentPair> reference_beta_pairs();

}  // namespace roughlab
