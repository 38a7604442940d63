#include "roughlab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "roughlab/error.hpp"
#include "roughlab/field_ops.hpp"
#include "roughlab/heat.hpp"
#include "roughlab/log.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/operators.hpp"
#include "roughlab/parallel.hpp"
#include "roughlab/quadrature.hpp"
#include "roughlab/random.hpp"
#include "roughlab/spectral.hpp"

namespace roughlab {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

struct Ratio {
  double lhs = 0.0, rhs = 0.0;
  bool skipped = false;
};

// ||T psi||_s against ||grad psi||_q; a vanishing gradient marks the member degenerate.
Ratio operator_ratio(const Field& t_psi, const Field& psi, double s, double q) {
  Ratio r;
  r.rhs = sobolev_norm(psi, 1, q);
  const double scale = lebesgue_norm(psi, q) / psi.grid().box_length();
  if (!(r.rhs > 1e-10 * scale) || scale == 0.0) {
    r.skipped = true;
    return r;
  }
  r.lhs = lebesgue_norm(t_psi, s);
  return r;
}

double kernel_norm_at(const SphereKernel& kernel, double rho) {
  if (kernel.certificate() && kernel.certificate()->rho == rho) return kernel.certificate()->norm;
  const SphereNorm sn = sphere_norm(kernel, rho);
  if (!sn.finite) throw NumericalError("kernel '" + kernel.label() + "': norm infinite at rho = " + fmt(rho));
  return sn.value;
}

// Shared driver of the alpha = 0 and alpha > 0 operator checks.
InequalityReport operator_check(const std::string& id, const SphereKernel& kernel, const ExponentBudget& budget,
                                const FunctionCorpus& corpus, const InequalityOptions& options, bool pointwise) {
  const Grid& grid = corpus.grid();
  const int n = grid.dim();
  const double q = budget.inputs.q, alpha = budget.inputs.alpha, s = budget.s;
  if (budget.inputs.n != n) throw ConfigurationError(id + ": budget dimension differs from the corpus grid");
  if (kernel.dim() != n) throw ConfigurationError(id + ": kernel dimension differs from the corpus grid");

  InequalityReport rep;
  rep.id = id;
  rep.corpus_size = corpus.size();
  rep.parameters = {{"n", n}, {"q", q}, {"alpha", alpha}, {"rho", budget.inputs.rho}, {"s", s},
                    {"points", grid.points()}, {"box_length", grid.box_length()}};

  const RoughOperator op(grid, kernel, alpha);
  const double omega_norm = pointwise ? kernel_norm_at(kernel, budget.inputs.rho) : 0.0;
  if (pointwise) rep.parameters["kernel_norm"] = omega_norm;
  const double m_exponent = 1.0 / q - (1.0 + alpha) / n;
  const double g_exponent = q * (1.0 + alpha) / n;
  const std::vector<double> radii = maximal_function_radii(grid);

  std::vector<Ratio> ratios(corpus.size());
  // Largest pointwise ratio per member, and the full ratio field for holdout members.
  std::vector<double> point_max(corpus.size(), 0.0);

  auto pointwise_ratio = [&](const Field& t_phi, const Field& phi, double grad_q) {
    Field gq = gradient_magnitude(phi);
    for (double& v : gq.values()) v = std::pow(std::abs(v), q);
    const Field m = hardy_littlewood(gq, radii);
    Field ratio(grid);
    const double tail = std::pow(grad_q, g_exponent) * omega_norm;
    for (std::size_t x = 0; x < grid.size(); ++x) {
      const double rhs = std::pow(m[x], m_exponent) * tail;
      ratio[x] = rhs > 0.0 ? std::abs(t_phi[x]) / rhs : (t_phi[x] == 0.0 ? 0.0 : INFINITY);
    }
    return ratio;
  };

  auto run = [&](const std::vector<std::size_t>& members, bool count_against) {
    std::vector<std::size_t> violations(members.size(), 0);
    parallel_for(members.size(), options.workers, [&](std::size_t k) {
      const std::size_t i = members[k];
      const Field phi = corpus.member(i);
      const Field t_phi = apply_rough(op, phi);
      ratios[i] = operator_ratio(t_phi, phi, s, q);
      if (!pointwise || ratios[i].skipped) return;
      const Field r = pointwise_ratio(t_phi, phi, ratios[i].rhs);
      point_max[i] = r.max_abs();
      if (count_against) {
        const double limit = rep.pointwise->inflation * rep.pointwise->fit_constant;
        for (double v : r.values())
          if (!(v <= limit)) ++violations[k];
      }
    });
    std::size_t total = 0;
    for (std::size_t v : violations) total += v;
    return total;
  };

  if (pointwise) rep.pointwise = PointwiseBoundReport{};
  run(corpus.fit_indices(), false);
  if (pointwise) {
    for (std::size_t i : corpus.fit_indices()) rep.pointwise->fit_constant = std::max(rep.pointwise->fit_constant, point_max[i]);
  }
  const std::size_t violations = run(corpus.holdout_indices(), pointwise);
  if (pointwise) {
    PointwiseBoundReport& pb = *rep.pointwise;
    pb.violations = violations;
    for (std::size_t i : corpus.holdout_indices()) {
      if (ratios[i].skipped) continue;
      pb.holdout_max = std::max(pb.holdout_max, point_max[i]);
      pb.points_checked += grid.size();
    }
    pb.pass = pb.fit_constant > 0.0 && std::isfinite(pb.fit_constant) && pb.violations == 0 && pb.points_checked > 0;
  }

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const CorpusEntry& e = corpus.entry(i);
    if (ratios[i].skipped) {
      rep.skipped.push_back(e.label);
      log_info(id + ": skipped " + e.label + " (gradient norm vanishes)");
      continue;
    }
    rep.samples.push_back({i, e.label, to_string(e.family), corpus.is_holdout(i), 0, 0.0, ratios[i].lhs, ratios[i].rhs,
                           ratios[i].lhs / ratios[i].rhs});
  }

  // Dilation invariance on companion grids: the exponent s makes the ratio scale-free.
  int pairs = 0;
  const Grid companion = grid.companion(2.0);
  const RoughOperator op_c(companion, kernel, alpha);
  for (std::size_t i = 0; i < corpus.size() && pairs < options.dilation_pairs; ++i) {
    const CorpusEntry& e = corpus.entry(i);
    if (e.family != CorpusFamily::gaussian) continue;
    const Field phi = corpus.member(i);
    const Field phi_l = Field::sample(companion, [&](const Point& x) { return e.evaluate({2 * x[0], 2 * x[1], 2 * x[2]}); });
    const Ratio a = operator_ratio(apply_rough(op, phi), phi, s, q);
    const Ratio b = operator_ratio(apply_rough(op_c, phi_l), phi_l, s, q);
    if (a.skipped || b.skipped) continue;
    const double rel = (b.lhs / b.rhs) / (a.lhs / a.rhs);
    rep.checks.push_back({"dilation ratio " + e.label, 1.0, rel, options.dilation_tolerance,
                          std::abs(rel - 1.0) <= options.dilation_tolerance});
    ++pairs;
  }
  if (pairs == 0) rep.checks.push_back({"dilation ratio (no gaussian members)", 1.0, 0.0, 0.0, false});
  rep.finalize();
  return rep;
}


// Integer offsets m with |m| h <= r.
std::vector<Index> ball_offsets(const Grid& grid, double radius) {
  const int n = grid.dim();
  const double h = grid.spacing();
  const int k = static_cast<int>(std::floor(radius / h + 1e-9));
  std::vector<Index> out;
  const double lim = radius * radius * (1.0 + 1e-12);
  for (int a = -k; a <= k; ++a)
    for (int b = -k; b <= k; ++b)
      for (int c = (n == 3 ? -k : 0); c <= (n == 3 ? k : 0); ++c) {
        const double r2 = (double(a) * a + double(b) * b + double(c) * c) * h * h;
        if (r2 <= lim) out.push_back({a, b, c});
      }
  return out;
}

double ball_mean(const Field& f, const Index& c, const std::vector<Index>& offs) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (const Index& m : offs) s += f[g.ravel({c[0] + m[0], c[1] + m[1], c[2] + m[2]})];
  return s / static_cast<double>(offs.size());
}

double ball_power_mean(const Field& f, const Index& c, const std::vector<Index>& offs, double p, double shift) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (const Index& m : offs) s += std::pow(std::abs(f[g.ravel({c[0] + m[0], c[1] + m[1], c[2] + m[2]})] - shift), p);
  return s / static_cast<double>(offs.size());
}

}  // namespace

BudgetInputs reference_budget(Theorem theorem, int n) {
  if (n == 2) {
    switch (theorem) {
      case Theorem::T1: return {2, 1.8, 0.0, 1.5, 1.8, Theorem::T1};
      case Theorem::T2: return {2, 1.8, 0.0, 1.6, 1.8, Theorem::T2};
      case Theorem::T3: return {2, 1.8, 0.5, 1.25, 1.3, Theorem::T3};
    }
  }
  if (n == 3) {
    switch (theorem) {
      case Theorem::T1: return {3, 2.0, 0.0, 2.0, 2.5, Theorem::T1};
      case Theorem::T2: return {3, 2.0, 0.0, 2.4, 2.7, Theorem::T2};
      case Theorem::T3: return {3, 2.0, 0.5, 1.6, 1.8, Theorem::T3};
    }
  }
  throw ConfigurationError("reference budgets exist for n = 2 and n = 3 only");
}

void InequalityReport::finalize() {
  fit_max = 0.0;
  holdout_max = 0.0;
  all_finite = true;
  bool any_fit = false, any_holdout = false;
  for (const RatioSample& s : samples) {
    if (!std::isfinite(s.ratio)) all_finite = false;
    if (s.holdout) {
      any_holdout = true;
      holdout_max = std::max(holdout_max, s.ratio);
    } else {
      any_fit = true;
      fit_max = std::max(fit_max, s.ratio);
    }
  }
  pass = all_finite && any_fit && any_holdout && fit_max > 0.0 && holdout_max <= holdout_factor * fit_max;
  for (const ExponentCheck& c : checks) pass = pass && c.pass;
  if (pointwise) pass = pass && pointwise->pass;
}

InequalityReport check_lemma1(const SphereKernel& kernel, const ExponentBudget& budget, const FunctionCorpus& corpus,
                              const InequalityOptions& options) {
  if (budget.inputs.alpha != 0.0) throw ConfigurationError("check-lemma1 needs a budget with alpha = 0");
  return operator_check("lemma1", kernel, budget, corpus, options, false);
}

InequalityReport check_prop1(const SphereKernel& kernel, const ExponentBudget& budget, const FunctionCorpus& corpus,
                             const InequalityOptions& options) {
  if (!(budget.inputs.alpha > 0.0)) throw ConfigurationError("check-prop1 needs a budget with alpha > 0");
  InequalityReport rep = operator_check("prop1", kernel, budget, corpus, options, options.pointwise);
  // At alpha = 0 the exponent falls back to nq/(n-q).
  const int n = budget.inputs.n;
  const double q = budget.inputs.q;
  rep.parameters["s_alpha0"] = sobolev_exponent(n, q, 0.0);
  rep.checks.push_back({"s continuity at alpha = 0", n * q / (n - q), sobolev_exponent(n, q, 0.0), 1e-15,
                        std::abs(sobolev_exponent(n, q, 0.0) - n * q / (n - q)) <= 1e-15 * n * q / (n - q)});
  rep.finalize();
  return rep;
}

double ball_average(const Field& field, std::size_t center, double radius, double power, std::optional<double> subtract) {
  const auto offs = ball_offsets(field.grid(), radius);
  const Index c = field.grid().unravel(center);
  return ball_power_mean(field, c, offs, power, subtract.value_or(0.0));
}

double ball_mean(const Field& field, std::size_t center, double radius) {
  return ball_mean(field, field.grid().unravel(center), ball_offsets(field.grid(), radius));
}

InequalityReport check_poincare_sobolev(const FunctionCorpus& corpus, double q, double sigma,
                                        const PoincareOptions& options) {
  const Grid& grid = corpus.grid();
  const int n = grid.dim();
  if (!(q >= 1.0 && q < n)) throw DomainError("Poincare-Sobolev needs 1 <= q < n");
  const double bound = n * q / (n - q);
  if (!(sigma >= 1.0 && sigma <= bound * (1.0 + 1e-12)))
    throw DomainError("sigma must satisfy 1 <= sigma <= nq/(n-q) = " + fmt(bound));
  if (options.centers < 1 || options.radii < 1) throw ConfigurationError("Poincare-Sobolev needs centers, radii >= 1");
  const double h = grid.spacing();
  std::vector<double> radii;
  for (int k = 0; k < options.radii; ++k) radii.push_back(2.0 * h * std::ldexp(1.0, k));
  if (radii.back() > grid.box_length() / 4 * (1 + 1e-12))
    throw ConfigurationError("largest Poincare-Sobolev radius " + fmt(radii.back()) + " exceeds L/4; refine the grid");
  std::vector<std::vector<Index>> offsets;
  for (double r : radii) offsets.push_back(ball_offsets(grid, r));

  InequalityReport rep;
  rep.id = "poincare_sobolev";
  rep.corpus_size = corpus.size();
  rep.parameters = {{"n", n},           {"q", q}, {"sigma", sigma}, {"sigma_max", bound}, {"centers", options.centers},
                    {"radii", options.radii}, {"points", grid.points()}, {"box_length", grid.box_length()}};

  struct Slot {
    std::vector<RatioSample> samples;
    std::size_t degenerate = 0;
  };
  std::vector<Slot> slots(corpus.size());
  parallel_for(corpus.size(), options.workers, [&](std::size_t i) {
    const CorpusEntry& e = corpus.entry(i);
    const Field phi = corpus.member(i);
    const Field grad = gradient_magnitude(phi);
    UniformStream u(options.seed * 0x9E3779B97F4A7C15ull + i);
    for (int c = 0; c < options.centers; ++c) {
      Index ctr{0, 0, 0};
      for (int d = 0; d < n; ++d) {
        const double x = e.center[d] + u(-grid.box_length() / 16, grid.box_length() / 16);
        ctr[d] = grid.origin_index() + static_cast<int>(std::lround(x / h));
      }
      const std::size_t flat = grid.ravel(ctr);
      for (std::size_t k = 0; k < radii.size(); ++k) {
        const double mean = ball_mean(phi, ctr, offsets[k]);
        const double lhs = std::pow(ball_power_mean(phi, ctr, offsets[k], sigma, mean), 1.0 / sigma);
        const double rhs = radii[k] * std::pow(ball_power_mean(grad, ctr, offsets[k], q, 0.0), 1.0 / q);
        if (rhs == 0.0 && lhs == 0.0) {
          ++slots[i].degenerate;
          continue;
        }
        slots[i].samples.push_back({i, e.label, to_string(e.family), corpus.is_holdout(i), flat, radii[k], lhs, rhs,
                                    rhs > 0.0 ? lhs / rhs : INFINITY});
      }
    }
  });
  std::size_t degenerate = 0;
  for (Slot& s : slots) {
    degenerate += s.degenerate;
    for (RatioSample& r : s.samples) rep.samples.push_back(std::move(r));
  }
  rep.parameters["degenerate_balls"] = static_cast<double>(degenerate);
  rep.finalize();
  return rep;
}

BetaReport check_beta_integrals(double a, double b, std::span<const double> times) {
  if (a >= 1.0 || b >= 1.0) throw DomainError("non-integrable endpoint — violates theorem hypotheses");
  if (times.empty()) throw ConfigurationError("check-beta needs at least one time");
  BetaReport rep;
  rep.a = a;
  rep.b = b;
  rep.expected_slope = 1.0 - a - b;
  const double beta = std::tgamma(1.0 - a) * std::tgamma(1.0 - b) / std::tgamma(2.0 - a - b);
  auto one = [](double) { return 1.0; };
  auto value = [&](double t) { return graded_product_integral(t, a, b, 0.0, t, one); };
  std::vector<double> lt, lv;
  bool rows_ok = true;
  for (double t : times) {
    if (!(t > 0.0)) throw ConfigurationError("check-beta times must be positive");
    BetaRow row{t, value(t), std::pow(t, 1.0 - a - b) * beta, 0.0};
    row.relative_error = std::abs(row.numeric - row.exact) / std::abs(row.exact);
    rows_ok = rows_ok && row.relative_error <= 1e-6;
    rep.rows.push_back(row);
    lt.push_back(std::log(t));
    lv.push_back(std::log(row.numeric));
  }
  rep.checks.push_back({"graded rule vs t^{1-a-b} B(1-a,1-b)", 0.0, 0.0, 1e-6, rows_ok});
  for (const BetaRow& r : rep.rows) rep.checks.back().measured = std::max(rep.checks.back().measured, r.relative_error);
  if (rep.rows.size() >= 2) {
    std::vector<double> distinct = lt;
    std::sort(distinct.begin(), distinct.end());
    if (distinct.front() != distinct.back()) {
      rep.slope = least_squares_slope(lt, lv);
      rep.checks.push_back({"log-log slope", rep.expected_slope, rep.slope, 1e-6,
                            std::abs(rep.slope - rep.expected_slope) <= 1e-6});
    }
  }
  const double v1 = value(1.0);
  for (double t : {0.5, 2.0}) {
    const double ratio = value(t) / v1, want = std::pow(t, 1.0 - a - b);
    rep.checks.push_back({"homogeneity value(" + fmt(t) + ")/value(1)", want, ratio, 1e-8,
                          std::abs(ratio - want) <= 1e-8 * want});
  }
  rep.pass = true;
  for (const ExponentCheck& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

std::vector<ExponentPair> reference_beta_pairs() {
  std::vector<ExponentPair> out;
  for (int n : {2, 3})
    for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) {
      const BudgetDecision d = exponent_budget(reference_budget(th, n));
      if (!d.accepted()) throw ConfigurationError("reference budget rejected for " + to_string(th));
      out.push_back(d.budget->bilinear_pair());
      out.push_back(d.budget->force_pair());
    }
  return out;
}

}  // namespace roughlab
