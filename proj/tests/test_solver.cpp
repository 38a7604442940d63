#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "roughlab/error.hpp"
#include "roughlab/field_ops.hpp"
#include "roughlab/heat.hpp"
#include "roughlab/solver.hpp"
#include "roughlab/spectral.hpp"
#include "support.hpp"

using namespace roughlab;
using roughlab::testing::max_abs_diff;

namespace {
constexpr double pi = std::numbers::pi;

BudgetInputs inputs_for(Theorem th) {
  switch (th) {
    case Theorem::T1: return {2, 1.8, 0.0, 1.5, 1.8, Theorem::T1};
    case Theorem::T2: return {2, 1.8, 0.0, 1.5, 1.8, Theorem::T2};
    case Theorem::T3: return {2, 1.8, 0.5, 1.25, 1.3, Theorem::T3};
  }
  return {};
}

std::vector<RoughOperator> operators_for(const Grid& g, double alpha) {
  KernelSpec ks;
  ks.family = KernelFamily::power;
  ks.beta = 2.0;
  ks.tilt = 0.3;
  ks.rho = 1.8;
  std::vector<RoughOperator> ops;
  for (const SphereKernel& k : build_component_kernels(ks, g.dim())) ops.emplace_back(g, k, alpha);
  return ops;
}

Field data_for(const Grid& g, Theorem th) {
  if (th == Theorem::T2)
    return Field::sample(g, [](const Point& x) { return -x[0] * std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2.0); });
  return Field::sample(g, [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2.0); });
}

SystemSpec system_for(const Grid& g, Theorem th, std::vector<double> times = {}) {
  const BudgetInputs in = inputs_for(th);
  const BudgetDecision d = exponent_budget(in);
  REQUIRE(d.accepted());
  return SystemSpec{*d.budget, operators_for(g, in.alpha), data_for(g, th), ForceSpec::none_force(), 1.0, 1.0,
                    std::move(times), 2};
}
}  // namespace

TEST_CASE("zero current without force gives the heat flow") {
  const Grid g(2, 32, 16.0);
  const SystemSpec spec = system_for(g, Theorem::T1);
  const MildSolver solver(spec);
  TimeSampledTrajectory zero;
  for (double t : solver.times()) {
    zero.times.push_back(t);
    zero.snapshots.emplace_back(g);
  }
  const TimeSampledTrajectory out = solver.step(zero);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Field want = heat_convolve(spec.data, out.times[i]);
    CHECK(max_abs_diff(out.snapshots[i], want) <= 1e-12 * spec.data.max_abs());
  }
  const TimeSampledTrajectory free = duhamel_step(spec, zero);
  CHECK(max_abs_diff(free.snapshots.back(), out.snapshots.back()) == 0.0);
}

TEST_CASE("steady and power-law plane-wave forcing match the single-mode time integral") {
  const Grid g(2, 32, 8.0);
  const double k = 2 * pi / g.box_length();
  const Field wave = Field::sample(g, [&](const Point& x) { return std::cos(k * x[0]); });
  SystemSpec spec = system_for(g, Theorem::T1);
  spec.data = Field(g);
  spec.force = ForceSpec::steady(wave);
  const MildSolver steady(spec);
  const TimeSampledTrajectory f = steady.force_term();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double t = f.times[i];
    const double amp = -std::expm1(-t * k * k) / (k * k);
    CHECK(max_abs_diff(f.snapshots[i], amp * wave) <= 1e-4 * amp);
  }

  boost::math::quadrature::tanh_sinh<double> ts;
  for (double b : {0.3, 0.75}) {
    spec.force = ForceSpec::power(wave, b);
    const TimeSampledTrajectory p = MildSolver(spec).force_term();
    for (std::size_t i = 0; i < p.size(); i += 7) {
      const double t = p.times[i];
      const double amp = ts.integrate([&](double s) { return std::exp(-(t - s) * k * k) * std::pow(s, -b); }, 0.0, t);
      CHECK(max_abs_diff(p.snapshots[i], amp * wave) <= 1e-4 * amp);
    }
  }

  // A sampled force equal to the steady profile agrees up to the startup hold.
  TimeSampledTrajectory samples;
  for (double t : steady.times()) {
    samples.times.push_back(t);
    samples.snapshots.push_back(wave);
  }
  spec.force = ForceSpec::sampled_force(samples);
  const TimeSampledTrajectory q = MildSolver(spec).force_term();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double amp = -std::expm1(-q.times[i] * k * k) / (k * k);
    CHECK(max_abs_diff(q.snapshots[i], amp * wave) <= 1e-4 * amp);
  }
}

TEST_CASE("the Duhamel map is affine in the data with the current fixed") {
  const Grid g(2, 32, 16.0);
  const MildSolver solver(system_for(g, Theorem::T1));
  const TimeSampledTrajectory h1 = solver.heat_term(), h2 = solver.with_scales(2.0, 1.0).heat_term();
  for (std::size_t i = 0; i < h1.size(); ++i) CHECK(max_abs_diff(h2.snapshots[i], 2.0 * h1.snapshots[i]) == 0.0);
  const TimeSampledTrajectory cur = solver.with_scales(0.1, 1.0).affine_term();
  const TimeSampledTrajectory a = solver.step(cur), b = solver.with_scales(2.0, 1.0).step(cur);
  const TimeSampledTrajectory n = solver.nonlinear_term(cur);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(max_abs_diff(b.snapshots[i] - a.snapshots[i], h1.snapshots[i]) <= 1e-13 * h1.snapshots[0].max_abs());
    CHECK(max_abs_diff(a.snapshots[i] - n.snapshots[i], h1.snapshots[i]) <= 1e-13 * h1.snapshots[0].max_abs());
  }
}

TEST_CASE("resolution norm of the heat term is the caloric norm of the data") {
  for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) {
    const Grid g(2, 32, 16.0);
    const SystemSpec spec = system_for(g, th);
    const MildSolver solver(spec);
    const WeightedSupNorm a = solver.resolution(solver.heat_term());
    const WeightedSupNorm b = caloric_besov_norm(spec.data, caloric_variant_for(th), spec.budget, solver.times());
    CHECK(a.value == b.value);
    CHECK(solver.data_norm().value == b.value);
  }
}

TEST_CASE("zero data and zero force converge in one iteration") {
  const Grid g(2, 32, 16.0);
  SystemSpec spec = system_for(g, Theorem::T1);
  spec.data_scale = 0.0;
  const SolutionTrace tr = picard_solve(spec, 10, 1e-10);
  CHECK(tr.converged);
  CHECK(tr.iterations == 1);
  CHECK(tr.contraction_factors.empty());
  for (const Field& f : tr.final_trajectory.snapshots) CHECK(f.max_abs() == 0.0);
}

TEST_CASE("small data converges for every variant with a tight fixed-point residual") {
  for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) {
    const Grid g(2, 32, 16.0);
    const MildSolver base(system_for(g, th));
    const double scale = 1e-3 / base.data_norm().value;
    const MildSolver solver = base.with_scales(scale, 1.0);
    CHECK(solver.data_norm().value == doctest::Approx(1e-3));
    const PicardOptions opt{40, 1e-10, false};
    const SolutionTrace tr = picard_solve(solver, opt);
    REQUIRE(tr.converged);
    REQUIRE(tr.contraction_factors.size() >= 3);
    for (double f : tr.contraction_factors) CHECK(f < 1.0);
    for (std::size_t i = 1; i < tr.increment_norms.size(); ++i)
      CHECK(tr.increment_norms[i] < tr.increment_norms[i - 1]);
    CHECK(tr.relative_residual <= 2 * opt.tolerance);
    CHECK(tr.iterates.size() == 2);
  }
}

TEST_CASE("contraction factors settle to a geometric rate for moderate data") {
  for (Theorem th : {Theorem::T1, Theorem::T3}) {
    const Grid g(2, 32, 16.0);
    const MildSolver solver = MildSolver(system_for(g, th)).with_scales(0.5, 1.0);
    const SolutionTrace tr = picard_solve(solver, PicardOptions{60, 1e-12, true});
    REQUIRE(tr.converged);
    CHECK(tr.iterates.size() == static_cast<std::size_t>(tr.iterations) + 1);
    const auto& f = tr.contraction_factors;
    REQUIRE(f.size() >= 4);
    const double last = f.back();
    for (std::size_t i = f.size() - 3; i < f.size(); ++i) CHECK(std::abs(f[i] - last) <= 0.2 * last);
  }
}

TEST_CASE("T2 iterates stay mean zero") {
  const Grid g(2, 32, 16.0);
  const SolutionTrace tr = picard_solve(MildSolver(system_for(g, Theorem::T2)).with_scales(0.5, 1.0), PicardOptions{});
  for (const Field& f : tr.final_trajectory.snapshots) CHECK(std::abs(f.mean()) <= 1e-14 * f.max_abs());
  SystemSpec bad = system_for(g, Theorem::T2);
  bad.data = data_for(g, Theorem::T1);
  CHECK_THROWS_AS(MildSolver{bad}, ConfigurationError);
}

TEST_CASE("large data is flagged divergent, not thrown") {
  const Grid g(2, 32, 16.0);
  const SolutionTrace tr = picard_solve(MildSolver(system_for(g, Theorem::T1)).with_scales(30.0, 1.0), PicardOptions{});
  CHECK_FALSE(tr.converged);
  CHECK(tr.diverged);
}

TEST_CASE("time grid validation") {
  const Grid g(2, 32, 16.0);
  CHECK_THROWS_AS(MildSolver(system_for(g, Theorem::T1, {1.0, 2.0})), ConfigurationError);
  CHECK_THROWS_AS(MildSolver(system_for(g, Theorem::T1, {1.0, 3.0, 4.0})), ConfigurationError);
  CHECK_THROWS_AS(MildSolver(system_for(g, Theorem::T1, {1.0, 1.5, 1.5})), ConfigurationError);
  SystemSpec wrong_alpha = system_for(g, Theorem::T3);
  wrong_alpha.operators = operators_for(g, 0.0);
  CHECK_THROWS_AS(MildSolver{wrong_alpha}, ConfigurationError);
}

TEST_CASE("smallness scan: zero row, downward closure and a bracket") {
  const Grid g(2, 32, 16.0);
  const std::vector<double> scales{0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  const ScanResult r = smallness_scan(system_for(g, Theorem::T1), scales, PicardOptions{80, 1e-10, false});
  REQUIRE(r.rows.size() == scales.size());
  CHECK(r.rows[0].converged);
  CHECK(r.rows[0].data_norm == 0.0);
  CHECK(r.rows[0].final_norm == 0.0);
  CHECK(r.downward_closed);
  REQUIRE(r.has_bracket());
  CHECK(*r.last_converged < *r.first_failed);
  CHECK(r.bilinear_constant > 0.0);
}

TEST_CASE("empirical bilinear constant is stable under grid refinement") {
  // Same box and time window on both grids; only the spacing changes.
  const std::vector<double> times = log_time_grid(0.25, 4.0, 24);
  const std::vector<double> scales{0.1, 0.3};
  double c[2];
  int i = 0;
  for (int N : {64, 128}) {
    const Grid g(2, N, 16.0);
    c[i++] = smallness_scan(system_for(g, Theorem::T1, times), scales).bilinear_constant;
  }
  CHECK(std::abs(c[1] - c[0]) <= 0.3 * c[0]);
}

TEST_CASE("solver is covariant under dilation onto the companion grid") {
  for (Theorem th : {Theorem::T1, Theorem::T3}) {
    const Grid g(2, 32, 16.0);
    const SystemSpec spec = system_for(g, th);
    const double lambda = 2.0;
    const double amp = 1.0 + spec.budget.inputs.alpha;
    const MildSolver base(spec);
    const SolutionTrace a = picard_solve(base.with_scales(0.5, 1.0), PicardOptions{});
    SystemSpec dil = spec;
    dil.data = resample_dilate(spec.data, lambda, amp);
    std::vector<RoughOperator> ops;
    for (const RoughOperator& op : spec.operators) ops.emplace_back(dil.data.grid(), op.kernel(), op.alpha());
    dil.operators = ops;
    for (double t : base.times()) dil.times.push_back(t / (lambda * lambda));
    const MildSolver ds = MildSolver(dil).with_scales(0.5, 1.0);
    const SolutionTrace b = picard_solve(ds, PicardOptions{});
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    const double na = base.resolution(a.final_trajectory).value;
    const double nb = ds.resolution(b.final_trajectory).value;
    CHECK(std::abs(nb - na) <= 0.05 * na);
    for (std::size_t i = 0; i < a.final_trajectory.size(); i += 9) {
      const Field& fa = a.final_trajectory.snapshots[i];
      const Field& fb = b.final_trajectory.snapshots[i];
      for (std::size_t j = 0; j < fa.size(); ++j)
        CHECK(std::abs(fb[j] - std::pow(lambda, amp) * fa[j]) <= 1e-9 * std::pow(lambda, amp) * fa.max_abs());
    }
  }
}
