#include "roughlab/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "roughlab/error.hpp"
#include "roughlab/random.hpp"

namespace roughlab {

namespace {

// Gaussians stay below e^{-30} beyond L/4 when the width is at most L/22.
constexpr double kWidthFraction = 1.0 / 22.0;
// Narrowest width in grid spacings; the Nyquist amplitude is then ~2e-7 of the peak.
constexpr double kMinWidthCells = 2.5;

double smooth_bump(double r2_over_R2) {
  if (r2_over_R2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r2_over_R2));
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// Uniformly distributed rotation matrix (rows) in dimension n.
std::array<Point, 3> random_rotation(int n, UniformStream& u) {
  std::array<Point, 3> R{Point{1.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0}, Point{0.0, 0.0, 1.0}};
  if (n == 2) {
    const double a = u(0.0, 2.0 * std::numbers::pi);
    R[0] = {std::cos(a), -std::sin(a), 0.0};
    R[1] = {std::sin(a), std::cos(a), 0.0};
    return R;
  }
  // Unit quaternion from three uniforms (Shoemake).
  const double u1 = u(), u2 = u(0.0, 2.0 * std::numbers::pi), u3 = u(0.0, 2.0 * std::numbers::pi);
  const double a = std::sqrt(1.0 - u1) * std::sin(u2), b = std::sqrt(1.0 - u1) * std::cos(u2);
  const double c = std::sqrt(u1) * std::sin(u3), w = std::sqrt(u1) * std::cos(u3);
  R[0] = {1 - 2 * (b * b + c * c), 2 * (a * b - c * w), 2 * (a * c + b * w)};
  R[1] = {2 * (a * b + c * w), 1 - 2 * (a * a + c * c), 2 * (b * c - a * w)};
  R[2] = {2 * (a * c - b * w), 2 * (b * c + a * w), 1 - 2 * (a * a + b * b)};
  return R;
}

}  // namespace

std::string to_string(CorpusFamily family) {
  switch (family) {
    case CorpusFamily::gaussian: return "gaussian";
    case CorpusFamily::bump: return "bump";
    case CorpusFamily::band_limited: return "band_limited";
    case CorpusFamily::anisotropic: return "anisotropic";
  }
  return "gaussian";
}

FunctionCorpus::FunctionCorpus(Grid grid, CorpusSpec spec) : grid_(grid), spec_(spec) {
  const int n = grid.dim();
  const double L = grid.box_length(), h = grid.spacing();
  const double w_hi = kWidthFraction * L, w_lo = kMinWidthCells * h;
  if (w_lo >= w_hi)
    throw ConfigurationError("corpus needs at least 56 points per axis to resolve its narrowest member (got " +
                             std::to_string(grid.points()) + ")");
  if (spec.gaussians < 0 || spec.bumps < 0 || spec.band_limited < 0 || spec.anisotropic < 0 || spec.total() < 2)
    throw ConfigurationError("corpus counts must be non-negative with at least two members");

  UniformStream u(spec.seed);
  auto random_center = [&] {
    Point c{0.0, 0.0, 0.0};
    for (int d = 0; d < n; ++d) c[d] = u(-L / 16, L / 16);
    return c;
  };
  auto amplitude = [&] { return (u() < 0.5 ? -1.0 : 1.0) * u(0.5, 2.0); };

  for (int i = 0; i < spec.gaussians; ++i) {
    const Point c = random_center();
    const double w = u(w_lo, w_hi), a = amplitude();
    entries_.push_back({CorpusFamily::gaussian, "gaussian-" + std::to_string(i) + "[w=" + fmt(w) + "]", c, w,
                        [c, w, a](const Point& x) {
                          double r2 = 0.0;
                          for (int d = 0; d < 3; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
                          return a * std::exp(-r2 / (w * w));
                        }});
  }
  for (int i = 0; i < spec.bumps; ++i) {
    const Point c = random_center();
    const double R = u(std::max(8.0 * h, L / 16), L / 4), a = amplitude();
    entries_.push_back({CorpusFamily::bump, "bump-" + std::to_string(i) + "[R=" + fmt(R) + "]", c, R,
                        [c, R, a](const Point& x) {
                          double r2 = 0.0;
                          for (int d = 0; d < 3; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
                          return a * smooth_bump(r2 / (R * R));
                        }});
  }
  for (int i = 0; i < spec.band_limited; ++i) {
    // Six random lattice modes with wavelength >= 16 h under a bump window of radius L/4.
    const Point c = random_center();
    const double R = L / 4;
    const int kmax = std::max(1, grid.points() / 16);
    struct Mode {
      Point k;
      double amp, phase;
    };
    std::vector<Mode> modes;
    for (int j = 0; j < 6; ++j) {
      Mode m{{0.0, 0.0, 0.0}, u(-1.0, 1.0), u(0.0, 2.0 * std::numbers::pi)};
      for (int d = 0; d < n; ++d)
        m.k[d] = grid.fundamental() * (static_cast<double>(u.below(2 * kmax + 1)) - kmax);
      modes.push_back(m);
    }
    entries_.push_back({CorpusFamily::band_limited, "band-" + std::to_string(i), c, R,
                        [c, R, modes](const Point& x) {
                          double r2 = 0.0, s = 0.0;
                          for (int d = 0; d < 3; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
                          const double win = smooth_bump(r2 / (R * R));
                          if (win == 0.0) return 0.0;
                          for (const Mode& m : modes) {
                            double ph = m.phase;
                            for (int d = 0; d < 3; ++d) ph += m.k[d] * (x[d] - c[d]);
                            s += m.amp * std::cos(ph);
                          }
                          return win * s;
                        }});
  }
  for (int i = 0; i < spec.anisotropic; ++i) {
    const Point c = random_center();
    Point w{1.0, 1.0, 1.0};
    for (int d = 0; d < n; ++d) w[d] = u(w_lo, w_hi);
    const auto R = random_rotation(n, u);
    const double a = amplitude();
    entries_.push_back({CorpusFamily::anisotropic, "aniso-" + std::to_string(i), c, std::max({w[0], w[1], w[2]}),
                        [c, w, R, a, n](const Point& x) {
                          double q = 0.0;
                          for (int r = 0; r < n; ++r) {
                            double y = 0.0;
                            for (int d = 0; d < n; ++d) y += R[r][d] * (x[d] - c[d]);
                            q += y * y / (w[r] * w[r]);
                          }
                          return a * std::exp(-q);
                        }});
  }

  // Fisher-Yates with the same stream; first half fits, second half is held out.
  std::vector<std::size_t> perm(entries_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[u.below(i + 1)]);
  const std::size_t half = perm.size() / 2;
  fit_.assign(perm.begin(), perm.begin() + half);
  holdout_.assign(perm.begin() + half, perm.end());
  holdout_flag_.assign(entries_.size(), false);
  for (std::size_t i : holdout_) holdout_flag_[i] = true;
}

Field FunctionCorpus::member(std::size_t i) const { return member_on(i, grid_); }

Field FunctionCorpus::member_on(std::size_t i, const Grid& grid) const {
  return Field::sample(grid, entries_.at(i).evaluate);
}

std::size_t FunctionCorpus::append(CorpusEntry entry, bool holdout) {
  if (!entry.evaluate) throw ConfigurationError("corpus entry '" + entry.label + "' has no evaluator");
  const std::size_t i = entries_.size();
  entries_.push_back(std::move(entry));
  holdout_flag_.push_back(holdout);
  (holdout ? holdout_ : fit_).push_back(i);
  return i;
}

}  // namespace roughlab
