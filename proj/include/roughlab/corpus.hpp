#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughlab/grid.hpp"

namespace roughlab {

enum class CorpusFamily { gaussian, bump, band_limited, anisotropic };

std::string to_string(CorpusFamily family);

struct CorpusSpec {
  std::uint64_t seed = 1;
  int gaussians = 50;
  int bumps = 50;
  int band_limited = 50;
  int anisotropic = 50;
  int total() const noexcept { return gaussians + bumps + band_limited + anisotropic; }
};

/// One test function in closed form; evaluable on any grid (companion grids included).
struct CorpusEntry {
  CorpusFamily family = CorpusFamily::gaussian;
  std::string label;
  Point center{0.0, 0.0, 0.0};
  /// Characteristic length: width, bump radius or window radius.
  double scale = 0.0;
  std::function<double(const Point&)> evaluate;
};

/// Reproducible collection of smooth test functions on a grid.
///
/// Every member is negligible (below 1e-12 of its peak) or exactly zero farther than
/// L/4 from its center, and centers lie within L/16 of the origin. Members are
/// sampled on demand, so large 3D corpora never sit in memory at once.
class FunctionCorpus {
 public:
  /// Throws ConfigurationError if the grid cannot resolve the narrowest member (N < 56).
  FunctionCorpus(Grid grid, CorpusSpec spec);

  const Grid& grid() const noexcept { return grid_; }
  const CorpusSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const CorpusEntry& entry(std::size_t i) const { return entries_.at(i); }
  Field member(std::size_t i) const;
  Field member_on(std::size_t i, const Grid& grid) const;

  /// Seeded permutation split: the first half of the permutation is the fit half.
  const std::vector<std::size_t>& fit_indices() const noexcept { return fit_; }
  const std::vector<std::size_t>& holdout_indices() const noexcept { return holdout_; }
  bool is_holdout(std::size_t i) const { return holdout_flag_.at(i); }

  /// Adds a hand-made member to the chosen half, after the generated ones.
  std::size_t append(CorpusEntry entry, bool holdout);

 private:
  Grid grid_;
  CorpusSpec spec_;
  std::vector<CorpusEntry> entries_;
  std::vector<std::size_t> fit_, holdout_;
  std::vector<bool> holdout_flag_;
};

}  // namespace roughlab
