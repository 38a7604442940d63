#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "roughlab/error.hpp"
#include "roughlab/field_ops.hpp"
#include "roughlab/snapshot.hpp"
#include "roughlab/spectral.hpp"
#include "support.hpp"

using namespace roughlab;
using roughlab::testing::gaussian;
using roughlab::testing::max_abs_diff;
using roughlab::testing::random_field;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("grid rejects odd, small and non-positive parameters") {
  CHECK_THROWS_AS(Grid(2, 7, 1.0), ConfigurationError);
  CHECK_THROWS_AS(Grid(2, 6, 1.0), ConfigurationError);
  CHECK_THROWS_AS(Grid(4, 8, 1.0), ConfigurationError);
  CHECK_THROWS_AS(Grid(2, 8, 0.0), ConfigurationError);
  const Grid g(3, 16, 5.0);
  CHECK(g.spacing() * g.points() == g.box_length());
  CHECK(g.size() == 4096);
  CHECK(g.coordinate(g.origin_index()) == 0.0);
}

TEST_CASE("ravel and unravel are inverse with periodic wrap") {
  const Grid g(3, 8, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.ravel(g.unravel(i)) == i);
  CHECK(g.ravel({-1, 0, 9}) == g.ravel({7, 0, 1}));
}

TEST_CASE("constant field transforms to a single zero mode") {
  const Grid g(2, 16, 3.0);
  Field c(g);
  for (double& v : c.values()) v = 2.5;
  const Spectrum s = forward(c);
  CHECK(s[0].real() == doctest::Approx(2.5 * g.volume()).epsilon(1e-14));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i]) < 1e-12);
}

TEST_CASE("plane wave has exactly two nonzero modes") {
  const Grid g(2, 16, 4.0);
  const Field f = Field::sample(g, [&](const Point& x) { return std::cos(2 * pi * x[0] / g.box_length()); });
  const Spectrum s = forward(f);
  int nonzero = 0;
  for_each_mode(g, [&](std::size_t flat, const WaveVector& w) {
    if (std::abs(s[flat]) > 1e-10) {
      ++nonzero;
      CHECK(std::abs(std::abs(w.xi[0]) - g.fundamental()) < 1e-12);
      CHECK(w.xi[1] == 0.0);
    }
  });
  // Last-axis storage is halved; axis 0 keeps both +k and -k.
  CHECK(nonzero == 2);
}

TEST_CASE("forward and inverse round trip random fields, and Parseval holds") {
  for (int n : {2, 3}) {
    const Grid g(n, n == 2 ? 32 : 16, 7.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Field f = random_field(g, seed);
      const Spectrum s = forward(f);
      const Field back = inverse(s);
      CHECK(max_abs_diff(back, f) <= 1e-12 * f.max_abs());
      const double phys = lebesgue_norm(f, 2.0);
      CHECK(std::abs(spectral_l2_norm(s) - phys) <= 1e-12 * phys);
    }
  }
}

TEST_CASE("snapshot-sized transforms refuse mismatched storage") {
  const Grid g(2, 8, 1.0);
  CHECK_THROWS_AS(Field(g, std::vector<double>(10)), ConfigurationError);
  CHECK_THROWS_AS(Spectrum(g, std::vector<std::complex<double>>(3)), ConfigurationError);
}

TEST_CASE("derivative multiplier differentiates a single mode exactly") {
  const Grid g(2, 32, 5.0);
  const double k = 2 * pi / g.box_length();
  const Field f = Field::sample(g, [&](const Point& x) { return std::cos(k * x[0]); });
  const auto grad = gradient(f);
  const Field expected = Field::sample(g, [&](const Point& x) { return -k * std::sin(k * x[0]); });
  CHECK(max_abs_diff(grad[0], expected) < 1e-12);
  CHECK(grad[1].max_abs() < 1e-12);
}

TEST_CASE("heat multiplier evolves a Gaussian in closed form") {
  for (int n : {2, 3}) {
    const Grid g(n, n == 2 ? 128 : 64, 24.0);
    const double a = 0.5, t = 0.7;
    const Field f = Field::sample(g, [&](const Point& x) { return std::exp(-testing::norm2(x) / (4 * a)); });
    const Field got = apply_multiplier(f, multipliers::heat(t));
    const Field want = Field::sample(g, [&](const Point& x) {
      return std::exp(-testing::norm2(x) / (4 * (a + t))) * std::pow(a / (a + t), 0.5 * n);
    });
    CHECK(testing::l2_diff_rel(got, want) <= 1e-6);
  }
}

TEST_CASE("inverse square root Laplacian pair is the identity on mean-zero fields") {
  const Grid g(2, 32, 6.0);
  const Field f = project_mean_zero(random_field(g, 3));
  const Field back = apply_multiplier(apply_multiplier(f, multipliers::fractional_laplacian(-1.0)),
                                      multipliers::fractional_laplacian(1.0));
  CHECK(max_abs_diff(back, f) <= 1e-10 * f.max_abs());
}

TEST_CASE("negative-order multiplier with identity zero mode rejects constants") {
  const Grid g(2, 16, 1.0);
  Field f(g);
  for (double& v : f.values()) v = 1.0;
  Multiplier m = multipliers::fractional_laplacian(-1.0);
  m.zero_mode = ZeroModePolicy::identity;
  CHECK_THROWS_WITH_AS(apply_multiplier(f, m), "inverse multiplier undefined on constants", DomainError);
  CHECK_THROWS_AS(apply(forward(f), m), DomainError);
  CHECK_NOTHROW(apply_multiplier(project_mean_zero(testing::random_field(g, 1)), m));
}

TEST_CASE("multiplier symbols are conjugate symmetric") {
  const Grid g(3, 8, 2.0);
  for (const Multiplier& m : {multipliers::derivative(0), multipliers::derivative(2), multipliers::riesz(1),
                              multipliers::heat(0.3), multipliers::fractional_laplacian(-1.0)}) {
    for_each_mode(g, [&](std::size_t, const WaveVector& w) {
      if (w.is_zero()) return;
      WaveVector neg = w;
      for (int d = 0; d < 3; ++d) neg.xi[d] = w.nyquist[d] ? w.xi[d] : -w.xi[d];
      CHECK(std::abs(m.symbol(neg) - std::conj(m.symbol(w))) < 1e-14);
    });
  }
}

TEST_CASE("applying two multipliers equals applying their product") {
  const Grid g(2, 32, 6.0);
  const Field f = random_field(g, 11);
  const Multiplier a = multipliers::derivative(0), b = multipliers::heat(0.05);
  const Field seq = apply_multiplier(apply_multiplier(f, b), a);
  const Field prod = apply_multiplier(f, compose(a, b));
  CHECK(max_abs_diff(seq, prod) <= 1e-12 * prod.max_abs());
}

TEST_CASE("lebesgue norm: plateau, homogeneity, Gaussian and domain") {
  const Grid g(2, 64, 4.0);
  const Field plateau = Field::sample(g, [](const Point& x) { return x[0] < 0.0 ? 1.0 : 0.0; });
  CHECK(std::abs(lebesgue_norm(plateau, 1.0) - g.volume() / 2) <= g.cell_volume());
  const Field f = random_field(g, 5);
  CHECK(lebesgue_norm(3.0 * f, 2.5) == doctest::Approx(3.0 * lebesgue_norm(f, 2.5)).epsilon(1e-15));
  CHECK(lebesgue_norm(-2.0 * f, INFINITY) == 2.0 * lebesgue_norm(f, INFINITY));
  CHECK_THROWS_AS(lebesgue_norm(f, 0.5), DomainError);

  const Grid big(2, 256, 20.0);
  const Field gauss = Field::sample(big, [](const Point& x) { return std::exp(-testing::norm2(x)); });
  CHECK(std::abs(lebesgue_norm(gauss, 2.0) - std::sqrt(pi / 2)) <= 1e-6);
}

TEST_CASE("lebesgue norm is monotone in p on a unit-volume box") {
  const Grid g(2, 32, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Field f = random_field(g, seed);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, 12.0}) {
      const double v = lebesgue_norm(f, p);
      CHECK(v >= prev * (1 - 1e-14));
      prev = v;
    }
    CHECK(lebesgue_norm(f, INFINITY) >= prev * (1 - 1e-14));
  }
}

TEST_CASE("resample_dilate: identity, composition, invariance and errors") {
  const Grid g(2, 64, 10.0);
  const Field f = Field::sample(g, [](const Point& x) { return std::exp(-testing::norm2(x)); });
  const Field same = resample_dilate(f, 1.0, 1.0);
  CHECK(same == f);

  const Field onto = resample_dilate(f, 2.0, 1.0, g);
  const Field want = Field::sample(g, [](const Point& x) { return 2.0 * std::exp(-4.0 * testing::norm2(x)); });
  // Target points beyond |x| = L/4 read past the source box and stay zero; the Gaussian there is ~3e-11.
  CHECK(max_abs_diff(onto, want) <= 1e-10);

  const Field companion = resample_dilate(f, 2.0, 1.0);
  CHECK(companion.grid().box_length() == 5.0);
  for (std::size_t i = 0; i < g.size(); i += 97) {
    const Point x = companion.grid().position(i);
    CHECK(std::abs(companion[i] - 2.0 * std::exp(-4.0 * testing::norm2(x))) <= 1e-12);
  }
  // L^n is invariant for amplitude power 1 (n = 2 here).
  CHECK(std::abs(lebesgue_norm(companion, 2.0) - lebesgue_norm(f, 2.0)) <= 1e-6);

  CHECK_THROWS_AS(resample_dilate(f, 3.0, 1.0), DomainError);
  // A quarter-size target box only reads the central half of the source.
  const Grid small(2, 32, 2.5);
  const Field wide = Field::sample(g, [](const Point& x) { return std::exp(-testing::norm2(x) / 4.0); });
  CHECK_THROWS_WITH_AS(resample_dilate(wide, 2.0, 1.0, small), "dilation escapes the box", DomainError);
  const Field narrow = Field::sample(g, [](const Point& x) { return std::exp(-8.0 * testing::norm2(x)); });
  CHECK_NOTHROW(resample_dilate(narrow, 2.0, 1.0, small));
}

TEST_CASE("RDF1 snapshots round trip bit-identically and reject bad headers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "roughlab_test_field";
  fs::create_directories(dir);
  const Grid g(3, 8, 1.0 / 3.0);
  const Field f = random_field(g, 9);
  const std::string path = (dir / "f.rdf").string();
  write_snapshot(path, f);
  const Field back = read_field_snapshot(path, g);
  CHECK(back == f);
  {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("RDF1 n=3 N=8 L=", 0) == 0);
    CHECK(line.find("repr=phys") != std::string::npos);
  }
  const Spectrum s = forward(f);
  const std::string spath = (dir / "s.rdf").string();
  write_snapshot(spath, s);
  CHECK(read_spectrum_snapshot(spath, g) == s);
  CHECK(std::holds_alternative<Spectrum>(read_snapshot(spath)));

  CHECK_THROWS_AS(read_field_snapshot(path, Grid(3, 8, 1.0)), ConfigurationError);
  CHECK_THROWS_AS(read_field_snapshot(spath), ConfigurationError);
  {
    std::ofstream bad((dir / "bad.rdf").string(), std::ios::binary);
    bad << "RDF2 n=2 N=8 L=1 repr=phys\n";
  }
  CHECK_THROWS_AS(read_snapshot((dir / "bad.rdf").string()), ConfigurationError);
  {
    std::ofstream trunc((dir / "trunc.rdf").string(), std::ios::binary);
    trunc << "RDF1 n=2 N=8 L=1 repr=phys\n" << "abc";
  }
  CHECK_THROWS_AS(read_snapshot((dir / "trunc.rdf").string()), ConfigurationError);
  fs::remove_all(dir);
}
