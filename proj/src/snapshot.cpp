#include "roughlab/snapshot.hpp"

#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "roughlab/error.hpp"

namespace roughlab {

namespace {

std::string header_line(const Grid& g, const char* repr) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "RDF1 n=%d N=%d L=%.17g repr=%s\n", g.dim(), g.points(), g.box_length(), repr);
  return buf;
}

void put_doubles(std::ofstream& out, const double* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      auto bits = std::bit_cast<std::uint64_t>(data[i]);
      unsigned char bytes[8];
      for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
      out.write(reinterpret_cast<const char*>(bytes), 8);
    }
  }
}

void get_doubles(std::ifstream& in, double* data, std::size_t count, const std::string& path) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < count && in; ++i) {
      unsigned char bytes[8];
      in.read(reinterpret_cast<char*>(bytes), 8);
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
      data[i] = std::bit_cast<double>(bits);
    }
  }
  if (!in) throw ConfigurationError(path + ": truncated RDF1 payload");
  if (in.peek() != std::ifstream::traits_type::eof()) throw ConfigurationError(path + ": trailing bytes after RDF1 payload");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": " + std::strerror(errno));
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed: " + std::strerror(errno));
}

struct Header {
  Grid grid;
  bool spectral;
};

Header parse_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigurationError(path + ": missing RDF1 header");
  std::istringstream ss(line);
  std::string magic, fn, fN, fL, frepr;
  ss >> magic >> fn >> fN >> fL >> frepr;
  std::string rest;
  if (magic != "RDF1" || fn.rfind("n=", 0) != 0 || fN.rfind("N=", 0) != 0 || fL.rfind("L=", 0) != 0 ||
      frepr.rfind("repr=", 0) != 0 || (ss >> rest))
    throw ConfigurationError(path + ": malformed RDF1 header '" + line + "'");
  const std::string repr = frepr.substr(5);
  if (repr != "phys" && repr != "spec") throw ConfigurationError(path + ": unknown representation '" + repr + "'");
  try {
    std::size_t used = 0;
    const int n = std::stoi(fn.substr(2), &used);
    if (used != fn.size() - 2) throw std::invalid_argument("n");
    const int N = std::stoi(fN.substr(2), &used);
    if (used != fN.size() - 2) throw std::invalid_argument("N");
    const double L = std::stod(fL.substr(2), &used);
    if (used != fL.size() - 2) throw std::invalid_argument("L");
    return Header{Grid(n, N, L), repr == "spec"};
  } catch (const std::logic_error&) {
    throw ConfigurationError(path + ": malformed RDF1 header '" + line + "'");
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": " + std::strerror(errno));
  return in;
}

void check_expected(const Header& h, const std::optional<Grid>& expected, bool want_spectral, const std::string& path) {
  if (h.spectral != want_spectral)
    throw ConfigurationError(path + ": representation is " + (h.spectral ? "spec" : "phys") + ", expected " +
                             (want_spectral ? "spec" : "phys"));
  if (expected && !(h.grid == *expected)) throw ConfigurationError(path + ": grid in header does not match expected grid");
}

}  // namespace

void write_snapshot(const std::string& path, const Field& field) {
  auto out = open_out(path);
  out << header_line(field.grid(), "phys");
  put_doubles(out, field.values().data(), field.size());
  finish(out, path);
}

void write_snapshot(const std::string& path, const Spectrum& spectrum) {
  auto out = open_out(path);
  out << header_line(spectrum.grid(), "spec");
  put_doubles(out, reinterpret_cast<const double*>(spectrum.coeffs().data()), 2 * spectrum.size());
  finish(out, path);
}

std::variant<Field, Spectrum> read_snapshot(const std::string& path) {
  auto in = open_in(path);
  const Header h = parse_header(in, path);
  if (h.spectral) {
    Spectrum s(h.grid);
    get_doubles(in, reinterpret_cast<double*>(s.coeffs().data()), 2 * s.size(), path);
    return s;
  }
  Field f(h.grid);
  get_doubles(in, f.values().data(), f.size(), path);
  return f;
}

Field read_field_snapshot(const std::string& path, const std::optional<Grid>& expected) {
  auto in = open_in(path);
  const Header h = parse_header(in, path);
  check_expected(h, expected, false, path);
  Field f(h.grid);
  get_doubles(in, f.values().data(), f.size(), path);
  return f;
}

Spectrum read_spectrum_snapshot(const std::string& path, const std::optional<Grid>& expected) {
  auto in = open_in(path);
  const Header h = parse_header(in, path);
  check_expected(h, expected, true, path);
  Spectrum s(h.grid);
  get_doubles(in, reinterpret_cast<double*>(s.coeffs().data()), 2 * s.size(), path);
  return s;
}

}  // namespace roughlab
