#pragma once

#include <optional>
#include <string>
#include <variant>

#include "roughlab/grid.hpp"

namespace roughlab {

/// RDF1 format: one text header line
///   RDF1 n=<n> N=<points> L=<box_length> repr=<phys|spec>
/// then little-endian IEEE doubles, row-major, spectra as interleaved (re, im).
void write_snapshot(const std::string& path, const Field& field);
void write_snapshot(const std::string& path, const Spectrum& spectrum);

std::variant<Field, Spectrum> read_snapshot(const std::string& path);
/// Rejects files whose header does not describe a physical field on `expected`.
Field read_field_snapshot(const std::string& path, const std::optional<Grid>& expected = std::nullopt);
Spectrum read_spectrum_snapshot(const std::string& path, const std::optional<Grid>& expected = std::nullopt);

}  // namespace roughlab
