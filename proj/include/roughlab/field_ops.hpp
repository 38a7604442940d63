#pragma once

#include "roughlab/grid.hpp"

namespace roughlab {

/// Riemann sum (sum |v|^p h^n)^{1/p}; p = infinity gives the max norm.
double lebesgue_norm(const Field& field, double p);

/// x -> lambda^amplitude_power * field(lambda x) on the companion grid (box L/lambda).
///
/// lambda must be a power of two; values are copied, never interpolated.
Field resample_dilate(const Field& field, double lambda, double amplitude_power);

/// Same map sampled on an explicit target grid.
///
/// lambda * target.spacing() must be an integer power-of-two multiple of the source
/// spacing. Target points whose preimage leaves the source box read zero; any
/// source value above tolerance outside the index range the target covers
/// raises "dilation escapes the box".
Field resample_dilate(const Field& field, double lambda, double amplitude_power, const Grid& target,
                      double tolerance = 1e-12);

/// Integer k with lambda == 2^k, or a DomainError.
int power_of_two_exponent(double lambda);

}  // namespace roughlab
