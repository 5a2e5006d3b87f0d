#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace lab {

/// Hardcoded middle-thirds Cantor measure test oracle. The transform is the
/// product formula mu^(xi) = e^{-pi i xi} prod_{i>=1} cos(2 pi xi / 3^i),
/// truncated `tail_levels` ternary levels past the scale of xi (where the
/// remaining factors are within 3^(-2*tail_levels) of 1).
std::complex<double> cantor_transform(double xi, int tail_levels = 12);
double cantor_transform_modulus(double xi, int tail_levels = 12);

/// |mu^(j)| for j = 1..j_max.
std::vector<double> cantor_moduli(std::uint64_t j_max, int tail_levels = 12);

}  // namespace lab
