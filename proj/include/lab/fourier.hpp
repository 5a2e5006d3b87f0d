#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "lab/atomic_measure.hpp"
#include "lab/dyadic_measure.hpp"

namespace lab {

/// sin(x)/x with a Taylor branch near zero.
double sinc(double x);

/// mu^(xi) = integral of e^{-2 pi i xi x} d mu.
std::complex<double> fourier_transform(const DyadicMeasure& mu, double xi);
std::complex<double> fourier_transform(const AtomicMeasure& mu, double xi);

struct BatchTransform {
  std::vector<std::complex<double>> values;  // values[j] = mu^(j), j = 0..j_max
  bool resolution_warning = false;           // j_max exceeded 2^depth
};

/// mu^(j) for j = 0..j_max. Dense measures go through a real FFT of the
/// weight array plus the per-frequency sinc/phase correction; sparse measures
/// use direct summation parallelized over frequencies.
BatchTransform batch_integer_transform(const DyadicMeasure& mu,
                                       std::uint64_t j_max);

namespace ref {
/// Serial direct-summation reference, kept for testing and benchmarks.
std::vector<std::complex<double>> batch_integer_transform(
    const DyadicMeasure& mu, std::uint64_t j_max);
}  // namespace ref

/// argmax and max of |mu^(j)| over integers in [j_lo, j_hi], ties toward
/// the smallest j.
std::pair<std::uint64_t, double> sup_abs_transform(const DyadicMeasure& mu,
                                                   std::uint64_t j_lo,
                                                   std::uint64_t j_hi);

struct DecayBand {
  std::uint64_t lo = 0;  // band is [lo, hi)
  std::uint64_t hi = 0;
  double sup_abs = 0.0;
  std::uint64_t j_star = 0;
};

struct DecayReport {
  std::vector<DecayBand> windows;
  double fitted_exponent = 0.0;  // +inf sentinel when all sups vanish
  double fourier_dim_estimate = 0.0;
  std::uint64_t j_max = 0;
  bool resolution_warning = false;
};

/// Sup of |mu^| per dyadic frequency band, least-squares decay exponent on
/// (log band center, log sup), and dim estimate min(1, 2 beta).
DecayReport estimate_decay(const DyadicMeasure& mu, std::uint64_t j_max,
                           int band_count = 62);

/// Same fit on precomputed moduli, moduli[i] = |mu^| at frequency i+1 (used
/// for half-integer grids and the Cantor oracle).
DecayReport estimate_decay_from_moduli(const std::vector<double>& moduli,
                                       int band_count = 62);

}  // namespace lab
