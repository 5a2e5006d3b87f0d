#include "lab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace lab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNoiseFloor = 1e-13;
}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

std::complex<double> fourier_transform(const DyadicMeasure& mu, double xi) {
  const int n = mu.depth();
  const double h = std::ldexp(1.0, -n);
  const double box = sinc(std::numbers::pi * xi * h);
  std::complex<double> acc{0.0, 0.0};
  mu.for_each_nonzero([&](std::uint64_t p, double w) {
    const double center = (static_cast<double>(p) + 0.5) * h;
    acc += w * std::polar(1.0, -kTwoPi * xi * center);
  });
  return acc * box;
}

std::complex<double> fourier_transform(const AtomicMeasure& mu, double xi) {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& a : mu.atoms) {
    acc += a.mass * std::polar(1.0, -kTwoPi * xi * a.position);
  }
  return acc;
}

namespace {

// Direct evaluation, parallel over frequencies. Each frequency's sum runs in
// fixed cell order, so results do not depend on the thread count.
std::vector<std::complex<double>> batch_direct(const DyadicMeasure& mu,
                                               std::uint64_t j_max) {
  const int n = mu.depth();
  const double h = std::ldexp(1.0, -n);
  std::vector<std::uint64_t> idx;
  std::vector<double> wts;
  mu.for_each_nonzero([&](std::uint64_t p, double w) {
    idx.push_back(p);
    wts.push_back(w);
  });
  const std::int64_t count = static_cast<std::int64_t>(j_max) + 1;
  std::vector<std::complex<double>> out(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < count; ++j) {
    const double xi = static_cast<double>(j);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const double center = (static_cast<double>(idx[i]) + 0.5) * h;
      acc += wts[i] * std::polar(1.0, -kTwoPi * xi * center);
    }
    out[j] = acc * sinc(std::numbers::pi * xi * h);
  }
  return out;
}

// Length-2^n real FFT of the weight array, then the per-frequency sinc and
// midpoint-phase correction. Exact for every integer j via j mod 2^n.
std::vector<std::complex<double>> batch_fft(const std::vector<double>& w,
                                            int depth, std::uint64_t j_max) {
  const std::size_t N = std::size_t{1} << depth;
  const double h = std::ldexp(1.0, -depth);
  std::vector<double> in(w);
  std::vector<std::complex<double>> spec(N / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(
      static_cast<int>(N), in.data(),
      reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const std::int64_t count = static_cast<std::int64_t>(j_max) + 1;
  std::vector<std::complex<double>> out(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < count; ++j) {
    const std::uint64_t jm = static_cast<std::uint64_t>(j) & (N - 1);
    const std::complex<double> dft =
        jm <= N / 2 ? spec[jm] : std::conj(spec[N - jm]);
    const double x = std::numbers::pi * static_cast<double>(j) * h;
    out[j] = dft * std::polar(sinc(x), -x);
  }
  return out;
}

}  // namespace

BatchTransform batch_integer_transform(const DyadicMeasure& mu,
                                       std::uint64_t j_max) {
  BatchTransform result;
  result.resolution_warning = j_max > mu.cell_count();
  const std::size_t c = mu.nonzero_count();
  const std::size_t N = std::size_t{1} << mu.depth();
  // FFT costs ~N log N regardless of j_max; direct costs c * j_max.
  const double fft_cost = static_cast<double>(N) * (mu.depth() + 8);
  const double direct_cost =
      static_cast<double>(c) * static_cast<double>(j_max + 1);
  if (direct_cost > fft_cost && N >= 64) {
    if (mu.is_sparse()) {
      result.values = batch_fft(mu.densified().dense_weights(), mu.depth(),
                                j_max);
    } else {
      result.values = batch_fft(mu.dense_weights(), mu.depth(), j_max);
    }
  } else {
    result.values = batch_direct(mu, j_max);
  }
  return result;
}

namespace ref {

std::vector<std::complex<double>> batch_integer_transform(
    const DyadicMeasure& mu, std::uint64_t j_max) {
  std::vector<std::complex<double>> out;
  out.reserve(j_max + 1);
  for (std::uint64_t j = 0; j <= j_max; ++j) {
    out.push_back(fourier_transform(mu, static_cast<double>(j)));
  }
  return out;
}

}  // namespace ref

std::pair<std::uint64_t, double> sup_abs_transform(const DyadicMeasure& mu,
                                                   std::uint64_t j_lo,
                                                   std::uint64_t j_hi) {
  if (j_lo < 1 || j_lo > j_hi) {
    throw std::invalid_argument("sup_abs_transform: need 1 <= j_lo <= j_hi");
  }
  const BatchTransform batch = batch_integer_transform(mu, j_hi);
  std::uint64_t j_star = j_lo;
  double best = -1.0;
  for (std::uint64_t j = j_lo; j <= j_hi; ++j) {
    const double v = std::abs(batch.values[j]);
    if (v > best) {
      best = v;
      j_star = j;
    }
  }
  return {j_star, best};
}

DecayReport estimate_decay_from_moduli(const std::vector<double>& moduli,
                                       int band_count) {
  const std::uint64_t j_max = moduli.size();
  DecayReport report;
  report.j_max = j_max;
  std::size_t complete_bands = 0;
  for (int t = 0; t < band_count; ++t) {
    const std::uint64_t lo = std::uint64_t{1} << t;
    if (lo > j_max) break;
    const std::uint64_t hi = std::min(std::uint64_t{1} << (t + 1), j_max + 1);
    DecayBand band{lo, hi, 0.0, lo};
    for (std::uint64_t j = lo; j < hi; ++j) {
      if (moduli[j - 1] > band.sup_abs) {
        band.sup_abs = moduli[j - 1];
        band.j_star = j;
      }
    }
    report.windows.push_back(band);
    if (hi == lo * 2) ++complete_bands;
  }
  // Least squares of log sup against log band center, above the noise floor.
  // A truncated final band samples only part of its frequency range and
  // would bias the slope, so only complete bands enter the fit.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (std::size_t bi = 0; bi < complete_bands; ++bi) {
    const DecayBand& band = report.windows[bi];
    if (band.sup_abs < kNoiseFloor) continue;
    const double x =
        std::log(0.5 * static_cast<double>(band.lo + band.hi - 1));
    const double y = std::log(band.sup_abs);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++npts;
  }
  if (npts == 0) {
    report.fitted_exponent = std::numeric_limits<double>::infinity();
    report.fourier_dim_estimate = 1.0;
    return report;
  }
  if (npts == 1) {
    report.fitted_exponent = 0.0;
    report.fourier_dim_estimate = 0.0;
    return report;
  }
  const double slope =
      (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  report.fitted_exponent = std::max(0.0, -slope);
  report.fourier_dim_estimate = std::min(1.0, 2.0 * report.fitted_exponent);
  return report;
}

DecayReport estimate_decay(const DyadicMeasure& mu, std::uint64_t j_max,
                           int band_count) {
  if (j_max < 8) {
    throw std::invalid_argument("estimate_decay: j_max too small");
  }
  const BatchTransform batch = batch_integer_transform(mu, j_max);
  std::vector<double> moduli(j_max);
  for (std::uint64_t j = 1; j <= j_max; ++j) {
    moduli[j - 1] = std::abs(batch.values[j]);
  }
  DecayReport report = estimate_decay_from_moduli(moduli, band_count);
  report.resolution_warning = batch.resolution_warning;
  return report;
}

}  // namespace lab
