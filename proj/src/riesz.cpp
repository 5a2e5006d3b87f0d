#include "lab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace lab {

namespace {

// Antiderivative-of-antiderivative of u^-s: H'' = u^-s, H(0) = 0.
double kernel_H(double u, double s) {
  if (u == 0.0) return 0.0;
  if (s == 1.0) return u * (std::log(u) - 1.0);
  return std::exp((2.0 - s) * std::log(u)) / ((1.0 - s) * (2.0 - s));
}

// Even Taylor series of the second difference around distance d*h; stable
// when the direct difference would cancel catastrophically.
double kernel_series(double d, double h, double s) {
  double sum = 1.0;
  double term = 1.0;
  const double inv_d2 = 1.0 / (d * d);
  // term_m = 2 * prod_{i=0}^{2m-1}(s+i) / (2m+2)! * d^-2m
  for (int m = 1; m <= 40; ++m) {
    const double i0 = s + (2 * m - 2);
    const double i1 = s + (2 * m - 1);
    term *= i0 * i1 * inv_d2 * (2.0 * m) /
            ((2.0 * m + 2.0) * (2.0 * m + 1.0) * (2.0 * m));
    sum += term;
    if (std::abs(term) < 1e-17 * sum) break;
  }
  return std::exp(-s * std::log(d * h)) * sum;
}

constexpr std::size_t kDirectPairLimit = 8192;

struct CellData {
  std::vector<std::uint64_t> idx;
  std::vector<double> w;
};

CellData gather(const DyadicMeasure& mu) {
  CellData c;
  mu.for_each_nonzero([&](std::uint64_t p, double v) {
    c.idx.push_back(p);
    c.w.push_back(v);
  });
  return c;
}

EnergyResult energy_from_pairs(const CellData& cells, double h, double s) {
  const std::int64_t n = static_cast<std::int64_t>(cells.idx.size());
  std::vector<double> row_sums(n, 0.0);
  std::vector<double> row_diag(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double wi = cells.w[i];
    double acc = wi * wi * riesz_cell_kernel(0, h, s);
    row_diag[i] = acc;
    for (std::int64_t q = i + 1; q < n; ++q) {
      const std::uint64_t d = cells.idx[q] - cells.idx[i];
      acc += 2.0 * wi * cells.w[q] * riesz_cell_kernel(d, h, s);
    }
    row_sums[i] = acc;
  }
  EnergyResult result;
  result.s = s;
  double total = 0.0, diag = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    total += row_sums[i];
    diag += row_diag[i];
  }
  result.value = total;
  result.diagonal_share = total > 0.0 ? diag / total : 0.0;
  return result;
}

// Pair sums grouped by cell distance via an FFT autocorrelation of the dense
// weight array: energy = R[0] K(0) + sum_{d>=1} 2 R[d] K(d).
EnergyResult energy_from_autocorrelation(const std::vector<double>& w,
                                         double h, double s) {
  const std::size_t N = w.size();
  const std::size_t M = 2 * N;  // zero padding for linear correlation
  std::vector<double> in(M, 0.0);
  std::copy(w.begin(), w.end(), in.begin());
  std::vector<std::complex<double>> spec(M / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(
      static_cast<int>(M), in.data(),
      reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (auto& z : spec) z = std::norm(z);
  std::vector<double> corr(M);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(
      static_cast<int>(M), reinterpret_cast<fftw_complex*>(spec.data()),
      corr.data(), FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  const double scale = 1.0 / static_cast<double>(M);

  const std::int64_t count = static_cast<std::int64_t>(N);
  // Deterministic blocked reduction: parallel block sums, serial combine.
  constexpr std::int64_t kBlock = 1 << 14;
  const std::int64_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<double> block_sums(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < blocks; ++bi) {
    double acc = 0.0;
    const std::int64_t lo = bi * kBlock;
    const std::int64_t hi = std::min(lo + kBlock, count);
    for (std::int64_t d = lo; d < hi; ++d) {
      if (d == 0) continue;
      acc += 2.0 * corr[d] * scale * riesz_cell_kernel(d, h, s);
    }
    block_sums[bi] = acc;
  }
  double off_diag = 0.0;
  for (double v : block_sums) off_diag += v;
  const double diag = corr[0] * scale * riesz_cell_kernel(0, h, s);

  EnergyResult result;
  result.s = s;
  result.value = diag + off_diag;
  result.diagonal_share = result.value > 0.0 ? diag / result.value : 0.0;
  return result;
}

}  // namespace

double riesz_cell_kernel(std::uint64_t cell_distance, double h, double s) {
  if (!(s > 0.0)) {
    throw std::invalid_argument("riesz_cell_kernel: need s > 0");
  }
  if (cell_distance == 0) {
    if (s >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::exp(-s * std::log(h)) / ((1.0 - s) * (2.0 - s));
  }
  const double d = static_cast<double>(cell_distance);
  if (cell_distance <= 8) {
    return (kernel_H((d + 1.0) * h, s) - 2.0 * kernel_H(d * h, s) +
            kernel_H((d - 1.0) * h, s)) /
           (h * h);
  }
  return kernel_series(d, h, s);
}

EnergyResult riesz_energy(const DyadicMeasure& mu, double s) {
  if (!(s > 0.0)) {
    throw std::invalid_argument("riesz_energy: need s > 0");
  }
  const double h = mu.cell_length();
  const CellData cells = gather(mu);
  EnergyResult result;
  if (s >= 1.0) {
    // The piecewise-constant density has divergent same-cell energy here.
    result.finite_depth_warning = true;
    bool any_mass = false;
    for (double v : cells.w) any_mass |= (v > 0.0);
    if (any_mass) {
      result.s = s;
      result.value = std::numeric_limits<double>::infinity();
      result.diagonal_share = 1.0;
      return result;
    }
  }
  if (cells.idx.size() <= kDirectPairLimit ||
      mu.depth() > 26) {  // dense array would not fit; fall back to pairs
    result = energy_from_pairs(cells, h, s);
  } else {
    const std::vector<double>& w = mu.is_sparse()
                                       ? mu.densified().dense_weights()
                                       : mu.dense_weights();
    result = energy_from_autocorrelation(w, h, s);
  }
  return result;
}

namespace ref {

EnergyResult riesz_energy_direct(const DyadicMeasure& mu, double s) {
  if (!(s > 0.0)) {
    throw std::invalid_argument("riesz_energy_direct: need s > 0");
  }
  const double h = mu.cell_length();
  const CellData cells = gather(mu);
  const std::size_t n = cells.idx.size();
  double total = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d0 = cells.w[i] * cells.w[i] * riesz_cell_kernel(0, h, s);
    diag += d0;
    total += d0;
    for (std::size_t q = i + 1; q < n; ++q) {
      const std::uint64_t d = cells.idx[q] - cells.idx[i];
      total += 2.0 * cells.w[i] * cells.w[q] * riesz_cell_kernel(d, h, s);
    }
  }
  EnergyResult result;
  result.s = s;
  result.value = total;
  result.diagonal_share = total > 0.0 ? diag / total : 0.0;
  return result;
}

}  // namespace ref

double energy_cell_lower_bound(double mass, std::uint64_t cell_count,
                               double cell_length, double s) {
  if (!(mass >= 0.0) || cell_count < 1 || !(cell_length > 0.0)) {
    throw std::invalid_argument("energy_cell_lower_bound: bad arguments");
  }
  return std::pow(cell_length, -s) * mass * mass /
         static_cast<double>(cell_count);
}

DominationReport verify_energy_dominates_bound(const DyadicMeasure& mu,
                                               const CylinderSet& set,
                                               double s) {
  DominationReport report;
  report.energy = riesz_energy(mu, s).value;
  report.bound = set.size() == 0
                     ? 0.0
                     : energy_cell_lower_bound(mu.mass_of(set), set.size(),
                                               set.cell_length(), s);
  report.dominated = report.energy >= report.bound;
  return report;
}

}  // namespace lab
