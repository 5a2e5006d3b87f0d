#pragma once

#include <cstdint>

#include "lab/cylinder_set.hpp"
#include "lab/dyadic_measure.hpp"

namespace lab {

struct EnergyResult {
  double s = 0.0;
  double value = 0.0;
  double diagonal_share = 0.0;  // fraction of value from same-cell pairs
  bool finite_depth_warning = false;  // s >= 1: true I_s may be infinite
};

/// Exact mean of |x-y|^-s over two depth-n cells whose centers are
/// cell_distance * h apart (h = cell length). cell_distance = 0 is the
/// same-cell case. Second differences of H(u) = u^(2-s)/((1-s)(2-s)) for
/// nearby cells, an even Taylor series of the same quantity for far cells.
double riesz_cell_kernel(std::uint64_t cell_distance, double h, double s);

/// I_s(mu) for the piecewise-constant density associated with mu. Small
/// supports use O(C^2) pair summation; large dense supports use an FFT
/// autocorrelation of the weight array.
EnergyResult riesz_energy(const DyadicMeasure& mu, double s);

namespace ref {
/// Serial O(C^2) reference, kept for testing and benchmarks.
EnergyResult riesz_energy_direct(const DyadicMeasure& mu, double s);
}  // namespace ref

/// cell_length^-s * mass^2 / cell_count: the Cauchy-Schwarz lower bound on
/// the diagonal-cell contribution of a measure placing `mass` on
/// `cell_count` cells of length `cell_length`.
double energy_cell_lower_bound(double mass, std::uint64_t cell_count,
                               double cell_length, double s);

struct DominationReport {
  double energy = 0.0;
  double bound = 0.0;
  bool dominated = false;
};

DominationReport verify_energy_dominates_bound(const DyadicMeasure& mu,
                                               const CylinderSet& set,
                                               double s);

}  // namespace lab
