#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lab::oracles {

struct OracleResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Adaptive Simpson quadrature on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 40);

/// Mean of |x-y|^-s over two cells of length h at center distance d, by
/// quadrature with a singularity-absorbing substitution. Independent of the
/// closed-form kernel.
double cell_kernel_by_quadrature(std::uint64_t cell_distance, double h,
                                 double s);

/// I_s of Lebesgue on [0,1] by quadrature (independent of the energy code).
double lebesgue_energy_by_quadrature(double s);

/// Runs every derived-value oracle: quadrature kernels, brute-force digit
/// classification, exhaustive small minimax, pushforward identities,
/// batch-vs-direct transforms, pulse coefficients, inclusion-exclusion.
std::vector<OracleResult> run_all();

}  // namespace lab::oracles
