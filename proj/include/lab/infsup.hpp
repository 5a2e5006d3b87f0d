#pragma once

#include <cstdint>
#include <vector>

#include "lab/atomic_measure.hpp"

namespace lab {

/// pi*eps / (8 + 2*pi*eps), the lower bound for inf over P([eps,1]) of
/// sup_{j>=1} |mu^(j)|.
double lemma_paper_bound(double eps);

/// Allowance for truncating the sup at j <= J: the duality chain with the
/// triangle pulse gives sup_{j<=J} |mu^(j)| >= bound - slack for every
/// mu in P([eps,1]). Nonnegative, -> 0 as J grows.
double lemma_truncation_slack(double eps, std::uint64_t J);

struct PulseProfile {
  double epsilon = 0.0;
  std::vector<double> coefficients;  // |phi^(k)| for k = 0..K
  double tail_bound = 0.0;           // (4 + pi eps) / (pi eps)
};

/// Fourier coefficient moduli sinc^2(k pi eps / 2) of the triangle pulse on
/// [0, eps].
PulseProfile triangle_pulse_coefficients(double eps, int K);

struct PulseSum {
  double numeric_sum = 0.0;
  double bound = 0.0;
};

/// Sum_{k=1..K} sinc^2(k pi eps / 2) together with the closed-form bound.
PulseSum pulse_sum_bound(double eps, int K);

struct DualityBound {
  double lower_bound = 0.0;       // (1/2) / (sum + tail), >= paper bound
  double pairing_residual = 0.0;  // |1 + 2 Re sum_k phi^(k) conj(mu^(k))|
  double truncation_tail = 0.0;   // bound on the pairing terms beyond K
  int K = 0;
};

/// Certified lower bound for sup_j |mu^(j)| obtained from the pulse duality;
/// depends on mu only through the support check (atoms must lie in [eps,1]).
DualityBound duality_lower_bound(const AtomicMeasure& mu, double eps,
                                 int K = 4096);

struct MinimaxResult {
  double epsilon = 0.0;
  int grid_size = 0;
  std::uint64_t j_max = 0;
  int rotations = 0;
  double optimal_value = 0.0;  // rotation-linearized max at the best iterate
  AtomicMeasure optimal_measure;
  double lower_bound = 0.0;  // pi eps / (8 + 2 pi eps)
  double slack = 0.0;        // truncation allowance at this j_max
  int iterations = 0;
  bool converged = false;
};

/// Projected subgradient descent for min over simplex weights on the grid
/// x_q = eps + (q+1/2)(1-eps)/Q of max_{1<=j<=J, r<R} Re(e^{i theta_r} mu^(j)).
/// Deterministic: uniform start, fixed iteration order, no randomness.
MinimaxResult minimize_sup_transform(double eps, int Q, std::uint64_t J,
                                     int rotations = 32, int max_iters = 20000,
                                     double tol = 1e-4);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::vector<double> v);

}  // namespace lab
