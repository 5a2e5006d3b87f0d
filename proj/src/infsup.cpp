#include "lab/infsup.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lab/fourier.hpp"

namespace lab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double lemma_paper_bound(double eps) {
  return kPi * eps / (8.0 + 2.0 * kPi * eps);
}

double lemma_truncation_slack(double eps, std::uint64_t J) {
  const double bound = lemma_paper_bound(eps);
  // sum_{k>J} |phi^(k)| <= 4/(pi^2 eps^2 J)
  const double tail = 4.0 / (kPi * kPi * eps * eps * static_cast<double>(J));
  if (tail >= 0.5) return bound;
  double partial = 0.0;
  for (std::uint64_t k = 1; k <= J; ++k) {
    const double c = sinc(static_cast<double>(k) * kPi * eps / 2.0);
    partial += c * c;
  }
  const double truncated = (0.5 - tail) / partial;
  return std::max(0.0, bound - truncated);
}

PulseProfile triangle_pulse_coefficients(double eps, int K) {
  if (!(eps > 0.0 && eps <= 1.0) || K < 1) {
    throw std::invalid_argument("triangle_pulse_coefficients: bad arguments");
  }
  PulseProfile profile;
  profile.epsilon = eps;
  profile.tail_bound = (4.0 + kPi * eps) / (kPi * eps);
  profile.coefficients.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double c = sinc(k * kPi * eps / 2.0);
    profile.coefficients.push_back(c * c);
  }
  return profile;
}

PulseSum pulse_sum_bound(double eps, int K) {
  const PulseProfile profile = triangle_pulse_coefficients(eps, K);
  PulseSum out;
  out.bound = profile.tail_bound;
  for (int k = 1; k <= K; ++k) out.numeric_sum += profile.coefficients[k];
  return out;
}

DualityBound duality_lower_bound(const AtomicMeasure& mu, double eps, int K) {
  for (const auto& a : mu.atoms) {
    if (a.position < eps - 1e-12 || a.position > 1.0 + 1e-12) {
      throw std::invalid_argument(
          "duality_lower_bound: atom outside [eps, 1]");
    }
  }
  const double mass = mu.total_mass();
  const PulseSum partial = pulse_sum_bound(eps, K);
  const double tail = 4.0 / (kPi * kPi * eps * eps * static_cast<double>(K));

  DualityBound out;
  out.K = K;
  out.lower_bound = 0.5 / (partial.numeric_sum + tail);
  out.truncation_tail = tail * mass;
  // mu(phi) = 0 expands to 1 + 2 Re sum_k phi^(k) conj(mu^(k)) = 0 with
  // phi^(k) = e^{-pi i k eps} sinc^2(pi k eps / 2).
  std::complex<double> pairing{0.0, 0.0};
  for (int k = 1; k <= K; ++k) {
    const double c = sinc(k * kPi * eps / 2.0);
    const std::complex<double> phi_hat = std::polar(c * c, -kPi * k * eps);
    pairing += phi_hat * std::conj(fourier_transform(mu, k));
  }
  out.pairing_residual = std::abs(mass + 2.0 * pairing.real());
  return out;
}

std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  for (double& x : v) x = std::max(0.0, x - theta);
  return v;
}

MinimaxResult minimize_sup_transform(double eps, int Q, std::uint64_t J,
                                     int rotations, int max_iters,
                                     double tol) {
  if (!(eps > 0.0 && eps <= 1.0) || Q < 1 || J < 1 || rotations < 4) {
    throw std::invalid_argument("minimize_sup_transform: bad arguments");
  }
  const std::size_t nj = static_cast<std::size_t>(J);
  std::vector<double> x(Q);
  for (int q = 0; q < Q; ++q) {
    x[q] = eps + (q + 0.5) * (1.0 - eps) / Q;
  }
  // Phase matrix E[j][q] = e^{-2 pi i j x_q}, j = 1..J.
  std::vector<std::complex<double>> E(nj * Q);
  for (std::size_t j = 1; j <= nj; ++j) {
    for (int q = 0; q < Q; ++q) {
      E[(j - 1) * Q + q] =
          std::polar(1.0, -2.0 * kPi * static_cast<double>(j) * x[q]);
    }
  }
  std::vector<std::complex<double>> rot(rotations);
  for (int r = 0; r < rotations; ++r) {
    rot[r] = std::polar(1.0, 2.0 * kPi * r / rotations);
  }

  std::vector<double> w(Q, 1.0 / Q);
  std::vector<double> best_w = w;
  double best_value = std::numeric_limits<double>::infinity();
  // Subgradient iterations improve in bursts; judge progress over windows,
  // not per iteration.
  constexpr int kWindow = 2000;
  double window_best = best_value;
  int iter = 0;
  bool converged = false;
  std::vector<std::complex<double>> z(nj);

  for (iter = 1; iter <= max_iters; ++iter) {
    // Linearized objective: max over j and rotation angles of Re(e^{i t} z_j).
    double value = -std::numeric_limits<double>::infinity();
    std::size_t j_star = 0;
    int r_star = 0;
    for (std::size_t j = 0; j < nj; ++j) {
      std::complex<double> acc{0.0, 0.0};
      const std::complex<double>* row = &E[j * Q];
      for (int q = 0; q < Q; ++q) acc += w[q] * row[q];
      z[j] = acc;
      for (int r = 0; r < rotations; ++r) {
        const double v = (rot[r] * acc).real();
        if (v > value) {
          value = v;
          j_star = j;
          r_star = r;
        }
      }
    }
    if (value < best_value) {
      best_value = value;
      best_w = w;
    }
    if (iter % kWindow == 0) {
      if (best_value > window_best - tol) {
        converged = true;
        break;
      }
      window_best = best_value;
    }
    const double step = 0.05 / std::sqrt(static_cast<double>(iter));
    const std::complex<double>* row = &E[j_star * Q];
    for (int q = 0; q < Q; ++q) {
      w[q] -= step * (rot[r_star] * row[q]).real();
    }
    w = project_to_simplex(std::move(w));
  }

  MinimaxResult result;
  result.epsilon = eps;
  result.grid_size = Q;
  result.j_max = J;
  result.rotations = rotations;
  result.optimal_value = best_value;
  result.lower_bound = lemma_paper_bound(eps);
  result.slack = lemma_truncation_slack(eps, J);
  result.iterations = std::min(iter, max_iters);
  result.converged = converged;
  std::vector<double> masses(best_w);
  result.optimal_measure = make_atomic(std::move(x), std::move(masses));
  return result;
}

}  // namespace lab
