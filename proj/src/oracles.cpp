#include "lab/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "lab/construction.hpp"
#include "lab/dyadic_measure.hpp"
#include "lab/fourier.hpp"
#include "lab/infsup.hpp"
#include "lab/riesz.hpp"

namespace lab::oracles {

namespace {

constexpr double kPi = std::numbers::pi;

double simpson_step(const std::function<double(double)>& f, double a,
                    double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double cell_kernel_by_quadrature(std::uint64_t cell_distance, double h,
                                 double s) {
  const double hs = std::exp(-s * std::log(h));
  if (cell_distance == 0) {
    // 2 h^-s int_0^1 (1-t) t^-s dt, singularity absorbed by t = v^p.
    const double p = 1.0 / (1.0 - s);
    const double integral = adaptive_simpson(
        [p](double v) { return 1.0 - std::pow(v, p); }, 0.0, 1.0);
    return 2.0 * hs * p * integral;
  }
  const double d = static_cast<double>(cell_distance);
  if (cell_distance == 1) {
    // The (d - t)^-s part integrates in closed form; the rest is smooth.
    const double smooth = adaptive_simpson(
        [s](double t) { return (1.0 - t) * std::pow(1.0 + t, -s); }, 0.0,
        1.0);
    return hs * (1.0 / (2.0 - s) + smooth);
  }
  const double integral = adaptive_simpson(
      [d, s](double t) {
        return (1.0 - t) *
               (std::pow(d + t, -s) + std::pow(d - t, -s));
      },
      0.0, 1.0);
  return hs * integral;
}

double lebesgue_energy_by_quadrature(double s) {
  const double p = 1.0 / (1.0 - s);
  const double integral = adaptive_simpson(
      [p](double v) { return 1.0 - std::pow(v, p); }, 0.0, 1.0);
  return 2.0 * p * integral;
}

namespace {

OracleResult check_lebesgue_energy() {
  double worst = 0.0;
  for (double s : {0.25, 0.5, 0.8}) {
    const double closed = 2.0 / ((1.0 - s) * (2.0 - s));
    worst = std::max(worst,
                     std::abs(lebesgue_energy_by_quadrature(s) - closed));
  }
  return {"lebesgue-energy-quadrature", worst < 1e-10,
          "max abs dev " + fmt(worst)};
}

OracleResult check_cell_kernel() {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> depth_dist(4, 26);
  std::uniform_real_distribution<double> s_dist(0.1, 0.99);
  std::uniform_real_distribution<double> log_d(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 400; ++trial) {
    const int depth = depth_dist(rng);
    const double h = std::ldexp(1.0, -depth);
    const double s = trial % 7 == 0 ? 1.0 : s_dist(rng);
    const std::uint64_t max_d = (std::uint64_t{1} << depth) - 1;
    std::uint64_t d;
    if (trial % 3 == 0) {
      d = trial % 9;  // includes the same-cell and touching cases
      if (s >= 1.0 && d == 0) d = 1;
    } else {
      d = static_cast<std::uint64_t>(
          std::exp(log_d(rng) * std::log(static_cast<double>(max_d))));
      if (d == 0) d = 1;
    }
    const double closed = riesz_cell_kernel(d, h, s);
    const double quad = cell_kernel_by_quadrature(d, h, s);
    worst = std::max(worst, std::abs(closed - quad) / quad);
  }
  return {"riesz-kernel-quadrature", worst < 1e-8,
          "max rel dev " + fmt(worst)};
}

OracleResult check_classification() {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 6});
  const int n = spec.min_depth();  // 8: blocks at digits 3 and 7-8
  std::vector<std::uint64_t> tally(spec.stage_count() + 1, 0);
  bool ok = true;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    std::string bits;
    for (int i = 0; i < n; ++i) {
      bits.push_back((p >> (n - 1 - i)) & 1 ? '1' : '0');
    }
    // Re-derive f from the raw digit string, independent of the bit math.
    int f = 0;
    for (int k = 1; k <= spec.stage_count(); ++k) {
      bool zero = true;
      for (int i = spec.l[k - 1]; i < spec.l[k - 1] + spec.m[k - 1]; ++i) {
        zero &= bits[i] == '0';
      }
      if (zero) f = k;
    }
    ok &= classify_cell(p, n, spec) == f;
    ok &= classify_f(bits, spec) == f;
    ++tally[f];
  }
  for (int j = 0; j <= spec.stage_count(); ++j) {
    ok &= count_where(spec, Predicate::f_equals(j), n) == tally[j];
  }
  ok &= count_where(spec, Predicate::f_even(), n) == tally[0] + tally[2];
  ok &= count_where(spec, Predicate::f_odd(), n) == tally[1];
  return {"digit-classification-brute-force", ok,
          "256 cells, counts " + std::to_string(tally[0]) + "/" +
              std::to_string(tally[1]) + "/" + std::to_string(tally[2])};
}

OracleResult check_union_mass() {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 6});
  const int n = spec.working_depth;
  std::uint64_t direct_union = 0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    if (classify_cell(p, n, spec) > 0) ++direct_union;
  }
  // Inclusion-exclusion over the two zero-block events.
  const std::uint64_t a1 = count_where(spec, Predicate::block_zero(1), n);
  const std::uint64_t a2 = count_where(spec, Predicate::block_zero(2), n);
  const std::uint64_t both = std::uint64_t{1}
                             << (n - spec.m[0] - spec.m[1]);
  const FInfiniteBound bound = mass_of_f_infinite_bound(spec, 1);
  const bool ok = bound.exact_union_cells == direct_union &&
                  direct_union == a1 + a2 - both &&
                  bound.exact_union_mass <= bound.union_bound;
  return {"union-mass-inclusion-exclusion", ok,
          std::to_string(direct_union) + " cells, bound " +
              fmt(bound.union_bound)};
}

OracleResult check_pushforward_identity() {
  std::mt19937 rng(7711);
  std::uniform_int_distribution<int> depth_dist(4, 10);
  std::uniform_real_distribution<double> w_dist(0.0, 1.0);
  std::uniform_int_distribution<std::uint64_t> j_dist(1, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int depth = depth_dist(rng);
    std::vector<double> w(std::size_t{1} << depth);
    for (double& x : w) x = w_dist(rng) < 0.3 ? w_dist(rng) : 0.0;
    const DyadicMeasure mu = DyadicMeasure::dense(depth, std::move(w));
    std::uniform_int_distribution<int> l_dist(1, depth - 1);
    const int l = l_dist(rng);
    const DyadicMeasure nu = dyadic_pushforward(mu, l);
    const std::uint64_t j = j_dist(rng);
    const auto lhs = fourier_transform(nu, static_cast<double>(j));
    const auto rhs =
        fourier_transform(mu, std::ldexp(static_cast<double>(j), l));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {"pushforward-transform-identity", worst < 1e-10,
          "max abs dev " + fmt(worst)};
}

OracleResult check_batch_paths() {
  std::mt19937 rng(40312);
  std::uniform_real_distribution<double> w_dist(0.0, 1.0);
  std::vector<double> w(1 << 12);
  double total = 0.0;
  for (double& x : w) total += (x = w_dist(rng));
  for (double& x : w) x /= total;
  const DyadicMeasure mu = DyadicMeasure::dense(12, std::move(w));
  double worst = 0.0;
  for (std::uint64_t j_max : {std::uint64_t{50}, std::uint64_t{9000}}) {
    const BatchTransform fast = batch_integer_transform(mu, j_max);
    const auto slow = ref::batch_integer_transform(mu, j_max);
    for (std::uint64_t j = 0; j <= j_max; ++j) {
      worst = std::max(worst, std::abs(fast.values[j] - slow[j]));
    }
  }
  return {"batch-transform-vs-direct", worst < 1e-11,
          "max abs dev " + fmt(worst)};
}

OracleResult check_half_frequency() {
  const DyadicMeasure leb = DyadicMeasure::lebesgue(10);
  const auto val = fourier_transform(leb, 0.5);
  const double re = adaptive_simpson(
      [](double x) { return std::cos(kPi * x); }, 0.0, 1.0);
  const double im = -adaptive_simpson(
      [](double x) { return std::sin(kPi * x); }, 0.0, 1.0);
  const double dev = std::abs(val - std::complex<double>(re, im));
  const double mod_dev = std::abs(std::abs(val) - 2.0 / kPi);
  const bool ok = dev < 1e-12 && mod_dev < 1e-12;
  return {"half-frequency-lebesgue", ok, "abs dev " + fmt(dev)};
}

OracleResult check_pulse_coefficients() {
  double worst = 0.0;
  for (double eps : {0.25, 0.7}) {
    const PulseProfile profile = triangle_pulse_coefficients(eps, 8);
    for (int k = 1; k <= 8; ++k) {
      // Tent density of mass 1 on [0, eps], integrated against e^{-2 pi ikx};
      // split at the kink.
      const auto density = [eps](double x) {
        return 4.0 / (eps * eps) * (eps / 2.0 - std::abs(x - eps / 2.0));
      };
      const auto part = [&](double a, double b, bool imag) {
        // Panel at sub-period width first so the adaptive pass never sees a
        // full oscillation and stops early by accident.
        const int panels = 4 * k + 4;
        double sum = 0.0;
        for (int i = 0; i < panels; ++i) {
          const double lo = a + (b - a) * i / panels;
          const double hi = a + (b - a) * (i + 1) / panels;
          sum += adaptive_simpson(
              [&](double x) {
                const double phase = -2.0 * kPi * k * x;
                return density(x) *
                       (imag ? std::sin(phase) : std::cos(phase));
              },
              lo, hi);
        }
        return sum;
      };
      const std::complex<double> hat(
          part(0.0, eps / 2.0, false) + part(eps / 2.0, eps, false),
          part(0.0, eps / 2.0, true) + part(eps / 2.0, eps, true));
      worst = std::max(worst,
                       std::abs(std::abs(hat) - profile.coefficients[k]));
      const std::complex<double> model =
          std::polar(profile.coefficients[k], -kPi * k * eps);
      worst = std::max(worst, std::abs(hat - model));
    }
  }
  return {"pulse-coefficient-quadrature", worst < 1e-10,
          "max abs dev " + fmt(worst)};
}

OracleResult check_small_minimax() {
  const double eps = 0.5;
  const int Q = 3;
  const std::uint64_t J = 2;
  std::vector<double> x(Q);
  for (int q = 0; q < Q; ++q) x[q] = eps + (q + 0.5) * (1.0 - eps) / Q;
  std::vector<std::complex<double>> e1(Q), e2(Q);
  for (int q = 0; q < Q; ++q) {
    e1[q] = std::polar(1.0, -2.0 * kPi * x[q]);
    e2[q] = std::polar(1.0, -4.0 * kPi * x[q]);
  }
  // Exhaustive sweep of the simplex at step 1e-3.
  double best = 1.0;
  const int steps = 1000;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps - i; ++j) {
      const double w0 = i / 1000.0;
      const double w1 = j / 1000.0;
      const double w2 = 1.0 - w0 - w1;
      const double v =
          std::max(std::abs(w0 * e1[0] + w1 * e1[1] + w2 * e1[2]),
                   std::abs(w0 * e2[0] + w1 * e2[1] + w2 * e2[2]));
      best = std::min(best, v);
    }
  }
  const MinimaxResult solved =
      minimize_sup_transform(eps, Q, J, 64, 20000, 1e-6);
  double at_solution = 0.0;
  for (std::uint64_t j = 1; j <= J; ++j) {
    at_solution = std::max(
        at_solution,
        std::abs(fourier_transform(solved.optimal_measure,
                                   static_cast<double>(j))));
  }
  const bool ok =
      at_solution >= best - 1e-9 && at_solution <= best + 0.005;
  return {"minimax-exhaustive-small", ok,
          "sweep " + fmt(best) + ", solver " + fmt(at_solution)};
}

}  // namespace

std::vector<OracleResult> run_all() {
  return {check_lebesgue_energy(),      check_cell_kernel(),
          check_classification(),       check_union_mass(),
          check_pushforward_identity(), check_batch_paths(),
          check_half_frequency(),       check_pulse_coefficients(),
          check_small_minimax()};
}

}  // namespace lab::oracles
