// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line;
// the process exits nonzero if any hard check fails. The final decay-gap
// check is a finite-scale heuristic: a gap that is positive but below the
// target is logged as INCONCLUSIVE without failing the build, while a
// non-positive gap fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "lab/cantor_oracle.hpp"
#include "lab/construction.hpp"
#include "lab/dyadic_measure.hpp"
#include "lab/fourier.hpp"
#include "lab/infsup.hpp"
#include "lab/oracles.hpp"
#include "lab/riesz.hpp"

using namespace lab;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %s  (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++failures;
}

void check_lemma_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double eps : {0.25, 0.5, 1.0}) {
    const MinimaxResult res = minimize_sup_transform(eps, 256, 256, 32);
    const double corrected = res.optimal_value / std::cos(kPi / 32.0);
    const double bound = kPi * eps / (8.0 + 2.0 * kPi * eps);
    ok &= corrected + res.slack >= bound;
    ok &= res.slack <= 0.02;
    const int K = static_cast<int>(std::ceil(10.0 / (eps * eps))) * 10;
    const PulseSum pulse = pulse_sum_bound(eps, K);
    ok &= pulse.numeric_sum <= pulse.bound;
    char buf[96];
    std::snprintf(buf, sizeof buf, "eps=%g value=%.4f bound=%.4f; ", eps,
                  corrected, bound);
    detail += buf;
  }
  const double elapsed = seconds_since(t0);
  ok &= elapsed <= 180.0;
  report("lemma lower-bound consistency", ok,
         detail + std::to_string(elapsed) + "s");
}

void check_energy_closed_form() {
  const auto t0 = std::chrono::steady_clock::now();
  const double value = riesz_energy(DyadicMeasure::lebesgue(8), 0.5).value;
  bool ok = std::abs(value - 8.0 / 3.0) < 1e-8;

  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> s_dist(0.1, 0.95);
  std::uniform_int_distribution<int> depth_dist(3, 26);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int depth = depth_dist(rng);
    const double h = std::ldexp(1.0, -depth);
    const double s = s_dist(rng);
    const std::uint64_t max_d = (std::uint64_t{1} << depth) - 1;
    const std::uint64_t d =
        trial % 5 == 0
            ? trial % 11
            : static_cast<std::uint64_t>(
                  std::exp(u(rng) * std::log(static_cast<double>(max_d))));
    const double closed = riesz_cell_kernel(d, h, s);
    const double quad = oracles::cell_kernel_by_quadrature(d, h, s);
    worst = std::max(worst, std::abs(closed - quad) / quad);
  }
  ok &= worst < 1e-8;
  const double elapsed = seconds_since(t0);
  ok &= elapsed <= 60.0;
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "I_1/2 dev %.2e, kernel worst rel %.2e, %.1fs",
                std::abs(value - 8.0 / 3.0), worst, elapsed);
  report("energy closed form and kernel", ok, buf);
}

void check_cantor_non_decay() {
  const std::vector<double> moduli = cantor_moduli(65536);
  double worst = 0.0;
  for (int k = 1, p = 3; k <= 10; ++k, p *= 3) {
    worst = std::max(
        worst, std::abs(cantor_transform_modulus(p) - moduli[0]));
  }
  const DecayReport r = estimate_decay_from_moduli(moduli);
  const bool ok = worst < 1e-9 && r.fourier_dim_estimate < 0.05;
  char buf[96];
  std::snprintf(buf, sizeof buf, "|mu^(3^k)| dev %.2e, dim est %.4f", worst,
                r.fourier_dim_estimate);
  report("cantor non-decay", ok, buf);
}

void check_pushforward_identity() {
  std::mt19937 rng(4096);
  std::uniform_real_distribution<double> w_dist(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> depth_dist(7, 10);
    const int depth = depth_dist(rng);
    std::vector<double> w(std::size_t{1} << depth);
    double total = 0.0;
    for (double& x : w) total += (x = w_dist(rng));
    for (double& x : w) x /= total;
    const DyadicMeasure mu = DyadicMeasure::dense(depth, std::move(w));
    std::uniform_int_distribution<int> l_dist(1, std::min(6, depth - 1));
    const int l = l_dist(rng);
    const DyadicMeasure nu = dyadic_pushforward(mu, l);
    for (int j = 1; j <= 64; ++j) {
      const auto lhs = fourier_transform(nu, j);
      const auto rhs =
          fourier_transform(mu, std::ldexp(static_cast<double>(j), l));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "100 measures, worst dev %.2e", worst);
  report("pushforward frequency identity", worst <= 1e-10, buf);
}

void check_bookkeeping() {
  const DigitBlockSpec spec = default_spec();
  const int n = spec.working_depth;
  bool ok = true;
  std::string detail;

  // Exact partition in integer cell counts.
  const std::uint64_t a = count_where(spec, Predicate::f_even(), n);
  const std::uint64_t b = count_where(spec, Predicate::f_odd(), n);
  ok &= a + b == (std::uint64_t{1} << n);

  // Exact stage splits on the uniform measure over A.
  const DyadicMeasure on_A =
      lebesgue_on_predicate(spec, Predicate::f_even(), n);
  for (const StageEntry& entry : stage_masses(on_A, spec).stages) {
    double assigned = 0.0;
    std::uint64_t cells = 0;
    for (const auto& [j, alpha] : entry.alpha_kj) assigned += alpha;
    for (const auto& [j, c] : entry.count_kj) cells += c;
    ok &= entry.alpha_k == assigned + entry.residual;
    ok &= entry.count_denominator > 0 && entry.count_k == cells;
  }

  // Union bound, exact on both sides.
  for (int k = 1; k <= spec.stage_count(); ++k) {
    const FInfiniteBound bound = mass_of_f_infinite_bound(spec, k);
    ok &= bound.exact_union_mass <= bound.union_bound;
  }

  // Inclusion-exclusion over three events at depth 14, against enumeration.
  const DigitBlockSpec small = validate_parameters(0.8, 0.3, {2, 4, 8}, 14);
  std::uint64_t by_enumeration = 0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << 14); ++p) {
    if (classify_cell(p, 14, small) > 0) ++by_enumeration;
  }
  std::uint64_t singles = 0, pairs = 0, triple;
  const std::uint64_t c1 = count_where(small, Predicate::block_zero(1), 14);
  const std::uint64_t c2 = count_where(small, Predicate::block_zero(2), 14);
  const std::uint64_t c3 = count_where(small, Predicate::block_zero(3), 14);
  singles = c1 + c2 + c3;
  const auto both = [&](int i, int j) {
    return std::uint64_t{1} << (14 - small.m[i - 1] - small.m[j - 1]);
  };
  pairs = both(1, 2) + both(1, 3) + both(2, 3);
  triple = std::uint64_t{1} << (14 - small.m[0] - small.m[1] - small.m[2]);
  ok &= by_enumeration == singles - pairs + triple;
  ok &= mass_of_f_infinite_bound(small, 1).exact_union_cells ==
        by_enumeration;

  char buf[96];
  std::snprintf(buf, sizeof buf,
                "lambda(A)=%llu/2^%d, union cells %llu",
                static_cast<unsigned long long>(a), n,
                static_cast<unsigned long long>(by_enumeration));
  report("construction bookkeeping exact", ok, buf);
}

void check_dichotomy() {
  const DigitBlockSpec spec = default_spec();
  const DyadicMeasure on_A =
      lebesgue_on_predicate(spec, Predicate::f_even(), spec.working_depth);
  const double energy = riesz_energy(on_A, spec.s).value;
  bool ok = true;
  std::string detail;
  for (const StageEntry& entry : stage_masses(on_A, spec).stages) {
    bool threshold_violated = false;
    for (int j = entry.k + 1; j <= spec.stage_count(); ++j) {
      if (j % 2 != 0) continue;
      const EnergyBranchReport r =
          energy_branch_bound(on_A, spec, entry.k, j, energy);
      ok &= r.dominated;  // unconditional inequality
      if (r.threshold_violated) {
        threshold_violated = true;
        ok &= r.bound > 0.0;
      }
    }
    if (entry.in_P) {
      const WitnessReport w =
          witness_frequency_bound(on_A, spec, entry.k, 4096);
      ok &= !threshold_violated;
      detail += "k=" + std::to_string(entry.k) + ":witness ";
      ok &= w.certified;
    } else {
      ok &= threshold_violated;
      detail += "k=" + std::to_string(entry.k) + ":energy ";
    }
  }
  report("dichotomy fires one branch per stage", ok, detail + "I_s=" +
             std::to_string(energy));
}

void check_non_stability_signal() {
  const DigitBlockSpec spec = default_spec();
  const int n = spec.working_depth;
  const std::uint64_t j_max = std::uint64_t{1} << 16;

  double best_on_A = 0.0;
  std::string best_name = "A";
  const auto consider = [&](const std::string& name, const Predicate& pred) {
    const DyadicMeasure mu = lebesgue_on_predicate(spec, pred, n);
    const double est = estimate_decay(mu, j_max).fourier_dim_estimate;
    if (est > best_on_A) {
      best_on_A = est;
      best_name = name;
    }
  };
  consider("A", Predicate::f_even());
  for (int j = 0; j <= spec.stage_count(); j += 2) {
    consider("f=" + std::to_string(j), Predicate::f_equals(j));
  }
  const double whole =
      estimate_decay(DyadicMeasure::lebesgue(n), j_max).fourier_dim_estimate;
  const double gap = whole - best_on_A;

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "est(AuB)=%.3f best on A=%.3f (%s), gap %.3f, j_max=2^16",
                whole, best_on_A, best_name.c_str(), gap);
  if (gap >= 0.1) {
    report("non-stability decay gap", true, buf);
  } else if (gap > 0.0) {
    std::printf("INCONCLUSIVE  non-stability decay gap  (%s)\n", buf);
  } else {
    report("non-stability decay gap", false, buf);
  }
}

void check_oracle_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const oracles::OracleResult& r : oracles::run_all()) {
    ok &= r.passed;
    if (!r.passed) detail += r.name + " failed; ";
  }
  const double elapsed = seconds_since(t0);
  ok &= elapsed <= 300.0;
  report("oracle suite", ok,
         detail + std::to_string(elapsed) + "s");
}

}  // namespace

int main() {
  check_lemma_consistency();
  check_energy_closed_form();
  check_cantor_non_decay();
  check_pushforward_identity();
  check_bookkeeping();
  check_dichotomy();
  check_non_stability_signal();
  check_oracle_suite();
  if (failures > 0) {
    std::printf("%d acceptance check(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance checks passed\n");
  return 0;
}
