#include "lab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lab/fourier.hpp"
#include "lab/infsup.hpp"
#include "lab/riesz.hpp"

namespace lab {

namespace {

std::uint64_t block_bits(std::uint64_t cell, int depth,
                         const DigitBlockSpec& spec, int k) {
  const int shift = depth - (spec.l[k - 1] + spec.m[k - 1]);
  const std::uint64_t mask = (std::uint64_t{1} << spec.m[k - 1]) - 1;
  return (cell >> shift) & mask;
}

void check_stage_depth(const DigitBlockSpec& spec, int depth) {
  if (depth < spec.min_depth()) {
    throw std::invalid_argument("depth too small for the deepest block");
  }
  if (depth > kMaxDepth) {
    throw std::invalid_argument("depth exceeds the representable cap");
  }
}

}  // namespace

DigitBlockSpec validate_parameters(double s, double b, std::vector<int> l,
                                   int working_depth) {
  const double sqrt3m1 = std::sqrt(3.0) - 1.0;
  if (!(s > sqrt3m1)) {
    throw std::invalid_argument("validate_parameters: s not above sqrt(3)-1");
  }
  if (!(s < 1.0)) {
    throw std::invalid_argument("validate_parameters: s not below 1");
  }
  // Compare via b s > 1 - s so the endpoint stays exact (e.g. b = 1/4 at
  // s = 4/5 must be rejected even though (1-s)/s rounds slightly below 1/4).
  if (!(b * s > (1.0 - s) + 1e-12)) {
    throw std::invalid_argument("validate_parameters: b not above (1-s)/s");
  }
  if (!(b < s / 2.0)) {
    throw std::invalid_argument("validate_parameters: b not below s/2");
  }
  if (l.empty()) {
    throw std::invalid_argument("validate_parameters: no stages");
  }
  DigitBlockSpec spec;
  spec.s = s;
  spec.b = b;
  spec.l = std::move(l);
  spec.m.reserve(spec.l.size());
  int prev_end = 0;
  for (std::size_t i = 0; i < spec.l.size(); ++i) {
    const int lk = spec.l[i];
    if (lk <= 0 || (i > 0 && lk <= spec.l[i - 1])) {
      throw std::invalid_argument(
          "validate_parameters: l not positive strictly increasing");
    }
    // ceil(b l_k), guarding against ties landing just above an integer.
    const int mk = static_cast<int>(std::ceil(b * lk - 1e-9));
    if (i > 0 && lk <= prev_end) {
      throw std::invalid_argument(
          "validate_parameters: blocks overlap (need l_{k+1} > l_k + m_k)");
    }
    spec.m.push_back(mk);
    prev_end = lk + mk;
  }
  // An explicit depth must be representable; the default is the minimal
  // depth even when that exceeds the enumeration cap (deep specs stay valid
  // as parameter sets, materializing operations reject them individually).
  spec.working_depth = working_depth < 0 ? spec.min_depth() : working_depth;
  if (working_depth >= 0) check_stage_depth(spec, spec.working_depth);
  return spec;
}

std::vector<double> stage_ratios(const DigitBlockSpec& spec) {
  std::vector<double> ratios;
  for (std::size_t i = 1; i < spec.l.size(); ++i) {
    ratios.push_back(static_cast<double>(spec.l[i]) / spec.l[i - 1]);
  }
  return ratios;
}

int classify_cell(std::uint64_t cell, int depth, const DigitBlockSpec& spec) {
  check_stage_depth(spec, depth);
  int f = 0;
  for (int k = 1; k <= spec.stage_count(); ++k) {
    if (block_bits(cell, depth, spec, k) == 0) f = k;
  }
  return f;
}

int classify_f(const std::string& bits, const DigitBlockSpec& spec) {
  if (static_cast<int>(bits.size()) < spec.min_depth()) {
    throw std::invalid_argument("classify_f: bit string too short");
  }
  int f = 0;
  for (int k = 1; k <= spec.stage_count(); ++k) {
    bool all_zero = true;
    for (int i = spec.l[k - 1] + 1; i <= spec.l[k - 1] + spec.m[k - 1]; ++i) {
      const char c = bits[i - 1];
      if (c != '0' && c != '1') {
        throw std::invalid_argument("classify_f: non-binary character");
      }
      all_zero &= (c == '0');
    }
    if (all_zero) f = k;
  }
  return f;
}

bool eval_predicate(const Predicate& pred, std::uint64_t cell, int depth,
                    const DigitBlockSpec& spec) {
  switch (pred.kind) {
    case Predicate::FEven:
      return classify_cell(cell, depth, spec) % 2 == 0;
    case Predicate::FOdd:
      return classify_cell(cell, depth, spec) % 2 == 1;
    case Predicate::FEquals:
      return classify_cell(cell, depth, spec) == pred.arg;
    case Predicate::BlockZero:
      return block_bits(cell, depth, spec, pred.arg) == 0;
  }
  return false;
}

std::uint64_t count_where(const DigitBlockSpec& spec, const Predicate& pred,
                          int depth) {
  check_stage_depth(spec, depth);
  const int K = spec.stage_count();
  if (K > 24) throw std::invalid_argument("count_where: too many stages");
  int block_total = 0;
  for (int mk : spec.m) block_total += mk;
  const std::uint64_t free_cells = std::uint64_t{1} << (depth - block_total);
  // Sum over zero-block patterns; blocks occupy disjoint digit positions, so
  // cells per pattern is a product of per-block counts.
  std::uint64_t total = 0;
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << K);
       ++pattern) {
    int f = 0;
    std::uint64_t cells = free_cells;
    for (int k = 1; k <= K; ++k) {
      if (pattern & (std::uint64_t{1} << (k - 1))) {
        f = k;
      } else {
        cells *= (std::uint64_t{1} << spec.m[k - 1]) - 1;
      }
    }
    bool match = false;
    switch (pred.kind) {
      case Predicate::FEven:
        match = f % 2 == 0;
        break;
      case Predicate::FOdd:
        match = f % 2 == 1;
        break;
      case Predicate::FEquals:
        match = f == pred.arg;
        break;
      case Predicate::BlockZero:
        match = (pattern & (std::uint64_t{1} << (pred.arg - 1))) != 0;
        break;
    }
    if (match) total += cells;
  }
  return total;
}

CylinderSet cylinder_decompose(const DigitBlockSpec& spec,
                               const Predicate& pred, int depth,
                               std::size_t budget) {
  check_stage_depth(spec, depth);
  const std::uint64_t count = count_where(spec, pred, depth);
  if (count > budget) {
    throw std::runtime_error(
        "cylinder_decompose: index budget exceeded; use predicate-based "
        "masses or a sparse measure instead");
  }
  std::vector<std::uint64_t> indices;
  indices.reserve(count);
  const std::uint64_t limit = std::uint64_t{1} << depth;
  for (std::uint64_t p = 0; p < limit; ++p) {
    if (eval_predicate(pred, p, depth, spec)) indices.push_back(p);
  }
  return CylinderSet(depth, std::move(indices));
}

DyadicMeasure lebesgue_on_predicate(const DigitBlockSpec& spec,
                                    const Predicate& pred, int depth) {
  check_stage_depth(spec, depth);
  const std::uint64_t count = count_where(spec, pred, depth);
  if (count == 0) {
    throw std::invalid_argument("lebesgue_on_predicate: empty support");
  }
  const double w = 1.0 / static_cast<double>(count);
  const std::uint64_t limit = std::uint64_t{1} << depth;
  std::vector<double> weights(limit, 0.0);
  for (std::uint64_t p = 0; p < limit; ++p) {
    if (eval_predicate(pred, p, depth, spec)) weights[p] = w;
  }
  return DyadicMeasure::dense(depth, std::move(weights));
}

FInfiniteBound mass_of_f_infinite_bound(const DigitBlockSpec& spec,
                                        int from_stage) {
  const int K = spec.stage_count();
  if (from_stage < 1 || from_stage > K) {
    throw std::invalid_argument("mass_of_f_infinite_bound: bad stage");
  }
  const int n = spec.working_depth;
  FInfiniteBound out;
  // Exact count of cells whose blocks >= from_stage are all nonzero.
  std::uint64_t nonzero_cells = std::uint64_t{1} << n;
  for (int k = from_stage; k <= K; ++k) {
    out.union_bound += std::ldexp(1.0, -spec.m[k - 1]);
    nonzero_cells >>= spec.m[k - 1];
    nonzero_cells *= (std::uint64_t{1} << spec.m[k - 1]) - 1;
  }
  out.exact_union_cells = (std::uint64_t{1} << n) - nonzero_cells;
  out.exact_union_mass =
      std::ldexp(static_cast<double>(out.exact_union_cells), -n);
  return out;
}

double p_threshold(const DigitBlockSpec& spec, int k, int j) {
  return std::ldexp(1.0, -(spec.m[k - 1] + j - k)) / 6.0;
}

StageMasses stage_masses(const DyadicMeasure& mu, const DigitBlockSpec& spec) {
  const int n = mu.depth();
  check_stage_depth(spec, n);
  const int K = spec.stage_count();

  // One pass over nonzero cells: per-stage zero-block masses and per-(k, f)
  // masses, plus cell counts for the exact path on uniform measures.
  std::vector<double> alpha(K + 1, 0.0);
  std::vector<std::vector<double>> alpha_kf(K + 1,
                                            std::vector<double>(K + 1, 0.0));
  std::vector<std::uint64_t> count_k(K + 1, 0);
  std::vector<std::vector<std::uint64_t>> count_kf(
      K + 1, std::vector<std::uint64_t>(K + 1, 0));
  bool uniform = true;
  double uniform_w = -1.0;
  std::uint64_t nonzero = 0;

  mu.for_each_nonzero([&](std::uint64_t p, double w) {
    ++nonzero;
    if (uniform_w < 0.0) {
      uniform_w = w;
    } else if (w != uniform_w) {
      uniform = false;
    }
    const int f = classify_cell(p, n, spec);
    for (int k = 1; k <= K; ++k) {
      if (block_bits(p, n, spec, k) == 0) {
        alpha[k] += w;
        ++count_k[k];
        alpha_kf[k][f] += w;
        ++count_kf[k][f];
      }
    }
  });

  StageMasses out;
  for (int k = 1; k <= K; k += 2) {
    StageEntry entry;
    entry.k = k;
    entry.alpha_k = alpha[k];
    entry.count_denominator = uniform ? nonzero : 0;
    entry.count_k = uniform ? count_k[k] : 0;
    double assigned = 0.0;
    entry.in_P = true;
    for (int j = k + 1; j <= K; ++j) {
      if (j % 2 != 0) continue;
      entry.alpha_kj[j] = alpha_kf[k][j];
      if (uniform) entry.count_kj[j] = count_kf[k][j];
      assigned += alpha_kf[k][j];
      if (alpha_kf[k][j] > p_threshold(spec, k, j)) entry.in_P = false;
    }
    entry.residual = entry.alpha_k - assigned;
    out.stages.push_back(std::move(entry));
  }
  return out;
}

WitnessReport witness_frequency_bound(const DyadicMeasure& mu,
                                      const DigitBlockSpec& spec, int k,
                                      std::uint64_t r_max) {
  const int n = mu.depth();
  check_stage_depth(spec, n);
  if (k < 1 || k > spec.stage_count() || k % 2 == 0) {
    throw std::invalid_argument("witness_frequency_bound: k must be odd");
  }
  const int lk = spec.l[k - 1];
  const int mk = spec.m[k - 1];

  WitnessReport report;
  report.k = k;
  report.epsilon = std::ldexp(1.0, -mk);
  report.alpha_k = mu.mass_where([&](std::uint64_t p) {
    return block_bits(p, n, spec, k) == 0;
  });

  const DyadicMeasure mu_k = restrict_where(mu, [&](std::uint64_t p) {
    return block_bits(p, n, spec, k) != 0;
  });
  const DyadicMeasure nu_k = dyadic_pushforward(mu_k, lk);

  // Mass the pushforward leaves strictly below 2^-m_k (depth-truncation
  // artifact; zero for measures supported off A_k).
  const std::uint64_t eps_cell = std::uint64_t{1} << (n - lk - mk);
  report.leaked_mass =
      nu_k.mass_where([&](std::uint64_t q) { return q < eps_cell; });

  const auto [r_star, max_abs] = sup_abs_transform(nu_k, 1, r_max);
  report.r_star = r_star;
  report.max_nu_abs = max_abs;
  report.target = (1.0 - report.alpha_k) * report.epsilon / 5.0;
  report.slack =
      (1.0 - report.alpha_k) * lemma_truncation_slack(report.epsilon, r_max) +
      report.leaked_mass;
  report.certified = max_abs >= report.target - report.slack;
  report.inconclusive = !report.certified;

  report.paper_bound = std::exp2(spec.s * lk / 2.0 - mk) *
                       ((1.0 - report.alpha_k) / 5.0 - 1.0 / 6.0);
  const double xi = std::ldexp(static_cast<double>(r_star), lk);
  const double mu_abs = std::abs(fourier_transform(mu, xi));
  const double mu_k_abs = std::abs(fourier_transform(mu_k, xi));
  report.direct_value = std::pow(xi, spec.s / 2.0) * mu_abs;
  report.mu_lower = mu_k_abs - report.alpha_k;
  return report;
}

EnergyBranchReport energy_branch_bound(const DyadicMeasure& mu,
                                       const DigitBlockSpec& spec, int k,
                                       int j, double precomputed_energy) {
  const int n = mu.depth();
  check_stage_depth(spec, n);
  if (k < 1 || k % 2 == 0 || j <= k || j % 2 != 0 || j > spec.stage_count()) {
    throw std::invalid_argument(
        "energy_branch_bound: need odd k < even j <= K");
  }
  const int mk = spec.m[k - 1];
  const int lj = spec.l[j - 1];
  const int mj = spec.m[j - 1];

  EnergyBranchReport report;
  report.k = k;
  report.j = j;
  report.alpha_kj = mu.mass_where([&](std::uint64_t p) {
    return block_bits(p, n, spec, k) == 0 && classify_cell(p, n, spec) == j;
  });
  report.cell_count = std::uint64_t{1} << (lj - mk);
  report.cell_length = std::ldexp(1.0, -(lj + mj));
  report.bound = energy_cell_lower_bound(report.alpha_kj, report.cell_count,
                                         report.cell_length, spec.s);
  report.energy = precomputed_energy >= 0.0 ? precomputed_energy
                                            : riesz_energy(mu, spec.s).value;
  report.dominated = report.energy >= report.bound;
  report.paper_exponent = (spec.s * (1.0 + spec.b) - 1.0) * lj - 2.0 * j - mk;
  report.simplified_exponent = (spec.s * (1.0 + spec.b) - 1.0) * lj - mk;
  report.threshold = p_threshold(spec, k, j);
  report.threshold_violated = report.alpha_kj > report.threshold;
  return report;
}

DigitBlockSpec default_spec() {
  return validate_parameters(0.8, 0.3, {2, 4, 8, 12, 17});
}

void to_json(nlohmann::json& j, const DigitBlockSpec& spec) {
  j = nlohmann::json{{"s", spec.s},
                     {"b", spec.b},
                     {"l", spec.l},
                     {"depth", spec.working_depth}};
}

DigitBlockSpec digit_block_spec_from_json(const nlohmann::json& j) {
  return validate_parameters(
      j.at("s").get<double>(), j.at("b").get<double>(),
      j.at("l").get<std::vector<int>>(),
      j.contains("depth") ? j.at("depth").get<int>() : -1);
}

}  // namespace lab
