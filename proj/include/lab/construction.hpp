#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lab/cylinder_set.hpp"
#include "lab/dyadic_measure.hpp"

namespace lab {

/// Parameters of the digit-block construction: blocks of binary digit
/// positions l_k+1 .. l_k+m_k with m_k = ceil(b l_k), pairwise disjoint.
struct DigitBlockSpec {
  double s = 0.0;
  double b = 0.0;
  std::vector<int> l;
  std::vector<int> m;
  int working_depth = 0;

  int stage_count() const { return static_cast<int>(l.size()); }
  int min_depth() const { return l.back() + m.back(); }
};

/// Checks s in (sqrt(3)-1, 1), b in ((1-s)/s, s/2), strictly increasing l
/// with disjoint blocks, and a representable working depth. Throws
/// std::invalid_argument with a named reason on violation.
/// working_depth < 0 means "use the minimal depth l_K + m_K".
DigitBlockSpec validate_parameters(double s, double b, std::vector<int> l,
                                   int working_depth = -1);

/// Ratios l_{k+1}/l_k, informational (the construction wants them -> inf).
std::vector<double> stage_ratios(const DigitBlockSpec& spec);

/// f = largest k whose digit block is all zeros, 0 if none. The string form
/// takes '0'/'1' characters x_1 x_2 ... (most significant first).
int classify_f(const std::string& bits, const DigitBlockSpec& spec);
int classify_cell(std::uint64_t cell, int depth, const DigitBlockSpec& spec);

struct Predicate {
  enum Kind { FEven, FOdd, FEquals, BlockZero } kind = FEven;
  int arg = 0;  // stage j for FEquals, block k for BlockZero

  static Predicate f_even() { return {FEven, 0}; }
  static Predicate f_odd() { return {FOdd, 0}; }
  static Predicate f_equals(int j) { return {FEquals, j}; }
  static Predicate block_zero(int k) { return {BlockZero, k}; }
};

bool eval_predicate(const Predicate& pred, std::uint64_t cell, int depth,
                    const DigitBlockSpec& spec);

/// Exact number of depth-`depth` cells satisfying the predicate, computed
/// combinatorially from the block structure (no enumeration).
std::uint64_t count_where(const DigitBlockSpec& spec, const Predicate& pred,
                          int depth);

/// Materialized cylinder set of all cells satisfying the predicate.
CylinderSet cylinder_decompose(const DigitBlockSpec& spec,
                               const Predicate& pred, int depth,
                               std::size_t budget = (std::size_t{1} << 24));

/// Normalized Lebesgue measure restricted to the predicate's cylinder set.
DyadicMeasure lebesgue_on_predicate(const DigitBlockSpec& spec,
                                    const Predicate& pred, int depth);

struct FInfiniteBound {
  double union_bound = 0.0;      // sum_{j>=k} 2^-m_j (truncated at K)
  double exact_union_mass = 0.0; // Lebesgue mass of {some zero block >= k}
  std::uint64_t exact_union_cells = 0;
};

/// The union bound on lambda{f = infinity} from stage k on, plus the exact
/// union mass at the working depth.
FInfiniteBound mass_of_f_infinite_bound(const DigitBlockSpec& spec,
                                        int from_stage);

/// Threshold 2^-(m_k + j - k) / 6 of the P-set membership condition.
double p_threshold(const DigitBlockSpec& spec, int k, int j);

struct StageEntry {
  int k = 0;                        // odd stage
  double alpha_k = 0.0;             // mu(A_k)
  std::map<int, double> alpha_kj;   // even j in (k, K] -> mu(A_k^j)
  double residual = 0.0;            // alpha_k - sum_j alpha_kj
  bool in_P = true;                 // all thresholds hold
  // Exact cell counts when mu is uniform on its support (denominator below),
  // zero denominator otherwise.
  std::uint64_t count_k = 0;
  std::map<int, std::uint64_t> count_kj;
  std::uint64_t count_denominator = 0;
};

struct StageMasses {
  std::vector<StageEntry> stages;  // one per odd k <= K
};

StageMasses stage_masses(const DyadicMeasure& mu, const DigitBlockSpec& spec);

struct WitnessReport {
  int k = 0;
  double alpha_k = 0.0;
  double epsilon = 0.0;       // 2^-m_k, the support floor of nu_k
  double leaked_mass = 0.0;   // nu_k mass strictly below epsilon
  std::uint64_t r_star = 0;
  double max_nu_abs = 0.0;    // max_r |nu_k^(r)|, r <= r_max
  double target = 0.0;        // (1 - alpha_k) * epsilon / 5
  double slack = 0.0;         // truncation allowance at this r_max
  bool certified = false;     // max_nu_abs >= target - slack
  bool inconclusive = false;  // r_max too small to certify
  double paper_bound = 0.0;   // 2^(s l_k/2 - m_k) ((1-alpha_k)/5 - 1/6)
  double direct_value = 0.0;  // (2^l_k r*)^(s/2) |mu^(2^l_k r*)|
  double mu_lower = 0.0;      // |mu_k^(2^l_k r*)| - alpha_k
};

/// Frequency-witness branch: restrict mu off A_k, push forward by 2^l_k, and
/// scan for the large Fourier coefficient the lemma guarantees.
WitnessReport witness_frequency_bound(const DyadicMeasure& mu,
                                      const DigitBlockSpec& spec, int k,
                                      std::uint64_t r_max);

struct EnergyBranchReport {
  int k = 0;
  int j = 0;
  double alpha_kj = 0.0;
  std::uint64_t cell_count = 0;   // 2^(l_j - m_k)
  double cell_length = 0.0;       // 2^-(l_j + m_j)
  double bound = 0.0;             // cell lower bound on I_s
  double energy = 0.0;            // I_s(mu)
  bool dominated = false;
  double paper_exponent = 0.0;      // (s(1+b) - 1) l_j - 2j - m_k
  double simplified_exponent = 0.0; // (s(1+b) - 1) l_j - m_k
  double threshold = 0.0;
  bool threshold_violated = false;  // alpha_kj >= threshold (k not in P)
};

/// Energy branch: the covering of A_k^j by 2^(l_j - m_k) cells of length
/// 2^-(l_j + m_j) and the resulting lower bound on I_s(mu).
/// precomputed_energy < 0 means "compute I_s(mu) here".
EnergyBranchReport energy_branch_bound(const DyadicMeasure& mu,
                                       const DigitBlockSpec& spec, int k,
                                       int j, double precomputed_energy = -1.0);

/// Desk-scale default: s = 0.8, b = 0.3, l = (2,4,8,12,17), depth 23.
DigitBlockSpec default_spec();

void to_json(nlohmann::json& j, const DigitBlockSpec& spec);
DigitBlockSpec digit_block_spec_from_json(const nlohmann::json& j);

}  // namespace lab
