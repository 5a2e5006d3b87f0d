#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "lab/construction.hpp"
#include "lab/fourier.hpp"
#include "lab/riesz.hpp"

using namespace lab;

TEST_CASE("parameter validation") {
  SUBCASE("the reference parameter set is accepted") {
    const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {4, 20, 120});
    CHECK(spec.m == std::vector<int>{2, 6, 36});
    CHECK(spec.stage_count() == 3);
    CHECK(spec.min_depth() == 156);
    // Admissible window for b at s = 0.8 is (0.25, 0.4).
    CHECK_THROWS(validate_parameters(0.8, 0.25, {4, 20}));
    CHECK_THROWS(validate_parameters(0.8, 0.4, {4, 20}));
    CHECK_NOTHROW(validate_parameters(0.8, 0.26, {4, 20}));
    CHECK_NOTHROW(validate_parameters(0.8, 0.39, {4, 20}));
  }
  SUBCASE("s window") {
    CHECK_THROWS(validate_parameters(0.7, 0.38, {4, 20}));  // below sqrt(3)-1
    CHECK_THROWS(validate_parameters(1.0, 0.3, {4, 20}));
    CHECK_NOTHROW(validate_parameters(0.74, 0.36, {4, 20}));
  }
  SUBCASE("block layout") {
    CHECK_THROWS(validate_parameters(0.8, 0.3, {}));
    CHECK_THROWS(validate_parameters(0.8, 0.3, {2, 2}));
    CHECK_THROWS(validate_parameters(0.8, 0.3, {2, 3}));  // overlaps block 1
    CHECK_THROWS(validate_parameters(0.8, 0.3, {0, 4}));
    CHECK_NOTHROW(validate_parameters(0.8, 0.3, {2, 4}));
  }
  SUBCASE("ceil of b l_k stays exact at integer products") {
    const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {10, 20});
    CHECK(spec.m == std::vector<int>{3, 6});  // 0.3 * 10 = 3, not 4
  }
  SUBCASE("explicit depth bounds") {
    CHECK_THROWS(validate_parameters(0.8, 0.3, {2, 4}, 5));   // < l_K + m_K
    CHECK_THROWS(validate_parameters(0.8, 0.3, {2, 4}, 31));  // > cap
    CHECK(validate_parameters(0.8, 0.3, {2, 4}, 8).working_depth == 8);
    CHECK(validate_parameters(0.8, 0.3, {2, 4}).working_depth == 6);
  }
  SUBCASE("stage ratios are informational") {
    const std::vector<double> r =
        stage_ratios(validate_parameters(0.8, 0.3, {4, 20, 120}));
    CHECK(r == std::vector<double>{5.0, 6.0});
  }
}

TEST_CASE("digit classification") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 6}, 10);
  // Blocks: digit 3 (stage 1), digits 7-8 (stage 2).
  CHECK(classify_f("1111111111", spec) == 0);
  CHECK(classify_f("1101111111", spec) == 1);
  CHECK(classify_f("1111110011", spec) == 2);
  CHECK(classify_f("1101110011", spec) == 2);  // later stage wins
  CHECK_THROWS(classify_f("11", spec));
  CHECK_THROWS(classify_f("11x1110011", spec));

  // Cell 0b1101110011 is the same string as a depth-10 index.
  CHECK(classify_cell(0b1101110011, 10, spec) == 2);
  CHECK(classify_cell(0b1111111111, 10, spec) == 0);
}

TEST_CASE("tiny one-stage spec partitions the square") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {1}, 2);
  // f = 1 iff digit 2 is zero: A = {00, 10} has f in {1}? No: f=1 is odd.
  const std::uint64_t a = count_where(spec, Predicate::f_even(), 2);
  const std::uint64_t b = count_where(spec, Predicate::f_odd(), 2);
  CHECK(a + b == 4);
  CHECK(b == 2);  // digit 2 zero: cells 00 and 10
  CHECK(a == 2);
}

TEST_CASE("block-zero sets have the exact product mass") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {4, 8, 12}, 16);
  const int n = 16;
  for (int k = 1; k <= spec.stage_count(); ++k) {
    const std::uint64_t count =
        count_where(spec, Predicate::block_zero(k), n);
    CHECK(count == (std::uint64_t{1} << (n - spec.m[k - 1])));
  }
}

TEST_CASE("cylinder decomposition agrees with the counts") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 4}, 8);
  const int n = 8;
  for (const Predicate& pred :
       {Predicate::f_even(), Predicate::f_odd(), Predicate::f_equals(1),
        Predicate::f_equals(2), Predicate::block_zero(1)}) {
    const CylinderSet set = cylinder_decompose(spec, pred, n);
    CHECK(set.size() == count_where(spec, pred, n));
    for (std::uint64_t p : set.indices()) {
      CHECK(eval_predicate(pred, p, n, spec));
    }
  }
  CHECK_THROWS(cylinder_decompose(spec, Predicate::f_even(), n, 4));
}

TEST_CASE("A_k is the union of its stage pieces") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 4}, 8);
  const int n = 8;
  // A_1 within A: block 1 zero and f even.
  const CylinderSet a1 = set_intersection(
      cylinder_decompose(spec, Predicate::block_zero(1), n),
      cylinder_decompose(spec, Predicate::f_even(), n));
  const CylinderSet piece = set_intersection(
      cylinder_decompose(spec, Predicate::block_zero(1), n),
      cylinder_decompose(spec, Predicate::f_equals(2), n));
  CHECK(a1 == piece);  // only even stage above 1 is 2 here
}

TEST_CASE("union bound for deep zero blocks") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {4, 8, 12}, 16);
  REQUIRE(spec.m == std::vector<int>{2, 3, 4});
  const FInfiniteBound b1 = mass_of_f_infinite_bound(spec, 1);
  CHECK(b1.union_bound == doctest::Approx(0.4375));
  CHECK(b1.exact_union_mass <= b1.union_bound);
  CHECK(b1.exact_union_mass > 0.0);
  const FInfiniteBound b3 = mass_of_f_infinite_bound(spec, 3);
  CHECK(b3.union_bound == doctest::Approx(std::ldexp(1.0, -4)));
  CHECK(b3.exact_union_mass == doctest::Approx(b3.union_bound));
  CHECK_THROWS(mass_of_f_infinite_bound(spec, 0));
  CHECK_THROWS(mass_of_f_infinite_bound(spec, 4));
}

TEST_CASE("P-threshold arithmetic") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {4, 20});
  REQUIRE(spec.m[0] == 2);
  CHECK(p_threshold(spec, 1, 2) == doctest::Approx(1.0 / 48));
}

TEST_CASE("stage masses") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 4, 8}, 14);
  const DyadicMeasure on_A =
      lebesgue_on_predicate(spec, Predicate::f_even(), 14);

  SUBCASE("identity alpha_k = sum alpha_kj + residual") {
    const StageMasses masses = stage_masses(on_A, spec);
    REQUIRE(masses.stages.size() == 2);  // k = 1, 3
    for (const StageEntry& entry : masses.stages) {
      double assigned = 0.0;
      for (const auto& [j, a] : entry.alpha_kj) {
        CHECK(j % 2 == 0);
        CHECK(j > entry.k);
        assigned += a;
      }
      CHECK(entry.alpha_k == assigned + entry.residual);
      CHECK(entry.alpha_k >= 0.0);
      CHECK(entry.alpha_k <= 1.0);
    }
  }
  SUBCASE("exact cell counts on the uniform measure") {
    const StageMasses masses = stage_masses(on_A, spec);
    for (const StageEntry& entry : masses.stages) {
      REQUIRE(entry.count_denominator > 0);
      std::uint64_t assigned = 0;
      for (const auto& [j, c] : entry.count_kj) assigned += c;
      CHECK(entry.count_k == assigned);  // on A every block-k-zero f is even
      CHECK(entry.alpha_k ==
            doctest::Approx(static_cast<double>(entry.count_k) /
                            static_cast<double>(entry.count_denominator))
                .epsilon(1e-12));
    }
  }
  SUBCASE("a measure on f = 0 strings has every stage empty") {
    const DyadicMeasure on_zero =
        lebesgue_on_predicate(spec, Predicate::f_equals(0), 14);
    for (const StageEntry& entry : stage_masses(on_zero, spec).stages) {
      CHECK(entry.alpha_k == 0.0);
      CHECK(entry.in_P);
    }
  }
}

TEST_CASE("witness frequency branch") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 4, 8}, 14);
  const DyadicMeasure on_zero =
      lebesgue_on_predicate(spec, Predicate::f_equals(0), 14);

  SUBCASE("alpha_k = 0 reduces the combined bound to 2^(s l_k / 2 - m_k)/30") {
    for (int k : {1, 3}) {
      const WitnessReport w = witness_frequency_bound(on_zero, spec, k, 256);
      CHECK(w.alpha_k == 0.0);
      CHECK(w.paper_bound ==
            doctest::Approx(
                std::exp2(spec.s * spec.l[k - 1] / 2.0 - spec.m[k - 1]) /
                30.0)
                .epsilon(1e-12));
      CHECK(w.epsilon == std::ldexp(1.0, -spec.m[k - 1]));
      CHECK(w.leaked_mass == 0.0);
      CHECK(w.target == doctest::Approx(w.epsilon / 5.0));
    }
  }
  SUBCASE("the scan certifies the lemma inequality at moderate r_max") {
    const WitnessReport w = witness_frequency_bound(on_zero, spec, 1, 1024);
    CHECK(w.max_nu_abs >= w.target - w.slack);
    CHECK(w.certified);
    CHECK(!w.inconclusive);
    CHECK(w.r_star >= 1);
    CHECK(w.r_star <= 1024);
  }
  SUBCASE("pushforward identity behind the scan") {
    const DyadicMeasure mu_k = restrict_where(on_zero, [&](std::uint64_t p) {
      return eval_predicate(Predicate::block_zero(1), p, 14, spec) == false;
    });
    const DyadicMeasure nu_k = dyadic_pushforward(mu_k, spec.l[0]);
    for (int r = 1; r <= 16; ++r) {
      const auto lhs = fourier_transform(nu_k, r);
      const auto rhs =
          fourier_transform(mu_k, std::ldexp(static_cast<double>(r),
                                             spec.l[0]));
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
  SUBCASE("only odd stages have a witness branch") {
    CHECK_THROWS(witness_frequency_bound(on_zero, spec, 2, 16));
    CHECK_THROWS(witness_frequency_bound(on_zero, spec, 0, 16));
  }
}

TEST_CASE("energy branch geometry") {
  // (l_j, m_j, m_k) = (20, 6, 2): 2^18 covering cells of length 2^-26.
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {4, 20}, 26);
  // All-ones cell: every block nonzero, so no mass falls in the zero class.
  const DyadicMeasure mu =
      DyadicMeasure::point_mass(26, (std::uint64_t{1} << 26) - 1, 1.0);
  const EnergyBranchReport r = energy_branch_bound(mu, spec, 1, 2, 1.0);
  CHECK(r.cell_count == (std::uint64_t{1} << 18));
  CHECK(r.cell_length == std::ldexp(1.0, -26));
  CHECK(r.paper_exponent ==
        doctest::Approx((0.8 * 1.3 - 1.0) * 20 - 4 - 2).epsilon(1e-12));
  CHECK(r.simplified_exponent ==
        doctest::Approx((0.8 * 1.3 - 1.0) * 20 - 2).epsilon(1e-12));
  CHECK(r.threshold == doctest::Approx(p_threshold(spec, 1, 2)));
  CHECK(r.alpha_kj == 0.0);
  CHECK(r.bound == 0.0);
  CHECK(r.dominated);
  CHECK_THROWS(energy_branch_bound(mu, spec, 2, 1, 1.0));
  CHECK_THROWS(energy_branch_bound(mu, spec, 1, 3, 1.0));
}

TEST_CASE("energy branch dominance on a live stage") {
  const DigitBlockSpec spec = validate_parameters(0.8, 0.3, {2, 4, 8}, 14);
  const DyadicMeasure on_A =
      lebesgue_on_predicate(spec, Predicate::f_even(), 14);
  const double energy = riesz_energy(on_A, spec.s).value;
  for (int k : {1, 3}) {
    for (int j = k + 1; j <= 3; ++j) {
      if (j % 2 != 0) continue;
      const EnergyBranchReport r =
          energy_branch_bound(on_A, spec, k, j, energy);
      CHECK(r.bound > 0.0);
      CHECK(r.dominated);
      CHECK(r.energy == energy);
    }
  }
}

TEST_CASE("default parameters and serialization") {
  const DigitBlockSpec spec = default_spec();
  CHECK(spec.s == 0.8);
  CHECK(spec.b == 0.3);
  CHECK(spec.l == std::vector<int>{2, 4, 8, 12, 17});
  CHECK(spec.m == std::vector<int>{1, 2, 3, 4, 6});
  CHECK(spec.working_depth == 23);

  nlohmann::json j = spec;
  const DigitBlockSpec back = digit_block_spec_from_json(j);
  CHECK(back.l == spec.l);
  CHECK(back.m == spec.m);
  CHECK(back.working_depth == spec.working_depth);
}
