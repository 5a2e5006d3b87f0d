#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "lab/cantor_oracle.hpp"
#include "lab/construction.hpp"
#include "lab/dyadic_measure.hpp"
#include "lab/fourier.hpp"
#include "lab/infsup.hpp"
#include "lab/oracles.hpp"
#include "lab/riesz.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInconclusive = 2;

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* cap = std::getenv("LAB_THREADS")) {
    const int n = std::atoi(cap);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

std::ofstream open_out(const std::filesystem::path& dir,
                       const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw std::runtime_error("cannot open " + (dir / name).string());
  f.precision(17);
  return f;
}

std::string spec_header(const lab::DigitBlockSpec& spec) {
  std::ostringstream os;
  os << "# spec s=" << spec.s << " b=" << spec.b << " l=";
  for (std::size_t i = 0; i < spec.l.size(); ++i) {
    os << (i ? "," : "") << spec.l[i];
  }
  os << " depth=" << spec.working_depth;
  return os.str();
}

int cmd_lemma(const std::vector<double>& eps_list, int Q, std::uint64_t J,
              int R, const std::filesystem::path& out_dir) {
  if (eps_list.empty()) return kExitOk;
  auto csv = open_out(out_dir, "lemma.csv");
  csv << "# lab lemma v" << kVersion << " Q=" << Q << " J=" << J
      << " R=" << R << "\n";
  csv << "epsilon,paper_bound,eps_over_5,minimax_value,slack,pulse_sum,"
         "pulse_bound\n";
  bool ok = true;
  for (double eps : eps_list) {
    const lab::MinimaxResult res = lab::minimize_sup_transform(eps, Q, J, R);
    const int K = static_cast<int>(std::ceil(10.0 / (eps * eps))) * 10;
    const lab::PulseSum pulse = lab::pulse_sum_bound(eps, K);
    csv << eps << "," << res.lower_bound << "," << eps / 5.0 << ","
        << res.optimal_value << "," << res.slack << "," << pulse.numeric_sum
        << "," << pulse.bound << "\n";
    std::cout << "eps=" << eps << " bound=" << res.lower_bound
              << " minimax=" << res.optimal_value << " slack=" << res.slack
              << " iters=" << res.iterations << "\n";
    ok &= res.optimal_value + res.slack >= res.lower_bound;
    ok &= pulse.numeric_sum <= pulse.bound;
  }
  return ok ? kExitOk : kExitViolation;
}

// Brute-force recount of the stage masses on a shallow sub-spec, digit by
// digit, independent of the bit-mask classification.
bool construct_oracle(const lab::DigitBlockSpec& spec) {
  std::vector<int> l;
  for (int lk : spec.l) {
    const int mk = static_cast<int>(std::ceil(spec.b * lk - 1e-9));
    if (lk + mk > 14) break;
    l.push_back(lk);
  }
  if (l.empty()) {
    std::cerr << "oracle: no stage fits depth 14\n";
    return false;
  }
  const lab::DigitBlockSpec sub =
      lab::validate_parameters(spec.s, spec.b, l, 14);
  const lab::DyadicMeasure mu =
      lab::lebesgue_on_predicate(sub, lab::Predicate::f_even(), 14);
  const lab::StageMasses masses = lab::stage_masses(mu, sub);

  bool ok = true;
  for (const lab::StageEntry& entry : masses.stages) {
    double alpha = 0.0;
    std::map<int, double> alpha_kj;
    mu.for_each_nonzero([&](std::uint64_t p, double w) {
      std::string bits;
      for (int i = 13; i >= 0; --i) bits.push_back((p >> i) & 1 ? '1' : '0');
      bool zero = true;
      for (int i = sub.l[entry.k - 1]; i < sub.l[entry.k - 1] + sub.m[entry.k - 1]; ++i) {
        zero &= bits[i] == '0';
      }
      if (!zero) return;
      alpha += w;
      const int f = lab::classify_f(bits, sub);
      if (f > entry.k && f % 2 == 0) alpha_kj[f] += w;
    });
    ok &= std::abs(alpha - entry.alpha_k) < 1e-12;
    for (const auto& [j, a] : entry.alpha_kj) {
      ok &= std::abs(a - alpha_kj[j]) < 1e-12;
    }
  }
  std::cout << "construct oracle: " << (ok ? "pass" : "FAIL") << "\n";
  return ok;
}

int cmd_construct(const std::string& spec_file, bool oracle,
                  std::uint64_t r_max, const std::filesystem::path& out_dir) {
  lab::DigitBlockSpec spec;
  if (spec_file.empty()) {
    spec = lab::default_spec();
  } else {
    std::ifstream in(spec_file);
    if (!in) throw std::runtime_error("cannot read " + spec_file);
    spec = lab::digit_block_spec_from_json(nlohmann::json::parse(in));
  }
  const int n = spec.working_depth;
  const lab::DyadicMeasure mu_A =
      lab::lebesgue_on_predicate(spec, lab::Predicate::f_even(), n);
  const double lambda_A =
      static_cast<double>(lab::count_where(spec, lab::Predicate::f_even(), n)) /
      std::ldexp(1.0, n);
  const double lambda_B =
      static_cast<double>(lab::count_where(spec, lab::Predicate::f_odd(), n)) /
      std::ldexp(1.0, n);
  const lab::FInfiniteBound inf_bound = lab::mass_of_f_infinite_bound(spec, 1);
  const double energy = lab::riesz_energy(mu_A, spec.s).value;
  const lab::StageMasses masses = lab::stage_masses(mu_A, spec);

  auto csv = open_out(out_dir, "stages.csv");
  csv << "# lab construct v" << kVersion << " r_max=" << r_max << "\n"
      << spec_header(spec) << "\n";
  csv << "k,j,alpha,threshold,in_P,witness_bound,energy_bound\n";

  bool violation = false;
  bool inconclusive = false;
  for (const lab::StageEntry& entry : masses.stages) {
    double witness_bound = 0.0;
    if (entry.in_P) {
      const lab::WitnessReport w =
          lab::witness_frequency_bound(mu_A, spec, entry.k, r_max);
      witness_bound = w.paper_bound;
      inconclusive |= w.inconclusive;
    }
    bool fired_energy = false;
    for (int j = entry.k + 1; j <= spec.stage_count(); ++j) {
      if (j % 2 != 0) continue;
      const auto it = entry.alpha_kj.find(j);
      const double alpha = it == entry.alpha_kj.end() ? 0.0 : it->second;
      const lab::EnergyBranchReport r =
          lab::energy_branch_bound(mu_A, spec, entry.k, j, energy);
      violation |= !r.dominated;
      fired_energy |= r.threshold_violated;
      csv << entry.k << "," << j << "," << alpha << "," << r.threshold << ","
          << (entry.in_P ? 1 : 0) << "," << witness_bound << "," << r.bound
          << "\n";
    }
    if (entry.k == spec.stage_count()) {
      // Last stage has no even j above it; still one row for the witness.
      csv << entry.k << ",," << entry.alpha_k << ",,"
          << (entry.in_P ? 1 : 0) << "," << witness_bound << ",\n";
    }
    // Exactly one branch per odd stage.
    violation |= entry.in_P == fired_energy;
  }

  nlohmann::json sets;
  sets["version"] = kVersion;
  sets["spec"] = spec;
  constexpr std::size_t kSetBudget = std::size_t{1} << 20;
  for (auto [name, pred] :
       {std::pair{"A", lab::Predicate::f_even()},
        std::pair{"B", lab::Predicate::f_odd()}}) {
    const std::uint64_t count = lab::count_where(spec, pred, n);
    nlohmann::json entry{{"depth", n},
                         {"cell_count", count},
                         {"lebesgue_mass", std::ldexp(static_cast<double>(count), -n)}};
    if (count <= kSetBudget) {
      entry["indices"] =
          nlohmann::json(lab::cylinder_decompose(spec, pred, n).indices());
    } else {
      entry["indices_omitted"] = true;  // too large to serialize usefully
    }
    sets[name] = std::move(entry);
  }
  open_out(out_dir, "sets.json") << sets.dump(2) << "\n";

  nlohmann::json summary;
  summary["version"] = kVersion;
  summary["spec"] = spec;
  summary["lambda_A"] = lambda_A;
  summary["lambda_B"] = lambda_B;
  summary["f_infinite_union_bound"] = inf_bound.union_bound;
  summary["f_infinite_exact_mass"] = inf_bound.exact_union_mass;
  summary["riesz_energy_A"] = energy;
  nlohmann::json stage_rows = nlohmann::json::array();
  for (const lab::StageEntry& entry : masses.stages) {
    stage_rows.push_back({{"k", entry.k},
                          {"alpha_k", entry.alpha_k},
                          {"residual", entry.residual},
                          {"in_P", entry.in_P}});
  }
  summary["stages"] = std::move(stage_rows);
  open_out(out_dir, "summary.json") << summary.dump(2) << "\n";

  violation |= std::abs(lambda_A + lambda_B - 1.0) != 0.0;
  if (oracle && !construct_oracle(spec)) violation = true;
  if (violation) return kExitViolation;
  return inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_decay(const std::string& builtin, const std::string& measure_file,
              const std::string& spec_file, std::uint64_t j_max,
              const std::filesystem::path& out_dir) {
  lab::DecayReport report;
  std::string label = builtin.empty() ? "file" : builtin;
  if (!measure_file.empty()) {
    std::ifstream in(measure_file);
    if (!in) throw std::runtime_error("cannot read " + measure_file);
    report = lab::estimate_decay(
        lab::dyadic_measure_from_json(nlohmann::json::parse(in)), j_max);
  } else if (builtin == "lebesgue") {
    // Integer frequencies all cancel; sample the half-integer grid instead.
    const lab::DyadicMeasure leb = lab::DyadicMeasure::lebesgue(8);
    std::vector<double> moduli(j_max);
    for (std::uint64_t j = 1; j <= j_max; ++j) {
      moduli[j - 1] =
          std::abs(lab::fourier_transform(leb, static_cast<double>(j) - 0.5));
    }
    report = lab::estimate_decay_from_moduli(moduli);
    report.j_max = j_max;
  } else if (builtin == "cantor") {
    report = lab::estimate_decay_from_moduli(lab::cantor_moduli(j_max));
    report.j_max = j_max;
  } else if (builtin == "construction-A" || builtin == "construction-AuB") {
    lab::DigitBlockSpec spec;
    if (spec_file.empty()) {
      spec = lab::default_spec();
    } else {
      std::ifstream in(spec_file);
      if (!in) throw std::runtime_error("cannot read " + spec_file);
      spec = lab::digit_block_spec_from_json(nlohmann::json::parse(in));
    }
    const lab::DyadicMeasure mu =
        builtin == "construction-A"
            ? lab::lebesgue_on_predicate(spec, lab::Predicate::f_even(),
                                         spec.working_depth)
            : lab::DyadicMeasure::lebesgue(spec.working_depth);
    report = lab::estimate_decay(mu, j_max);
  } else {
    throw std::runtime_error("unknown builtin '" + builtin + "'");
  }

  auto csv = open_out(out_dir, "decay.csv");
  csv << "# lab decay v" << kVersion << " input=" << label
      << " j_max=" << j_max << "\n";
  csv << "band_lo,band_hi,sup_abs,j_star\n";
  for (const lab::DecayBand& band : report.windows) {
    csv << band.lo << "," << band.hi << "," << band.sup_abs << ","
        << band.j_star << "\n";
  }
  nlohmann::json summary{{"version", kVersion},
                         {"input", label},
                         {"j_max", report.j_max},
                         {"fitted_exponent", report.fitted_exponent},
                         {"fourier_dim_estimate", report.fourier_dim_estimate},
                         {"resolution_warning", report.resolution_warning}};
  open_out(out_dir, "decay.json") << summary.dump(2) << "\n";
  std::cout << label << ": exponent=" << report.fitted_exponent
            << " dim_estimate=" << report.fourier_dim_estimate
            << " (j_max=" << report.j_max << ")\n";
  return kExitOk;
}

int cmd_oracle() {
  bool ok = true;
  for (const lab::oracles::OracleResult& r : lab::oracles::run_all()) {
    std::cout << (r.passed ? "pass" : "FAIL") << "  " << r.name << "  ("
              << r.detail << ")\n";
    ok &= r.passed;
  }
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"numerical laboratory for Fourier decay of measures on [0,1]"};
  app.require_subcommand(1);

  std::vector<double> eps_list;
  int grid = 256;
  std::uint64_t j_max = 256;
  int rotations = 32;
  std::string out_dir = "out";
  auto* lemma = app.add_subcommand("lemma", "inf-sup lower bound experiments");
  lemma->add_option("--eps", eps_list, "epsilon values")->delimiter(',');
  lemma->add_option("--grid", grid, "atom grid size Q");
  lemma->add_option("--jmax", j_max, "frequency truncation J");
  lemma->add_option("--rotations", rotations, "modulus linearization angles");
  lemma->add_option("--out", out_dir, "output directory");

  std::string spec_file;
  bool oracle_flag = false;
  std::uint64_t r_max = 4096;
  auto* construct =
      app.add_subcommand("construct", "digit-block set construction");
  construct->add_option("--spec", spec_file, "spec JSON file");
  construct->add_flag("--oracle", oracle_flag, "brute-force recount");
  construct->add_option("--rmax", r_max, "witness frequency scan limit");
  construct->add_option("--out", out_dir, "output directory");

  std::string builtin;
  std::string measure_file;
  std::string decay_spec;
  std::uint64_t decay_jmax = 65536;
  auto* decay = app.add_subcommand("decay", "Fourier decay estimation");
  decay->add_option("--builtin", builtin,
                    "lebesgue|cantor|construction-A|construction-AuB");
  decay->add_option("--measure", measure_file, "measure JSON file");
  decay->add_option("--spec", decay_spec, "spec JSON for construction-*");
  decay->add_option("--jmax", decay_jmax, "frequency range");
  decay->add_option("--out", out_dir, "output directory");

  app.add_subcommand("oracle", "run the derived-value oracle suite");

  CLI11_PARSE(app, argc, argv);
  try {
    if (lemma->parsed()) {
      return cmd_lemma(eps_list, grid, j_max, rotations, out_dir);
    }
    if (construct->parsed()) {
      return cmd_construct(spec_file, oracle_flag, r_max, out_dir);
    }
    if (decay->parsed()) {
      return cmd_decay(builtin, measure_file, decay_spec, decay_jmax,
                       out_dir);
    }
    return cmd_oracle();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}
