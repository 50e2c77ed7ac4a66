// Acceptance suite: one line per criterion, exit status 0 only if every
// selected criterion passes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpro/io.hpp"
#include "bpro/markov.hpp"
#include "bpro/matching.hpp"
#include "bpro/optimal.hpp"
#include "bpro/packers.hpp"
#include "bpro/random_order.hpp"
#include "bpro/trace_analysis.hpp"
#include "support.hpp"

#ifndef BPRO_CLI_PATH
#error "BPRO_CLI_PATH must name the bpro executable"
#endif
#ifndef BPRO_WORK_DIR
#error "BPRO_WORK_DIR must name a scratch directory"
#endif

namespace {

using namespace bpro;

// Pinned tolerances and sizes.
constexpr double kTable1Tolerance = 0.002;
constexpr std::array<double, 6> kTable1Published{1.1037, 1.1182, 1.1334, 1.1378, 1.1419, 1.1440};
constexpr std::size_t kFig1States = 9;
constexpr std::size_t kSevenTypeStates = 357;
constexpr double kBfRatePublished = 0.3317621;
constexpr double kBfRateTolerance = 1e-6;
constexpr std::size_t kSimulatedItems = 1'000'000;
constexpr double kSimulationSigmas = 3.0;
constexpr std::size_t kStructuralInstances = 500;
constexpr std::size_t kStructuralMaxItems = 300;
constexpr std::size_t kStructuralPermutations = 10;
constexpr std::size_t kOracleCases = 200;
constexpr std::size_t kKenyonItems = 5000;
constexpr std::size_t kKenyonSamples = 100;
constexpr double kKenyonBandLimit = 0.05;
constexpr std::array<std::size_t, 3> kFischerK{64, 256, 1024};
constexpr std::size_t kFischerTrials = 200;
constexpr double kFischerMedianFactor = 2.0;
constexpr double kTimeLimitSeconds = 60.0;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

DiscreteDistribution table1(int types) {
  return parse_distribution_json(read_text_file(testing::data_path("table1/types" + std::to_string(types) + ".json")));
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream ss;
  ss.precision(digits);
  ss << v;
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome table1_reproduction() {
  Outcome o{true, ""};
  for (int types = 2; types <= 7; ++types) {
    const double published = kTable1Published[static_cast<std::size_t>(types - 2)];
    const double got = iid_ratio(table1(types), OptMode::Lp).ratio;
    const bool ok = std::abs(got - published) <= kTable1Tolerance;
    o.pass = o.pass && ok;
    o.detail += std::to_string(types) + " types " + fmt(got) + (ok ? "" : " (published " + fmt(published) + ")") +
                (types < 7 ? "; " : "");
  }
  return o;
}

Outcome state_counts() {
  const auto fig1 = parse_distribution_json(read_text_file(testing::data_path("fig1.json")));
  const ChainSpec small = build_chain(fig1);
  const std::set<std::vector<Rational>> expected{
      {},
      {make_rational(1, 4)},
      {make_rational(1, 3)},
      {make_rational(1, 2)},
      {make_rational(7, 12)},
      {make_rational(2, 3)},
      {make_rational(3, 4)},
      {make_rational(3, 4), make_rational(1, 3)},
      {make_rational(3, 4), make_rational(2, 3)}};
  std::set<std::vector<Rational>> got;
  for (const auto& s : small.states) got.insert(s.open_loads);
  const bool fig1_ok = small.size() == kFig1States && got == expected;
  const std::size_t seven = build_chain(table1(7)).size();
  Outcome o;
  o.pass = fig1_ok && seven == kSevenTypeStates;
  o.detail = "{1/4,1/3}: " + std::to_string(small.size()) + " states" + (fig1_ok ? " with the expected loads" : " (mismatch)") +
             "; 7 types: " + std::to_string(seven) + " states, expected " + std::to_string(kSevenTypeStates);
  if (seven != kSevenTypeStates) o.detail += " (not reachable under the stated closing rule; see README)";
  return o;
}

Outcome bf_rate_check() {
  const ChainSpec chain = build_chain(table1(7));
  const StationaryVector omega = stationary(chain, SolveMode::Exact);
  const BfRate rate = bf_rate(chain, omega);
  const double diff = std::abs(rate.value - kBfRatePublished);
  return {omega.is_exact() && rate.exact.has_value() && diff <= kBfRateTolerance,
          "bf_rate " + fmt(rate.value, 10) + " (exact), |diff| " + fmt(diff, 3)};
}

Outcome recipe_check() {
  const auto dist = table1(7);
  const Recipe recipe = parse_recipe_json(read_text_file(testing::data_path("table1/types7_recipe.json")));
  const Rational recipe_rate = verify_recipe(dist, recipe);
  const Rational lp = configuration_lp(dist).objective;
  return {recipe_rate == make_rational(29, 100) && lp <= make_rational(29, 100),
          "recipe " + to_fraction_string(recipe_rate) + ", LP " + to_fraction_string(lp)};
}

Outcome chain_vs_simulation() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{true, ""};
  for (int types : {2, 7}) {
    const auto dist = table1(types);
    const ChainSpec chain = build_chain(dist);
    const double rate = bf_rate(chain, stationary(chain)).value;
    const SimulatedRate sim = simulate_iid_best_fit(dist, kSimulatedItems, derive_seed(kSeed, static_cast<std::uint64_t>(types)));
    const double z = std::abs(sim.rate - rate) / sim.std_error;
    o.pass = o.pass && z <= kSimulationSigmas;
    o.detail += std::to_string(types) + " types: chain " + fmt(rate, 7) + ", simulated " + fmt(sim.rate, 7) + " (" +
                fmt(z, 3) + " SE); ";
  }
  const double secs = seconds_since(start);
  o.pass = o.pass && secs <= kTimeLimitSeconds;
  o.detail += fmt(secs, 3) + " s";
  return o;
}

Outcome structural_suite() {
  static const std::array<const char*, 7> checks{
      "a-load-above-2/3",          "b-load-above-3/4",            "c-weight-at-least-one",
      "d-few-light-nonlarge-bins", "e-tiny-volume-in-light-bins", "f-medium-bins-with-tiny",
      "g-small-tiny-bins-above-3/4"};
  CounterRng rng(derive_seed(kSeed, 6));
  std::size_t violations = 0;
  std::size_t traces = 0;
  std::string first;
  for (std::size_t i = 0; i < kStructuralInstances; ++i) {
    const std::size_t n = 1 + rng.below(kStructuralMaxItems);
    const Instance inst{testing::random_sequence(n, testing::random_profile(rng), rng), std::nullopt};
    for (std::size_t p = 0; p < kStructuralPermutations; ++p) {
      const Sequence s = inst.permuted(Permutation(random_permutation(n, rng)));
      const ClaimReport report = verify_structural_claims(best_fit(s));
      ++traces;
      for (const auto& rec : report.records) {
        for (const char* name : checks) {
          if (rec.name != name || rec.violations == 0) continue;
          violations += rec.violations;
          if (first.empty()) first = " (first: " + rec.name + " on instance " + std::to_string(i) + ")";
        }
      }
    }
  }
  return {violations == 0, std::to_string(traces) + " traces, " + std::to_string(violations) + " violations" + first};
}

Outcome oracle_equivalence() {
  CounterRng rng(derive_seed(kSeed, 7));
  std::size_t opt_bad = 0;
  for (std::size_t i = 0; i < kOracleCases; ++i) {
    const Sequence s = testing::random_sequence(1 + rng.below(10), testing::random_profile(rng), rng);
    if (opt_exact(s).bins != testing::brute_force_opt(s)) ++opt_bad;
  }

  std::size_t match_bad = 0;
  for (std::size_t i = 0; i < kOracleCases; ++i) {
    std::vector<Point> plus, minus;
    for (int j = 0; j < 8; ++j) {
      plus.push_back({make_rational(static_cast<std::int64_t>(rng.below(10))), make_rational(static_cast<std::int64_t>(rng.below(10)))});
      minus.push_back({make_rational(static_cast<std::int64_t>(rng.below(10))), make_rational(static_cast<std::int64_t>(rng.below(10)))});
    }
    const std::size_t deficiency = 8 - testing::exhaustive_upright_matching(plus, minus);
    if (max_upright_matching(plus, minus).unmatched_plus != deficiency) ++match_bad;
  }

  std::size_t gadget_bad = 0;
  for (std::size_t i = 0; i < kOracleCases; ++i) {
    const testing::Profile profile = i % 2 == 0 ? testing::Profile{0, 0, 6, 1} : testing::Profile{3, 2, 1, 1};
    Sequence s;
    std::size_t non_tiny = 0;
    const std::size_t target = 1 + rng.below(12);
    while (non_tiny < target) {
      const ExactSize x = testing::random_sequence(1, profile, rng)[0];
      if (classify(x) != Category::Tiny) ++non_tiny;
      s.push_back(x);
    }
    if (count_s_triplets(s) != testing::brute_force_s_triplets(s) ||
        count_fitting_ml_triplets(s, false) != testing::brute_force_ml_triplets(s, false) ||
        count_fitting_ml_triplets(s, true) != testing::brute_force_ml_triplets(s, true)) {
      ++gadget_bad;
    }
  }
  return {opt_bad + match_bad + gadget_bad == 0,
          "mismatches: opt " + std::to_string(opt_bad) + "/" + std::to_string(kOracleCases) + ", matching " +
              std::to_string(match_bad) + "/" + std::to_string(kOracleCases) + ", gadgets " +
              std::to_string(gadget_bad) + "/" + std::to_string(kOracleCases)};
}

Outcome kenyon() {
  // Few distinct sizes keep the prefix LP brackets narrow.
  const auto dist = testing::distribution(
      {{"0.6", "0.2"}, {"0.7", "0.1"}, {"0.4", "0.15"}, {"0.45", "0.1"}, {"0.3", "0.2"}, {"0.2", "0.15"}, {"0.15", "0.1"}});
  const Instance inst = sample_iid_instance(dist, kKenyonItems, derive_seed(kSeed, 8));
  const std::vector<std::size_t> grid{kKenyonItems / 4, kKenyonItems / 2, 3 * kKenyonItems / 4};
  const KenyonReport r = kenyon_convergence(inst, kKenyonSamples, grid, kSeed, kDefaultOptCap, kKenyonBandLimit);
  Outcome o{r.rows.size() == grid.size(), ""};
  o.detail = "Opt in [" + std::to_string(r.opt_total.lower) + "," + std::to_string(r.opt_total.upper) + "]";
  for (const auto& row : r.rows) {
    o.pass = o.pass && row.max_deviation_bound <= kKenyonBandLimit;
    o.detail += "; t=" + std::to_string(row.t) + " deviation " + fmt(row.max_deviation, 3) + " (bracket bound " +
                fmt(row.max_deviation_bound, 3) + ")";
  }
  return o;
}

Outcome fischer() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> medians;
  Outcome o{true, ""};
  for (std::size_t k : kFischerK) {
    const FischerStats s = fischer_experiment(k, kFischerTrials, derive_seed(kSeed, k));
    medians.push_back(s.q50);
    o.detail += "k=" + std::to_string(k) + " q10/q50/q90 " + fmt(s.q10, 3) + "/" + fmt(s.q50, 3) + "/" + fmt(s.q90, 3) + "; ";
  }
  const double secs = seconds_since(start);
  o.pass = medians.back() <= kFischerMedianFactor * medians.front() && secs <= kTimeLimitSeconds;
  o.detail += fmt(secs, 3) + " s";
  return o;
}

int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string("\"") + BPRO_CLI_PATH + "\" " + args + " --out \"" + out.string() + "\"";
  return std::system(cmd.c_str());
}

Outcome cli_determinism() {
  const std::filesystem::path work = std::filesystem::path(BPRO_WORK_DIR) / "determinism";
  std::filesystem::create_directories(work);
  const std::string data = testing::data_path("");
  const std::vector<std::pair<std::string, std::string>> runs{
      {"simulate", "simulate --instance " + data + "instances/three_halves.txt --order random --seed 7 --trace"},
      {"simulate-dist", "simulate --dist " + data + "table1/types7.json --n 2000 --alg first-fit --seed 3"},
      {"ratio", "ratio --dist " + data + "table1/types7.json --n 2000 --recipe " + data +
                    "table1/types7_recipe.json --samples 20 --seed 5"},
      {"ratio-csv", "ratio --dist " + data + "fig1.json --n 500 --samples 10 --format csv --seed 5"},
      {"markov", "markov --dist " + data + "table1/types7.json"},
      {"markov-csv", "markov --dist " + data + "fig1.json --format csv"},
      {"gadgets", "gadgets --dist " + data + "table1/types5.json --n 3000 --samples 10 --range 0.25:0.5 --seed 9"},
      {"match", "match --k 256 --trials 50 --seed 11"},
      {"opt", "opt --dist " + data + "table1/types7.json --recipe " + data + "table1/types7_recipe.json"},
      {"opt-instance", "opt --instance " + data + "instances/three_halves.txt"}};
  std::size_t identical = 0;
  std::string bad;
  for (const auto& [name, args] : runs) {
    const auto a = work / (name + ".1");
    const auto b = work / (name + ".2");
    const int ca = run_cli(args, a);
    const int cb = run_cli(args, b);
    const std::string ta = ca == 0 ? read_text_file(a.string()) : "";
    const std::string tb = cb == 0 ? read_text_file(b.string()) : "";
    if (ca == 0 && cb == 0 && !ta.empty() && ta == tb) {
      ++identical;
    } else {
      bad += " " + name;
    }
  }
  return {identical == runs.size(), std::to_string(identical) + "/" + std::to_string(runs.size()) +
                                        " invocations byte-identical" + (bad.empty() ? "" : "; differing:" + bad)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bpro acceptance suite"};
  std::vector<int> only;
  app.add_option("--criterion", only, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "Table 1 reproduction", table1_reproduction},
      {2, "chain state counts", state_counts},
      {3, "Best-Fit rate", bf_rate_check},
      {4, "recipe and LP", recipe_check},
      {5, "chain vs simulation", chain_vs_simulation},
      {6, "structural claims", structural_suite},
      {7, "oracle equivalence", oracle_equivalence},
      {8, "prefix Opt convergence", kenyon},
      {9, "upright matching scaling", fischer},
      {10, "CLI determinism", cli_determinism}};

  bool all = true;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %2d %s  %-26s %s [%.2fs]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
