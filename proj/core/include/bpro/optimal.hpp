#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bpro/core.hpp"
#include "bpro/distribution.hpp"
#include "bpro/trace_analysis.hpp"

namespace bpro {

inline constexpr std::size_t kDefaultOptCap = 24;
inline constexpr std::size_t kDefaultConfigurationCap = 1'000'000;

struct OptResult {
  std::size_t bins = 0;
  Packing packing;
};

// Minimum bin count by branch-and-bound (items in decreasing order, FFD
// incumbent, volume pruning). Throws CapExceeded when the instance has more
// than `cap` items.
OptResult opt_exact(std::span<const ExactSize> items, std::size_t cap = kDefaultOptCap);

// max(ceil(volume), number of Large items).
std::size_t opt_lower_bound(std::span<const ExactSize> items);

Packing first_fit_decreasing(std::span<const ExactSize> items);

// Optimal packing of Large and Medium items: a maximum fitting L-M matching,
// leftover Large items alone, leftover Medium items in pairs. Throws
// DomainError on a Small or Tiny item.
Packing opt_large_medium(std::span<const ExactSize> items);

// Multiset over a support: counts[i] copies of support[i].
struct Configuration {
  std::vector<std::size_t> counts;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Rational configuration_load(const Configuration& c, std::span<const ExactSize> support);

// All maximal feasible configurations (nothing from the support can be
// added), in lexicographically decreasing order of count vectors. Throws
// DomainError on an empty or repeated support and CapExceeded beyond `cap`.
std::vector<Configuration> enumerate_configurations(std::span<const ExactSize> support,
                                                    std::size_t cap = kDefaultConfigurationCap);

struct LpSolution {
  std::vector<ExactSize> support;
  // Only configurations with a positive rate.
  std::vector<std::pair<Configuration, Rational>> rates;
  Rational objective;
  std::size_t configurations_considered = 0;
};

// min sum x_c  s.t.  sum_c x_c count(c,i) >= demand_i, x >= 0, over the
// maximal configurations of `support` (plus single-type bins used as the
// starting basis). Solved with the exact revised simplex; coverage, dual
// feasibility and strong duality are re-checked exactly.
LpSolution covering_lp(std::span<const ExactSize> support, std::span<const Rational> demand,
                       std::size_t cap = kDefaultConfigurationCap);

// Fractional optimum in bins per item: covering_lp with demand = probabilities.
LpSolution configuration_lp(const DiscreteDistribution& dist, std::size_t cap = kDefaultConfigurationCap);

struct RecipeBin {
  std::vector<std::pair<ExactSize, std::size_t>> counts;
  Rational rate;
};
using Recipe = std::vector<RecipeBin>;

// Checks every bin fits and covers each item type (sum rate*count >= p_i,
// exactly); returns sum of rates. DomainError names an infeasible bin, an
// unknown size, or the first uncovered item type.
Rational verify_recipe(const DiscreteDistribution& dist, const Recipe& recipe);

// Opt(I) exactly, or a [lower, upper] bracket when beyond the exact cap.
struct OptBracket {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool exact = false;
};

// Exact when items.size() <= cap; otherwise lower = max(volume bound, ceil of
// the empirical configuration LP) and upper = min(FFD, rounded-up LP) where
// the LP is tractable.
OptBracket opt_bracket(std::span<const ExactSize> items, std::size_t cap = kDefaultOptCap);

struct PrefixOpt {
  std::size_t t = 0;
  OptBracket opt;
};

// Opt(I_sigma(1,t)) for each t of `grid`.
std::vector<PrefixOpt> opt_prefix_curve(const Instance& instance, const Permutation& sigma,
                                        std::span<const std::size_t> grid,
                                        std::size_t cap = kDefaultOptCap);

}  // namespace bpro
