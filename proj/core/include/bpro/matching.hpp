#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bpro/rational.hpp"

namespace bpro {

struct Point {
  Rational x;
  Rational y;
};

// A plus point (x+, y+) may be matched to a minus point (x-, y-) when
// x- <= x+ and y- <= y+.
struct MatchingResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (plus index, minus index)
  std::size_t unmatched_plus = 0;
};

// Sweep by x (minus before plus on ties, then input order); each plus takes
// the unmatched eligible minus with the largest y, smallest index on ties.
// Leaves the minimum possible number of plus points unmatched.
MatchingResult max_upright_matching(std::span<const Point> plus, std::span<const Point> minus);

// Maximum bipartite matching by augmenting paths over all upright pairs;
// O(|plus| |minus|^2), intended as a test oracle.
std::size_t brute_force_upright_matching(std::span<const Point> plus, std::span<const Point> minus);

// Unmatched plus count for the interleaved construction with sizes
// y_i = 2i - 1 < x_i = 2i: plus point i is (pi(i), x_i) and minus point i is
// (pi(k + i), y_i), where pi(j) = arrival[j - 1] + 1 for a permutation
// `arrival` of 0..2k-1.
std::size_t interleaved_unmatched(std::size_t k, std::span<const std::size_t> arrival);

struct FischerStats {
  std::size_t k = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> unmatched;  // per trial
  double mean = 0;
  std::size_t max = 0;
  double scale = 0;                 // sqrt(k) (ln k)^{3/4}
  std::vector<double> normalized;   // unmatched / scale, per trial
  double q10 = 0;
  double q50 = 0;
  double q90 = 0;
};

// Trial i draws its arrival permutation from derive_seed(seed, i). Requires
// k >= 2 and trials >= 1.
FischerStats fischer_experiment(std::size_t k, std::size_t trials, std::uint64_t seed, unsigned threads = 0);

// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace bpro
