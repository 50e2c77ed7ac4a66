#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bpro/core.hpp"
#include "bpro/distribution.hpp"
#include "bpro/optimal.hpp"
#include "bpro/rng.hpp"

namespace bpro {

// Exact sampler: draws a uniform integer below the common denominator of the
// probabilities. Throws DomainError when that denominator exceeds 2^63.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const DiscreteDistribution& dist);

  // Index into dist.sizes().
  std::size_t draw(CounterRng& rng) const;

 private:
  std::uint64_t denominator_ = 1;
  std::vector<std::uint64_t> cumulative_;  // scaled numerators
};

// n i.i.d. sizes from `dist`; DomainError when n == 0.
Instance sample_iid_instance(const DiscreteDistribution& dist, std::size_t n, std::uint64_t seed);

struct SimulatedRate {
  std::size_t items = 0;
  std::size_t bins = 0;
  double rate = 0;    // bins / items
  double std_error = 0;  // batch means
  std::size_t batches = 0;
};

// Streams `items` i.i.d. draws through Best-Fit. `batches` must divide into
// at least two non-empty batches.
SimulatedRate simulate_iid_best_fit(const DiscreteDistribution& dist, std::size_t items, std::uint64_t seed,
                                    std::size_t batches = 100);

// Worker threads used by the sampling helpers; 0 means hardware concurrency.
struct ParallelOptions {
  unsigned threads = 0;
};

enum class OptReferenceKind { Exact, Recipe, Lp, VolumeBound };

std::string_view opt_reference_name(OptReferenceKind k) noexcept;

struct OptReference {
  OptReferenceKind kind = OptReferenceKind::Exact;
  Rational value;
};

struct RrOptions {
  std::size_t opt_cap = kDefaultOptCap;
  std::optional<Rational> recipe_rate;  // bins per item
  std::optional<Rational> lp_rate;      // bins per item
  ParallelOptions parallel;
};

// First available of: opt_exact (n <= opt_cap), recipe rate * n, LP rate * n,
// opt_lower_bound. DomainError on an empty instance.
OptReference choose_opt_reference(const Instance& instance, const RrOptions& options);

struct RatioEstimate {
  double mean_bf = 0;
  OptReference opt_reference;
  double ratio = 0;
  double std_error = 0;     // of mean_bf: sample sd / sqrt(samples)
  double ratio_std_error = 0;  // std_error / opt reference
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> bins;  // per sample, in sample order
};

// Best-Fit over `samples` uniform permutations; sample i uses the stream
// derive_seed(seed, i), so results do not depend on the thread count.
RatioEstimate estimate_rr(const Instance& instance, std::size_t samples, std::uint64_t seed,
                          const RrOptions& options = {});

struct KenyonRow {
  std::size_t t = 0;
  double min_ratio = 0;  // midpoint estimate of Opt(prefix) n / (t Opt(I))
  double max_ratio = 0;
  double mean_ratio = 0;
  double max_deviation = 0;     // from the midpoint estimates
  double max_deviation_bound = 0;  // worst case over the Opt brackets
  std::size_t exact_prefixes = 0;
  bool within_band = false;  // max_deviation_bound <= band
};

struct KenyonReport {
  OptBracket opt_total;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double band = 0;
  std::vector<KenyonRow> rows;
};

inline constexpr double kKenyonBand = 0.05;

// Grid of `points` evenly spaced prefix lengths in [alpha n, (1 - alpha) n].
std::vector<std::size_t> kenyon_grid(std::size_t n, std::size_t points, double alpha = 0.1);

// Prefix-ratio deviations per grid point (1 <= t <= n). The band is
// descriptive: rows outside it are reported, not rejected.
KenyonReport kenyon_convergence(const Instance& instance, std::size_t samples, std::span<const std::size_t> grid,
                                std::uint64_t seed, std::size_t opt_cap = kDefaultOptCap,
                                double band = kKenyonBand, const ParallelOptions& parallel = {});

// Maximum number of disjoint pairs (q, l), q from `first`, l from `second`,
// with q + l <= 1.
std::size_t max_fitting_pairs(std::vector<Rational> first, std::vector<Rational> second);

struct GadgetCounts {
  double mean = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  double bound = 0;  // predicted lower bound, without the o() term
  std::vector<std::size_t> per_sample;
};

struct GadgetReport {
  std::size_t n = 0;
  std::size_t first = 0;  // positions first..last (1-based, inclusive)
  std::size_t last = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  std::size_t non_tiny = 0;  // |I~|
  std::size_t small = 0;
  double f_small = 0;
  GadgetCounts s_triplets;  // bound ((n2 - n1) / 3n) f_S^3 |I~|

  // Fitting ML triplets over L/M items only.
  std::size_t ml_pairs = 0;     // x = d'
  std::size_t ml_unpaired = 0;  // y
  std::size_t opt_lm = 0;       // Opt(I')
  double u = 0;                 // d' / Opt(I')
  GadgetCounts ml_triplets;     // bound (1/48) ((n2 - n1)/n) (1/(2 + y/x))^5 x
  double ml_claim_bound = 0;    // u^5/1536 ((n2 - n1)/n) d'

  // Fitting ML/SL triplets over L/M/S items.
  std::size_t msl_pairs = 0;
  std::size_t msl_unpaired = 0;
  GadgetCounts msl_triplets;
};

// Counts gadgets in positions (floor(lo n), floor(hi n)] over `samples`
// uniform permutations. Requires 0 <= lo <= hi <= 1.
GadgetReport gadget_rate_experiment(const Instance& instance, double lo, double hi, std::size_t samples,
                                    std::uint64_t seed, const ParallelOptions& parallel = {});

// 2 exp(-2 lambda^2 / m): tail bound for the sum of m draws without
// replacement from a population of [0,1] values deviating by lambda.
double hoeffding_band(std::size_t population_size, std::size_t sample_size, double deviation);

}  // namespace bpro
