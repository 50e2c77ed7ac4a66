#include "bpro/random_order.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "bpro/error.hpp"
#include "bpro/packers.hpp"
#include "bpro/trace_analysis.hpp"
#include "parallel.hpp"

namespace bpro {

namespace {

Sequence permuted_sample(const Instance& instance, std::uint64_t seed, std::size_t index) {
  CounterRng rng(derive_seed(seed, index));
  return instance.permuted(Permutation(random_permutation(instance.size(), rng)));
}

std::size_t best_fit_bins(std::span<const ExactSize> seq) {
  BestFitCounter bf;
  for (const auto& s : seq) bf.add(s.value());
  return bf.bins();
}

double sample_sd(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0;
  double acc = 0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

DiscreteSampler::DiscreteSampler(const DiscreteDistribution& dist) {
  Integer lcm{1};
  for (const auto& p : dist.probs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
  if (mpz_sizeinbase(lcm.get_mpz_t(), 2) > 63) {
    throw DomainError("probability denominators are too large for exact sampling");
  }
  denominator_ = static_cast<std::uint64_t>(to_int64(lcm));
  Integer acc{0};
  for (const auto& p : dist.probs()) {
    acc += Integer{p.get_num() * (lcm / p.get_den())};
    cumulative_.push_back(static_cast<std::uint64_t>(to_int64(acc)));
  }
}

std::size_t DiscreteSampler::draw(CounterRng& rng) const {
  const std::uint64_t u = rng.below(denominator_);
  return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
}

Instance sample_iid_instance(const DiscreteDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample_iid_instance needs n >= 1");
  const DiscreteSampler sampler(dist);
  CounterRng rng(seed);
  Instance out;
  out.items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.items.push_back(dist.sizes()[sampler.draw(rng)]);
  return out;
}

SimulatedRate simulate_iid_best_fit(const DiscreteDistribution& dist, std::size_t items, std::uint64_t seed,
                                    std::size_t batches) {
  if (batches < 2 || items < batches) throw DomainError("simulation needs at least two non-empty batches");
  const DiscreteSampler sampler(dist);
  CounterRng rng(seed);
  BestFitCounter bf;
  const std::size_t batch_len = items / batches;
  std::vector<double> batch_rates;
  batch_rates.reserve(batches);
  std::size_t opened_in_batch = 0;
  std::size_t batch_start = 0;
  for (std::size_t i = 0; i < items; ++i) {
    if (bf.add(dist.sizes()[sampler.draw(rng)].value())) ++opened_in_batch;
    const bool last_batch = batch_rates.size() + 1 == batches;
    if ((!last_batch && i + 1 - batch_start == batch_len) || i + 1 == items) {
      batch_rates.push_back(static_cast<double>(opened_in_batch) / static_cast<double>(i + 1 - batch_start));
      opened_in_batch = 0;
      batch_start = i + 1;
    }
  }
  SimulatedRate out;
  out.items = items;
  out.bins = bf.bins();
  out.batches = batch_rates.size();
  out.rate = static_cast<double>(out.bins) / static_cast<double>(items);
  const double mean = std::accumulate(batch_rates.begin(), batch_rates.end(), 0.0) / static_cast<double>(out.batches);
  out.std_error = sample_sd(batch_rates, mean) / std::sqrt(static_cast<double>(out.batches));
  return out;
}

std::string_view opt_reference_name(OptReferenceKind k) noexcept {
  switch (k) {
    case OptReferenceKind::Exact:
      return "exact";
    case OptReferenceKind::Recipe:
      return "recipe";
    case OptReferenceKind::Lp:
      return "lp";
    case OptReferenceKind::VolumeBound:
      return "volume-bound";
  }
  return "?";
}

OptReference choose_opt_reference(const Instance& instance, const RrOptions& options) {
  if (instance.empty()) throw DomainError("no Opt reference for an empty instance");
  const auto n = static_cast<unsigned long>(instance.size());
  if (instance.size() <= options.opt_cap) {
    try {
      return {OptReferenceKind::Exact, Rational{static_cast<unsigned long>(opt_exact(instance.items, options.opt_cap).bins)}};
    } catch (const CapExceeded&) {
      // Search budget exhausted; fall through to the next reference.
    }
  }
  if (options.recipe_rate) return {OptReferenceKind::Recipe, *options.recipe_rate * n};
  if (options.lp_rate) return {OptReferenceKind::Lp, *options.lp_rate * n};
  return {OptReferenceKind::VolumeBound, Rational{static_cast<unsigned long>(opt_lower_bound(instance.items))}};
}

RatioEstimate estimate_rr(const Instance& instance, std::size_t samples, std::uint64_t seed,
                          const RrOptions& options) {
  if (samples == 0) throw DomainError("estimate_rr needs at least one sample");
  RatioEstimate out;
  out.opt_reference = choose_opt_reference(instance, options);
  out.samples = samples;
  out.seed = seed;
  out.bins.assign(samples, 0);
  detail::parallel_for(samples, options.parallel.threads, [&](std::size_t i) {
    out.bins[i] = best_fit_bins(permuted_sample(instance, seed, i));
  });

  std::vector<double> xs(out.bins.begin(), out.bins.end());
  out.mean_bf = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(samples);
  out.std_error = sample_sd(xs, out.mean_bf) / std::sqrt(static_cast<double>(samples));
  const double ref = to_double(out.opt_reference.value);
  out.ratio = out.mean_bf / ref;
  out.ratio_std_error = out.std_error / ref;
  return out;
}

std::vector<std::size_t> kenyon_grid(std::size_t n, std::size_t points, double alpha) {
  if (n == 0 || points == 0) throw DomainError("kenyon_grid needs n >= 1 and at least one point");
  if (!(alpha >= 0 && alpha <= 0.5)) throw DomainError("kenyon_grid needs 0 <= alpha <= 1/2");
  const double dn = static_cast<double>(n);
  std::vector<std::size_t> grid;
  for (std::size_t j = 0; j < points; ++j) {
    const double frac = points == 1 ? 0.5 : alpha + (1 - 2 * alpha) * static_cast<double>(j) / static_cast<double>(points - 1);
    const auto t = static_cast<std::size_t>(std::llround(frac * dn));
    grid.push_back(std::clamp<std::size_t>(t, 1, n));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

KenyonReport kenyon_convergence(const Instance& instance, std::size_t samples, std::span<const std::size_t> grid,
                                std::uint64_t seed, std::size_t opt_cap, double band,
                                const ParallelOptions& parallel) {
  const std::size_t n = instance.size();
  if (n == 0) throw DomainError("kenyon_convergence needs a nonempty instance");
  if (samples == 0) throw DomainError("kenyon_convergence needs at least one sample");
  for (std::size_t t : grid) {
    if (t < 1 || t > n) throw DomainError("grid point " + std::to_string(t) + " is outside [1, n]");
  }

  KenyonReport out;
  out.opt_total = opt_bracket(instance.items, opt_cap);
  out.samples = samples;
  out.seed = seed;
  out.band = band;

  struct Cell {
    double mid = 1;
    double lo = 1;
    double hi = 1;
    bool exact = true;
  };
  const std::size_t g = grid.size();
  std::vector<Cell> cells(samples * g);
  const double total_lo = static_cast<double>(out.opt_total.lower);
  const double total_hi = static_cast<double>(out.opt_total.upper);
  const double total_mid = 0.5 * (total_lo + total_hi);
  detail::parallel_for(samples, parallel.threads, [&](std::size_t i) {
    const Sequence seq = permuted_sample(instance, seed, i);
    for (std::size_t j = 0; j < g; ++j) {
      const std::size_t t = grid[j];
      // The full prefix is I itself, whatever its bracket.
      if (t == n) continue;
      const OptBracket p = opt_bracket(std::span<const ExactSize>(seq).first(t), opt_cap);
      const double scale = static_cast<double>(n) / static_cast<double>(t);
      Cell& c = cells[i * g + j];
      c.lo = static_cast<double>(p.lower) * scale / total_hi;
      c.hi = static_cast<double>(p.upper) * scale / total_lo;
      c.mid = 0.5 * static_cast<double>(p.lower + p.upper) * scale / total_mid;
      c.exact = p.exact && out.opt_total.exact;
    }
  });

  for (std::size_t j = 0; j < g; ++j) {
    KenyonRow row;
    row.t = grid[j];
    row.min_ratio = cells[j].mid;
    row.max_ratio = cells[j].mid;
    double sum = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      const Cell& c = cells[i * g + j];
      row.min_ratio = std::min(row.min_ratio, c.mid);
      row.max_ratio = std::max(row.max_ratio, c.mid);
      sum += c.mid;
      row.max_deviation = std::max(row.max_deviation, std::abs(c.mid - 1));
      row.max_deviation_bound = std::max({row.max_deviation_bound, std::abs(c.lo - 1), std::abs(c.hi - 1)});
      if (c.exact) ++row.exact_prefixes;
    }
    row.mean_ratio = sum / static_cast<double>(samples);
    row.within_band = row.max_deviation_bound <= band;
    out.rows.push_back(row);
  }
  return out;
}

std::size_t max_fitting_pairs(std::vector<Rational> first, std::vector<Rational> second) {
  // The largest remaining `first` item takes the smallest `second` item if
  // anything fits it at all; otherwise it is unmatchable.
  std::sort(first.begin(), first.end(), std::greater<>());
  std::sort(second.begin(), second.end());
  std::size_t pairs = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < first.size() && j < second.size(); ++i) {
    if (first[i] + second[j] <= 1) {
      ++pairs;
      ++j;
    }
  }
  return pairs;
}

namespace {

GadgetCounts summarize(std::vector<std::size_t> per_sample, double bound) {
  GadgetCounts out;
  out.bound = bound;
  if (!per_sample.empty()) {
    out.min = *std::min_element(per_sample.begin(), per_sample.end());
    out.max = *std::max_element(per_sample.begin(), per_sample.end());
    double sum = 0;
    for (std::size_t v : per_sample) sum += static_cast<double>(v);
    out.mean = sum / static_cast<double>(per_sample.size());
  }
  out.per_sample = std::move(per_sample);
  return out;
}

// (1/48) (len/n) (1/(2 + y/x))^5 x, the general fitting-triplet bound.
double triplet_bound(std::size_t x, std::size_t y, double fraction) {
  if (x == 0) return 0;
  const double dx = static_cast<double>(x);
  return fraction / 48.0 * std::pow(1.0 / (2.0 + static_cast<double>(y) / dx), 5) * dx;
}

}  // namespace

GadgetReport gadget_rate_experiment(const Instance& instance, double lo, double hi, std::size_t samples,
                                    std::uint64_t seed, const ParallelOptions& parallel) {
  if (!(lo >= 0 && lo <= hi && hi <= 1)) throw DomainError("gadget range needs 0 <= lo <= hi <= 1");
  if (samples == 0) throw DomainError("gadget_rate_experiment needs at least one sample");
  GadgetReport out;
  const std::size_t n = instance.size();
  out.n = n;
  out.first = static_cast<std::size_t>(std::floor(lo * static_cast<double>(n))) + 1;
  out.last = static_cast<std::size_t>(std::floor(hi * static_cast<double>(n)));
  out.samples = samples;
  out.seed = seed;
  const bool empty_range = out.last < out.first;
  const double fraction = n == 0 || empty_range
                              ? 0.0
                              : static_cast<double>(out.last - out.first + 1) / static_cast<double>(n);

  std::vector<Rational> large, medium, medium_small;
  for (const auto& s : instance.items) {
    switch (classify(s)) {
      case Category::Large:
        large.push_back(s.value());
        break;
      case Category::Medium:
        medium.push_back(s.value());
        medium_small.push_back(s.value());
        break;
      case Category::Small:
        medium_small.push_back(s.value());
        ++out.small;
        break;
      case Category::Tiny:
        continue;
    }
    ++out.non_tiny;
  }
  out.f_small = out.non_tiny == 0 ? 0.0 : static_cast<double>(out.small) / static_cast<double>(out.non_tiny);

  out.ml_pairs = max_fitting_pairs(medium, large);
  out.ml_unpaired = large.size() + medium.size() - 2 * out.ml_pairs;
  {
    Sequence lm;
    for (const auto& s : instance.items) {
      const Category c = classify(s);
      if (c == Category::Large || c == Category::Medium) lm.push_back(s);
    }
    out.opt_lm = opt_large_medium(lm).size();
  }
  out.u = out.opt_lm == 0 ? 0.0 : static_cast<double>(out.ml_pairs) / static_cast<double>(out.opt_lm);
  out.ml_claim_bound = std::pow(out.u, 5) / 1536.0 * fraction * static_cast<double>(out.ml_pairs);
  out.msl_pairs = max_fitting_pairs(medium_small, large);
  out.msl_unpaired = large.size() + medium_small.size() - 2 * out.msl_pairs;

  std::vector<std::size_t> s_counts(samples, 0), ml_counts(samples, 0), msl_counts(samples, 0);
  if (!empty_range) {
    detail::parallel_for(samples, parallel.threads, [&](std::size_t i) {
      const Sequence seq = permuted_sample(instance, seed, i);
      s_counts[i] = count_s_triplets(seq, out.first, out.last);
      ml_counts[i] = count_fitting_ml_triplets(seq, out.first, out.last, false);
      msl_counts[i] = count_fitting_ml_triplets(seq, out.first, out.last, true);
    });
  }
  out.s_triplets = summarize(std::move(s_counts),
                             fraction / 3.0 * std::pow(out.f_small, 3) * static_cast<double>(out.non_tiny));
  out.ml_triplets = summarize(std::move(ml_counts), triplet_bound(out.ml_pairs, out.ml_unpaired, fraction));
  out.msl_triplets = summarize(std::move(msl_counts), triplet_bound(out.msl_pairs, out.msl_unpaired, fraction));
  return out;
}

double hoeffding_band(std::size_t population_size, std::size_t sample_size, double deviation) {
  if (population_size == 0 || sample_size == 0 || sample_size > population_size) {
    throw DomainError("hoeffding_band needs 1 <= sample size <= population size");
  }
  if (!(deviation >= 0)) throw DomainError("hoeffding_band needs a non-negative deviation");
  return 2.0 * std::exp(-2.0 * deviation * deviation / static_cast<double>(sample_size));
}

}  // namespace bpro
