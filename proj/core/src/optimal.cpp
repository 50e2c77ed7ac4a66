#include "bpro/optimal.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "bpro/error.hpp"
#include "bpro/packers.hpp"
#include "bpro/simplex.hpp"

namespace bpro {

namespace {

constexpr std::size_t kSearchNodeBudget = 200'000'000;
constexpr std::size_t kBracketMaxDistinct = 12;
constexpr std::size_t kBracketMaxConfigurations = 4000;

// Depth-first branch-and-bound over items sorted by decreasing size. `Value`
// is either a scaled integer or an exact rational; capacity is `cap_value`.
template <typename Value>
class BinSearch {
 public:
  BinSearch(std::vector<Value> sizes, Value capacity, std::size_t incumbent)
      : sizes_(std::move(sizes)), capacity_(std::move(capacity)), best_(incumbent) {
    suffix_volume_.assign(sizes_.size() + 1, Value{0});
    for (std::size_t i = sizes_.size(); i-- > 0;) suffix_volume_[i] = suffix_volume_[i + 1] + sizes_[i];
    assignment_.assign(sizes_.size(), 0);
  }

  // Returns true when a packing with fewer than the incumbent's bins exists;
  // the best assignment is then available from assignment().
  bool run(std::size_t lower_bound) {
    lower_bound_ = lower_bound;
    std::vector<Value> loads;
    dfs(0, loads);
    return improved_;
  }

  [[nodiscard]] std::size_t best() const { return best_; }
  [[nodiscard]] const std::vector<std::size_t>& assignment() const { return best_assignment_; }

 private:
  void dfs(std::size_t i, std::vector<Value>& loads) {
    if (best_ <= lower_bound_) return;
    if (++nodes_ > kSearchNodeBudget) throw CapExceeded("opt_exact search budget exhausted", kSearchNodeBudget);
    if (i == sizes_.size()) {
      best_ = loads.size();
      best_assignment_ = assignment_;
      improved_ = true;
      return;
    }
    // Additional bins needed: ceil((remaining volume - free space) / capacity).
    Value free{0};
    for (const auto& l : loads) free += capacity_ - l;
    std::size_t need = loads.size();
    if (suffix_volume_[i] > free) need += ceil_div(suffix_volume_[i] - free);
    if (need >= best_) return;

    const Value& s = sizes_[i];
    const std::size_t start = (i > 0 && sizes_[i] == sizes_[i - 1]) ? assignment_[i - 1] : 0;
    // An item that exactly fills a bin can go there without loss of optimality.
    for (std::size_t b = start; b < loads.size(); ++b) {
      if (loads[b] + s == capacity_) {
        place(i, b, loads);
        return;
      }
    }
    std::vector<Value> tried;
    for (std::size_t b = start; b < loads.size(); ++b) {
      if (loads[b] + s > capacity_) continue;
      if (std::find(tried.begin(), tried.end(), loads[b]) != tried.end()) continue;
      tried.push_back(loads[b]);
      place(i, b, loads);
      if (best_ <= lower_bound_) return;
    }
    if (loads.size() + 1 < best_) {
      loads.push_back(Value{0});
      place(i, loads.size() - 1, loads);
      loads.pop_back();
    }
  }

  void place(std::size_t i, std::size_t b, std::vector<Value>& loads) {
    loads[b] += sizes_[i];
    assignment_[i] = b;
    dfs(i + 1, loads);
    loads[b] -= sizes_[i];
  }

  std::size_t ceil_div(const Value& v) const {
    if constexpr (std::is_same_v<Value, Rational>) {
      return static_cast<std::size_t>(to_int64(ceil_of(v / capacity_)));
    } else {
      return static_cast<std::size_t>((v + capacity_ - 1) / capacity_);
    }
  }

  std::vector<Value> sizes_;
  Value capacity_;
  std::size_t best_;
  std::size_t lower_bound_ = 0;
  std::vector<Value> suffix_volume_;
  std::vector<std::size_t> assignment_;
  std::vector<std::size_t> best_assignment_;
  std::size_t nodes_ = 0;
  bool improved_ = false;
};

std::vector<ExactSize> sorted_decreasing(std::span<const ExactSize> items) {
  std::vector<ExactSize> v(items.begin(), items.end());
  std::stable_sort(v.begin(), v.end(), [](const ExactSize& a, const ExactSize& b) { return a > b; });
  return v;
}

Packing packing_from_trace(const PackingTrace& trace) {
  Packing p;
  p.reserve(trace.bins.size());
  for (const auto& bin : trace.bins) {
    BinContents contents;
    for (const auto& item : bin.contents) contents.push_back(item.size);
    p.push_back(std::move(contents));
  }
  return p;
}

void check_support(std::span<const ExactSize> support) {
  if (support.empty()) throw DomainError("configuration support is empty");
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      if (support[i] == support[j]) throw DomainError("configuration support has repeated sizes");
    }
  }
}

}  // namespace

OptResult opt_exact(std::span<const ExactSize> items, std::size_t cap) {
  if (items.size() > cap) {
    throw CapExceeded("opt_exact: " + std::to_string(items.size()) + " items exceed the cap of " +
                          std::to_string(cap),
                      cap);
  }
  OptResult result;
  if (items.empty()) return result;

  const auto sorted = sorted_decreasing(items);
  Packing incumbent = first_fit_decreasing(items);
  const std::size_t lower = opt_lower_bound(items);
  if (incumbent.size() == lower) {
    result.bins = incumbent.size();
    result.packing = std::move(incumbent);
    return result;
  }

  Integer scale = 1;
  for (const auto& s : sorted) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), s.value().get_den_mpz_t());

  std::vector<std::size_t> assignment;
  std::size_t best = incumbent.size();
  if (scale <= Integer{1L << 40}) {
    std::vector<std::int64_t> scaled;
    for (const auto& s : sorted) scaled.push_back(to_int64(Integer{s.value() * scale}));
    BinSearch<std::int64_t> search(std::move(scaled), to_int64(scale), incumbent.size());
    if (search.run(lower)) {
      assignment = search.assignment();
      best = search.best();
    }
  } else {
    std::vector<Rational> exact;
    for (const auto& s : sorted) exact.push_back(s.value());
    BinSearch<Rational> search(std::move(exact), Rational{1}, incumbent.size());
    if (search.run(lower)) {
      assignment = search.assignment();
      best = search.best();
    }
  }

  result.bins = best;
  if (assignment.empty()) {
    result.packing = std::move(incumbent);
  } else {
    result.packing.assign(best, {});
    for (std::size_t i = 0; i < sorted.size(); ++i) result.packing[assignment[i]].push_back(sorted[i]);
  }
  return result;
}

std::size_t opt_lower_bound(std::span<const ExactSize> items) {
  const Rational half{1, 2};
  std::size_t large = 0;
  for (const auto& s : items) large += s.value() > half ? 1 : 0;
  const auto by_volume = static_cast<std::size_t>(to_int64(ceil_of(volume(items))));
  return std::max(by_volume, large);
}

Packing first_fit_decreasing(std::span<const ExactSize> items) {
  const auto sorted = sorted_decreasing(items);
  return packing_from_trace(first_fit(sorted));
}

Packing opt_large_medium(std::span<const ExactSize> items) {
  std::vector<ExactSize> large;
  std::vector<ExactSize> medium;
  for (const auto& s : items) {
    const Category c = classify(s);
    if (c == Category::Large) {
      large.push_back(s);
    } else if (c == Category::Medium) {
      medium.push_back(s);
    } else {
      throw DomainError("opt_large_medium accepts only Large and Medium items");
    }
  }
  std::sort(large.begin(), large.end());
  std::sort(medium.begin(), medium.end(), std::greater<>{});
  // Largest medium first, against the smallest unmatched large item.
  Packing packing;
  std::vector<ExactSize> lone_medium;
  std::size_t next_large = 0;
  for (const auto& m : medium) {
    if (next_large < large.size() && large[next_large].value() + m.value() <= 1) {
      packing.push_back({large[next_large++], m});
    } else {
      lone_medium.push_back(m);
    }
  }
  for (std::size_t i = next_large; i < large.size(); ++i) packing.push_back({large[i]});
  for (std::size_t i = 0; i < lone_medium.size(); i += 2) {
    if (i + 1 < lone_medium.size()) {
      packing.push_back({lone_medium[i], lone_medium[i + 1]});
    } else {
      packing.push_back({lone_medium[i]});
    }
  }
  return packing;
}

Rational configuration_load(const Configuration& c, std::span<const ExactSize> support) {
  Rational load = 0;
  for (std::size_t i = 0; i < c.counts.size(); ++i) {
    load += support[i].value() * static_cast<unsigned long>(c.counts[i]);
  }
  return load;
}

std::vector<Configuration> enumerate_configurations(std::span<const ExactSize> support, std::size_t cap) {
  check_support(support);
  const Rational& min_size = std::min_element(support.begin(), support.end())->value();
  std::vector<Configuration> out;
  Configuration current{std::vector<std::size_t>(support.size(), 0)};

  std::function<void(std::size_t, const Rational&)> recurse = [&](std::size_t i, const Rational& load) {
    if (i == support.size()) {
      // Maximal iff even the smallest size no longer fits.
      if (sgn(load) > 0 && load + min_size > 1) {
        if (out.size() >= cap) {
          throw CapExceeded("more than " + std::to_string(cap) + " maximal configurations", cap);
        }
        out.push_back(current);
      }
      return;
    }
    const Rational& s = support[i].value();
    const auto max_count = static_cast<std::size_t>(to_int64(floor_of((1 - load) / s)));
    for (std::size_t k = max_count + 1; k-- > 0;) {
      current.counts[i] = k;
      recurse(i + 1, load + s * static_cast<unsigned long>(k));
    }
    current.counts[i] = 0;
  };
  recurse(0, Rational{0});
  return out;
}

LpSolution covering_lp(std::span<const ExactSize> support, std::span<const Rational> demand, std::size_t cap) {
  if (demand.size() != support.size()) throw DomainError("covering_lp: demand length differs from support");
  const std::size_t k = support.size();
  LpSolution sol;
  sol.support.assign(support.begin(), support.end());
  auto configs = enumerate_configurations(support, cap);
  sol.configurations_considered = configs.size();

  // Single-type bins start a feasible diagonal basis; they join the column
  // set when they are not maximal themselves.
  std::vector<std::size_t> start(k);
  for (std::size_t i = 0; i < k; ++i) {
    Configuration pure{std::vector<std::size_t>(k, 0)};
    pure.counts[i] = static_cast<std::size_t>(to_int64(floor_of(1 / support[i].value())));
    auto it = std::find(configs.begin(), configs.end(), pure);
    if (it == configs.end()) {
      configs.push_back(std::move(pure));
      it = configs.end() - 1;
    }
    start[i] = static_cast<std::size_t>(it - configs.begin());
  }

  std::vector<std::vector<Rational>> columns;
  columns.reserve(configs.size());
  for (const auto& c : configs) {
    std::vector<Rational> col;
    col.reserve(k);
    for (std::size_t n : c.counts) col.emplace_back(static_cast<unsigned long>(n));
    columns.push_back(std::move(col));
  }
  const CoveringResult lp =
      minimize_covering(columns, std::vector<Rational>(demand.begin(), demand.end()), start);

  Rational total = 0;
  std::vector<Rational> covered(k, 0);
  for (std::size_t j = 0; j < configs.size(); ++j) {
    const Rational& x = lp.primal[j];
    if (sgn(x) < 0) throw InvariantError("covering_lp: negative configuration rate");
    if (sgn(x) == 0) continue;
    total += x;
    for (std::size_t i = 0; i < k; ++i) covered[i] += x * columns[j][i];
    sol.rates.emplace_back(configs[j], x);
  }
  Rational dual_value = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (covered[i] < demand[i]) throw InvariantError("covering_lp: coverage fails for an item type");
    if (sgn(lp.dual[i]) < 0) throw InvariantError("covering_lp: negative dual price");
    dual_value += lp.dual[i] * demand[i];
  }
  for (const auto& col : columns) {
    Rational price = 0;
    for (std::size_t i = 0; i < k; ++i) price += lp.dual[i] * col[i];
    if (price > 1) throw InvariantError("covering_lp: dual prices are infeasible");
  }
  if (total != dual_value) throw InvariantError("covering_lp: primal and dual objectives differ");
  sol.objective = total;
  return sol;
}

LpSolution configuration_lp(const DiscreteDistribution& dist, std::size_t cap) {
  return covering_lp(dist.sizes(), dist.probs(), cap);
}

Rational verify_recipe(const DiscreteDistribution& dist, const Recipe& recipe) {
  std::vector<Rational> covered(dist.size(), 0);
  Rational total = 0;
  for (std::size_t b = 0; b < recipe.size(); ++b) {
    const auto& bin = recipe[b];
    if (sgn(bin.rate) < 0) throw DomainError("recipe bin " + std::to_string(b) + " has a negative rate");
    Rational load = 0;
    for (const auto& [size, count] : bin.counts) {
      const std::size_t idx = dist.index_of(size);
      if (idx == DiscreteDistribution::npos) {
        throw DomainError("recipe bin " + std::to_string(b) + " uses size " + to_fraction_string(size.value()) +
                          " outside the distribution support");
      }
      load += size.value() * static_cast<unsigned long>(count);
      covered[idx] += bin.rate * static_cast<unsigned long>(count);
    }
    if (load > 1) {
      throw DomainError("recipe bin " + std::to_string(b) + " is infeasible: load " + to_fraction_string(load));
    }
    total += bin.rate;
  }
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (covered[i] < dist.probs()[i]) {
      throw DomainError("recipe does not cover item type " + to_fraction_string(dist.sizes()[i].value()) +
                        ": " + to_fraction_string(covered[i]) + " < " + to_fraction_string(dist.probs()[i]));
    }
  }
  return total;
}

OptBracket opt_bracket(std::span<const ExactSize> items, std::size_t cap) {
  OptBracket b;
  if (items.empty()) {
    b.exact = true;
    return b;
  }
  if (items.size() <= cap) {
    b.lower = b.upper = opt_exact(items, cap).bins;
    b.exact = true;
    return b;
  }
  b.lower = opt_lower_bound(items);
  b.upper = first_fit_decreasing(items).size();

  std::vector<ExactSize> support;
  std::vector<Rational> demand;
  {
    auto sorted = sorted_decreasing(items);
    for (const auto& s : sorted) {
      if (support.empty() || !(support.back() == s)) {
        support.push_back(s);
        demand.emplace_back(0);
      }
      demand.back() += 1;
    }
  }
  if (support.size() <= kBracketMaxDistinct) {
    try {
      const LpSolution lp = covering_lp(support, demand, kBracketMaxConfigurations);
      b.lower = std::max(b.lower, static_cast<std::size_t>(to_int64(ceil_of(lp.objective))));
      // Rounding every rate up still covers every item.
      std::size_t rounded = 0;
      for (const auto& [config, rate] : lp.rates) rounded += static_cast<std::size_t>(to_int64(ceil_of(rate)));
      b.upper = std::min(b.upper, rounded);
    } catch (const CapExceeded&) {
      // too many configurations; keep the volume/FFD bracket
    }
  }
  if (b.lower == b.upper) b.exact = true;
  return b;
}

std::vector<PrefixOpt> opt_prefix_curve(const Instance& instance, const Permutation& sigma,
                                        std::span<const std::size_t> grid, std::size_t cap) {
  const Sequence seq = instance.permuted(sigma);
  std::vector<PrefixOpt> out;
  out.reserve(grid.size());
  for (std::size_t t : grid) {
    if (t > seq.size()) throw DomainError("prefix length " + std::to_string(t) + " exceeds instance length");
    out.push_back(PrefixOpt{t, opt_bracket(std::span<const ExactSize>(seq).first(t), cap)});
  }
  return out;
}

}  // namespace bpro
