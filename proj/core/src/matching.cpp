#include "bpro/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "bpro/error.hpp"
#include "bpro/rng.hpp"
#include "parallel.hpp"

namespace bpro {

namespace {

using Waiting = std::pair<Rational, std::size_t>;  // (y, minus index)

// y ascending, then index descending: the last element with a given y has the
// smallest index.
struct WaitingOrder {
  using is_transparent = void;
  bool operator()(const Waiting& a, const Waiting& b) const {
    const int c = cmp(a.first, b.first);
    return c < 0 || (c == 0 && a.second > b.second);
  }
  bool operator()(const Waiting& a, const Rational& y) const { return a.first <= y; }
  bool operator()(const Rational& y, const Waiting& b) const { return y < b.first; }
};

}  // namespace

MatchingResult max_upright_matching(std::span<const Point> plus, std::span<const Point> minus) {
  struct Event {
    const Rational* x;
    bool is_plus;
    std::size_t index;
  };
  std::vector<Event> events;
  events.reserve(plus.size() + minus.size());
  for (std::size_t i = 0; i < minus.size(); ++i) events.push_back({&minus[i].x, false, i});
  for (std::size_t i = 0; i < plus.size(); ++i) events.push_back({&plus[i].x, true, i});
  // Stable on ties: minus points were inserted first, each side in input order.
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    const int c = cmp(*a.x, *b.x);
    return c < 0 || (c == 0 && !a.is_plus && b.is_plus);
  });

  MatchingResult out;
  std::set<Waiting, WaitingOrder> waiting;
  for (const auto& e : events) {
    if (!e.is_plus) {
      waiting.emplace(minus[e.index].y, e.index);
      continue;
    }
    // upper_bound with the heterogeneous order: first waiting y > y+.
    auto it = waiting.upper_bound(plus[e.index].y);
    if (it == waiting.begin()) {
      ++out.unmatched_plus;
      continue;
    }
    --it;
    out.pairs.emplace_back(e.index, it->second);
    waiting.erase(it);
  }
  return out;
}

std::size_t brute_force_upright_matching(std::span<const Point> plus, std::span<const Point> minus) {
  std::vector<std::vector<std::size_t>> adj(plus.size());
  for (std::size_t i = 0; i < plus.size(); ++i) {
    for (std::size_t j = 0; j < minus.size(); ++j) {
      if (minus[j].x <= plus[i].x && minus[j].y <= plus[i].y) adj[i].push_back(j);
    }
  }
  std::vector<std::size_t> owner(minus.size(), plus.size());
  std::vector<bool> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = true;
      if (owner[j] == plus.size() || augment(owner[j])) {
        owner[j] = i;
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (std::size_t i = 0; i < plus.size(); ++i) {
    seen.assign(minus.size(), false);
    if (augment(i)) ++matched;
  }
  return matched;
}

std::size_t interleaved_unmatched(std::size_t k, std::span<const std::size_t> arrival) {
  if (arrival.size() != 2 * k) throw DomainError("arrival permutation must have length 2k");
  std::vector<Point> plus(k), minus(k);
  for (std::size_t i = 0; i < k; ++i) {
    plus[i] = {Rational{static_cast<unsigned long>(arrival[i] + 1)}, Rational{static_cast<unsigned long>(2 * i + 2)}};
    minus[i] = {Rational{static_cast<unsigned long>(arrival[k + i] + 1)}, Rational{static_cast<unsigned long>(2 * i + 1)}};
  }
  return max_upright_matching(plus, minus).unmatched_plus;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(q >= 0 && q <= 1)) throw DomainError("quantile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

FischerStats fischer_experiment(std::size_t k, std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (k < 2) throw DomainError("fischer_experiment needs k >= 2");
  if (trials == 0) throw DomainError("fischer_experiment needs at least one trial");
  FischerStats out;
  out.k = k;
  out.trials = trials;
  out.seed = seed;
  out.unmatched.assign(trials, 0);
  detail::parallel_for(trials, threads, [&](std::size_t i) {
    CounterRng rng(derive_seed(seed, i));
    const auto arrival = random_permutation(2 * k, rng);
    out.unmatched[i] = interleaved_unmatched(k, arrival);
  });

  const double dk = static_cast<double>(k);
  out.scale = std::sqrt(dk) * std::pow(std::log(dk), 0.75);
  double sum = 0;
  for (std::size_t u : out.unmatched) {
    sum += static_cast<double>(u);
    out.max = std::max(out.max, u);
    out.normalized.push_back(static_cast<double>(u) / out.scale);
  }
  out.mean = sum / static_cast<double>(trials);
  std::vector<double> sorted = out.normalized;
  std::sort(sorted.begin(), sorted.end());
  out.q10 = quantile_sorted(sorted, 0.1);
  out.q50 = quantile_sorted(sorted, 0.5);
  out.q90 = quantile_sorted(sorted, 0.9);
  return out;
}

}  // namespace bpro
