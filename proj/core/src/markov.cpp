#include "bpro/markov.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "bpro/error.hpp"

namespace bpro {

void validate_chain(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  if (n == 0) throw InvariantError("chain has no states");
  if (!chain.states.empty() && chain.states.size() != n) {
    throw InvariantError("chain state list and transition table differ in length");
  }
  for (std::size_t s = 0; s < n; ++s) {
    Rational mass{0};
    for (const auto& t : chain.transitions[s]) {
      if (t.next >= n) throw InvariantError("state " + std::to_string(s) + " has an out-of-range successor");
      if (sgn(t.probability) < 0) throw InvariantError("state " + std::to_string(s) + " has a negative transition");
      mass += t.probability;
    }
    if (mass != 1) {
      throw InvariantError("outgoing mass of state " + std::to_string(s) + " is " + to_fraction_string(mass));
    }
  }
}

ChainSpec build_chain(const DiscreteDistribution& dist, std::size_t state_cap) {
  const auto& sizes = dist.sizes();
  const Rational open_limit = 1 - dist.min_size().value();

  ChainSpec chain;
  std::map<std::vector<Rational>, std::size_t> index;
  auto intern = [&](std::vector<Rational> loads) -> std::size_t {
    auto [it, inserted] = index.try_emplace(loads, chain.states.size());
    if (inserted) {
      if (chain.states.size() >= state_cap) {
        throw CapExceeded("Markov chain exceeds the state cap of " + std::to_string(state_cap) + " states",
                          state_cap);
      }
      chain.states.push_back(ChainState{std::move(loads)});
    }
    return it->second;
  };

  intern({});
  for (std::size_t s = 0; s < chain.states.size(); ++s) {
    std::vector<ChainTransition> out;
    out.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      std::vector<Rational> loads = chain.states[s].open_loads;
      const Rational& size = sizes[i].value();
      // Loads are sorted non-increasing, so the first fitting bin is the fullest.
      auto it = std::find_if(loads.begin(), loads.end(), [&](const Rational& l) { return l + size <= 1; });
      const bool opened = it == loads.end();
      if (opened) {
        loads.push_back(size);
      } else {
        *it += size;
      }
      std::erase_if(loads, [&](const Rational& l) { return l > open_limit; });
      std::sort(loads.begin(), loads.end(), std::greater<>());
      out.push_back(ChainTransition{intern(std::move(loads)), dist.probs()[i], opened});
    }
    chain.transitions.push_back(std::move(out));
  }
  return chain;
}

std::string_view solve_mode_name(SolveMode m) noexcept {
  switch (m) {
    case SolveMode::Auto:
      return "auto";
    case SolveMode::Exact:
      return "exact";
    case SolveMode::Iterative:
      return "iterative";
  }
  return "?";
}

SolveMode parse_solve_mode(std::string_view name) {
  if (name == "auto") return SolveMode::Auto;
  if (name == "exact") return SolveMode::Exact;
  if (name == "iterative") return SolveMode::Iterative;
  throw DomainError("unknown solve mode '" + std::string(name) + "' (expected auto, exact or iterative)");
}

namespace {

using SparseRow = std::map<std::size_t, Rational>;

// Solves the stationary equations with state 0's balance equation replaced by
// the normalisation. Columns are eliminated in index order; the pivot row is
// the sparsest remaining row holding the column.
std::vector<Rational> solve_exact(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  std::vector<SparseRow> rows(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& t : chain.transitions[s]) {
      if (t.next != 0 && sgn(t.probability) != 0) rows[t.next][s] += t.probability;
    }
  }
  for (std::size_t j = 1; j < n; ++j) rows[j][j] -= 1;
  for (std::size_t s = 0; s < n; ++s) rows[0][s] = 1;
  std::vector<Rational> rhs(n, 0);
  rhs[0] = 1;

  std::vector<std::set<std::size_t>> holders(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (auto it = rows[r].begin(); it != rows[r].end();) {
      if (sgn(it->second) == 0) {
        it = rows[r].erase(it);
      } else {
        holders[it->first].insert(r);
        ++it;
      }
    }
  }

  std::vector<bool> used(n, false);
  std::vector<std::size_t> pivot_of(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t r : holders[c]) {
      if (used[r]) continue;
      if (pivot == n || rows[r].size() < rows[pivot].size()) pivot = r;
    }
    if (pivot == n) throw DomainError("stationary equations are singular (chain is reducible)");
    used[pivot] = true;
    pivot_of[c] = pivot;

    const Rational inv = 1 / rows[pivot].at(c);
    std::vector<std::size_t> targets;
    for (std::size_t r : holders[c]) {
      if (!used[r]) targets.push_back(r);
    }
    for (std::size_t r : targets) {
      const Rational factor = rows[r].at(c) * inv;
      for (const auto& [col, v] : rows[pivot]) {
        Rational& cell = rows[r][col];
        const bool was_zero = sgn(cell) == 0;
        cell -= factor * v;
        if (sgn(cell) == 0) {
          rows[r].erase(col);
          holders[col].erase(r);
        } else if (was_zero) {
          holders[col].insert(r);
        }
      }
      rhs[r] -= factor * rhs[pivot];
    }
  }

  std::vector<Rational> omega(n, 0);
  for (std::size_t c = n; c-- > 0;) {
    const SparseRow& row = rows[pivot_of[c]];
    Rational acc = rhs[pivot_of[c]];
    for (const auto& [col, v] : row) {
      if (col != c) acc -= v * omega[col];
    }
    omega[c] = acc / row.at(c);
  }
  return omega;
}

struct DoubleEdge {
  std::size_t from;
  std::size_t to;
  double p;
};

std::vector<DoubleEdge> double_edges(const ChainSpec& chain) {
  std::vector<DoubleEdge> edges;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    for (const auto& t : chain.transitions[s]) edges.push_back({s, t.next, to_double(t.probability)});
  }
  return edges;
}

double residual_of(const std::vector<DoubleEdge>& edges, const std::vector<double>& omega) {
  std::vector<double> next(omega.size(), 0.0);
  for (const auto& e : edges) next[e.to] += omega[e.from] * e.p;
  double r = 0;
  for (std::size_t i = 0; i < omega.size(); ++i) r = std::max(r, std::abs(next[i] - omega[i]));
  return r;
}

}  // namespace

StationaryVector stationary(const ChainSpec& chain, SolveMode mode) {
  validate_chain(chain);
  if (!verify_ergodicity(chain).irreducible) {
    throw DomainError("chain is reducible; the stationary distribution is not unique");
  }
  const std::size_t n = chain.size();
  if (mode == SolveMode::Auto) mode = n <= kExactSolveMaxStates ? SolveMode::Exact : SolveMode::Iterative;

  StationaryVector out;
  out.mode = mode;
  const auto edges = double_edges(chain);
  if (mode == SolveMode::Exact) {
    out.exact = solve_exact(chain);
    out.values.reserve(n);
    for (const auto& w : out.exact) {
      if (sgn(w) < 0) throw InvariantError("exact stationary vector has a negative entry");
      out.values.push_back(to_double(w));
    }
    out.residual = residual_of(edges, out.values);
    return out;
  }

  // Lazy chain (P + I) / 2 has the same stationary vector and is aperiodic.
  std::vector<double> omega(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (std::size_t it = 1; it <= kIterativeMaxIterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& e : edges) next[e.to] += omega[e.from] * e.p;
    double r = 0;
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(next[i] - omega[i]));
    if (r <= kIterativeResidual) {
      out.values = std::move(omega);
      out.residual = r;
      out.iterations = it;
      return out;
    }
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      omega[i] = 0.5 * (omega[i] + next[i]);
      total += omega[i];
    }
    for (auto& w : omega) w /= total;
  }
  throw CapExceeded("power iteration did not reach the residual target", kIterativeMaxIterations);
}

BfRate bf_rate(const ChainSpec& chain, const StationaryVector& omega) {
  if (omega.values.size() != chain.size()) throw DomainError("stationary vector does not match the chain");
  BfRate out;
  if (omega.is_exact()) {
    Rational rate{0};
    for (std::size_t s = 0; s < chain.size(); ++s) {
      for (const auto& t : chain.transitions[s]) {
        if (t.opened_new) rate += omega.exact[s] * t.probability;
      }
    }
    out.value = to_double(rate);
    out.exact = std::move(rate);
    return out;
  }
  for (std::size_t s = 0; s < chain.size(); ++s) {
    for (const auto& t : chain.transitions[s]) {
      if (t.opened_new) out.value += omega.values[s] * to_double(t.probability);
    }
  }
  return out;
}

ErgodicityReport verify_ergodicity(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  ErgodicityReport out;
  if (n == 0) return out;

  std::vector<std::vector<std::size_t>> forward(n), backward(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& t : chain.transitions[s]) {
      if (sgn(t.probability) == 0) continue;
      forward[s].push_back(t.next);
      backward[t.next].push_back(s);
    }
  }
  auto bfs = [n](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<std::size_t> level(n, n);
    std::deque<std::size_t> queue{0};
    level[0] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (level[v] == n) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return level;
  };
  const auto level = bfs(forward);
  const auto back_level = bfs(backward);
  out.reachable_from_start =
      static_cast<std::size_t>(std::count_if(level.begin(), level.end(), [n](std::size_t l) { return l < n; }));
  out.irreducible = out.reachable_from_start == n &&
                    std::all_of(back_level.begin(), back_level.end(), [n](std::size_t l) { return l < n; });

  // Every closed walk through 0 has length divisible by d iff d divides
  // level(u) + 1 - level(v) on every edge of the reachable component.
  std::size_t g = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (level[u] == n) continue;
    for (std::size_t v : forward[u]) {
      const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
      g = std::gcd(g, static_cast<std::size_t>(diff < 0 ? -diff : diff));
    }
  }
  out.period = g;
  return out;
}

IidRatio iid_ratio(const DiscreteDistribution& dist, OptMode opt_mode, const Recipe* recipe,
                   const IidOptions& options) {
  if (opt_mode == OptMode::Recipe && recipe == nullptr) throw DomainError("recipe mode needs a recipe");
  IidRatio out;
  out.opt_mode = opt_mode;
  if (opt_mode == OptMode::Lp) {
    out.lp = configuration_lp(dist, options.configuration_cap);
    out.opt_rate = out.lp->objective;
  } else {
    out.opt_rate = verify_recipe(dist, *recipe);
  }

  out.chain = build_chain(dist, options.state_cap);
  out.states = out.chain.size();
  out.ergodicity = verify_ergodicity(out.chain);
  out.omega = stationary(out.chain, options.solve);
  out.bf = bf_rate(out.chain, out.omega);
  if (out.bf.exact) {
    out.exact_ratio = *out.bf.exact / out.opt_rate;
    out.ratio = to_double(*out.exact_ratio);
  } else {
    out.ratio = out.bf.value / to_double(out.opt_rate);
  }
  return out;
}

}  // namespace bpro
