#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bpro/distribution.hpp"
#include "bpro/optimal.hpp"

namespace bpro {

inline constexpr std::size_t kDefaultStateCap = 200'000;
inline constexpr std::size_t kExactSolveMaxStates = 2'000;
inline constexpr double kIterativeResidual = 1e-13;
inline constexpr std::size_t kIterativeMaxIterations = 10'000'000;

// Loads of the open bins, in non-increasing order. A bin is open while it can
// still take the smallest support size.
struct ChainState {
  std::vector<Rational> open_loads;

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

struct ChainTransition {
  std::size_t next = 0;
  Rational probability;
  bool opened_new = false;
};

// Markov chain of Best-Fit open-bin configurations. transitions[s][i] is the
// move from state s on arrival of support item i; state 0 is "no open bins".
// Hand-built chains may leave `states` empty and use arbitrary transition lists.
struct ChainSpec {
  std::vector<ChainState> states;
  std::vector<std::vector<ChainTransition>> transitions;

  [[nodiscard]] std::size_t size() const noexcept { return transitions.size(); }
};

// Throws InvariantError unless every state's outgoing mass is exactly 1 and
// every successor index is valid.
void validate_chain(const ChainSpec& chain);

// Breadth-first closure of the Best-Fit open-bin dynamics from the empty
// state. Throws CapExceeded when more than `state_cap` states appear.
ChainSpec build_chain(const DiscreteDistribution& dist, std::size_t state_cap = kDefaultStateCap);

enum class SolveMode { Auto, Exact, Iterative };

std::string_view solve_mode_name(SolveMode m) noexcept;
SolveMode parse_solve_mode(std::string_view name);

struct StationaryVector {
  SolveMode mode = SolveMode::Exact;  // Exact or Iterative, never Auto
  std::vector<Rational> exact;        // filled in exact mode
  std::vector<double> values;         // always filled
  double residual = 0;                // max-norm of omega P - omega
  std::size_t iterations = 0;

  [[nodiscard]] bool is_exact() const noexcept { return mode == SolveMode::Exact; }
};

// Solves omega P = omega, sum omega = 1. Exact mode uses sparse rational
// Gaussian elimination; iterative mode runs lazy power iteration to a
// residual of 1e-13. Auto picks exact up to 2,000 states. Throws DomainError
// on a reducible chain and CapExceeded if iteration does not converge.
StationaryVector stationary(const ChainSpec& chain, SolveMode mode = SolveMode::Auto);

struct BfRate {
  double value = 0;
  std::optional<Rational> exact;
};

// Asymptotic bins opened per item: sum over opening transitions of
// omega_R * q_RS.
BfRate bf_rate(const ChainSpec& chain, const StationaryVector& omega);

struct ErgodicityReport {
  bool irreducible = false;
  std::size_t period = 0;  // gcd of cycle lengths through state 0
  std::size_t reachable_from_start = 0;

  [[nodiscard]] bool aperiodic() const noexcept { return period == 1; }
  [[nodiscard]] bool ergodic() const noexcept { return irreducible && period == 1; }
};

ErgodicityReport verify_ergodicity(const ChainSpec& chain);

enum class OptMode { Lp, Recipe };

struct IidOptions {
  std::size_t state_cap = kDefaultStateCap;
  SolveMode solve = SolveMode::Auto;
  std::size_t configuration_cap = kDefaultConfigurationCap;
};

struct IidRatio {
  ChainSpec chain;
  StationaryVector omega;
  std::size_t states = 0;
  ErgodicityReport ergodicity;
  BfRate bf;
  OptMode opt_mode = OptMode::Lp;
  Rational opt_rate;
  double ratio = 0;
  std::optional<Rational> exact_ratio;
  std::optional<LpSolution> lp;
};

// bf_rate / opt rate, the asymptotic i.i.d. performance ratio of Best-Fit.
// In Recipe mode `recipe` must be provided (DomainError otherwise).
IidRatio iid_ratio(const DiscreteDistribution& dist, OptMode opt_mode, const Recipe* recipe = nullptr,
                   const IidOptions& options = {});

}  // namespace bpro
