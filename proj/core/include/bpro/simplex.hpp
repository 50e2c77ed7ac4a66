#pragma once

#include <cstddef>
#include <vector>

#include "bpro/rational.hpp"

namespace bpro {

// Optimum of  min sum_j x_j  s.t.  sum_j x_j columns[j] >= demand, x >= 0.
struct CoveringResult {
  Rational objective;
  std::vector<Rational> primal;  // x, one per column
  std::vector<Rational> dual;    // y >= 0 with y.column <= 1; y.demand == objective
  std::size_t pivots = 0;
};

// Exact revised simplex over k = demand.size() rows. `start` names k columns
// forming a diagonal basis (columns[start[i]] is a positive multiple of e_i),
// so the first basis is feasible. Bland's rule for entering and leaving
// variables. Throws DomainError on malformed input.
CoveringResult minimize_covering(const std::vector<std::vector<Rational>>& columns,
                                 const std::vector<Rational>& demand, const std::vector<std::size_t>& start);

}  // namespace bpro
