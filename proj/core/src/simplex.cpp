#include "bpro/simplex.hpp"

#include "bpro/error.hpp"

namespace bpro {

CoveringResult minimize_covering(const std::vector<std::vector<Rational>>& columns,
                                 const std::vector<Rational>& demand, const std::vector<std::size_t>& start) {
  const std::size_t k = demand.size();
  const std::size_t m = columns.size();
  if (start.size() != k) throw DomainError("simplex: starting basis has the wrong size");
  for (const auto& col : columns) {
    if (col.size() != k) throw DomainError("simplex: column has the wrong length");
  }
  for (const auto& d : demand) {
    if (sgn(d) < 0) throw DomainError("simplex: negative demand");
  }

  // Variables 0..m-1 are columns, m..m+k-1 are surplus (column -e_i, cost 0).
  auto entry = [&](std::size_t var, std::size_t row) -> Rational {
    if (var < m) return columns[var][row];
    return var - m == row ? Rational{-1} : Rational{0};
  };
  auto cost = [&](std::size_t var) { return var < m ? 1 : 0; };

  std::vector<std::size_t> basis = start;
  std::vector<std::vector<Rational>> inv(k, std::vector<Rational>(k, 0));
  std::vector<Rational> x(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (start[i] >= m) throw DomainError("simplex: starting basis names an unknown column");
    for (std::size_t r = 0; r < k; ++r) {
      if ((r == i) != (sgn(columns[start[i]][r]) != 0)) {
        throw DomainError("simplex: starting basis is not diagonal");
      }
    }
    if (sgn(columns[start[i]][i]) < 0) throw DomainError("simplex: starting basis is not diagonal");
    inv[i][i] = 1 / columns[start[i]][i];
    x[i] = demand[i] * inv[i][i];
  }

  CoveringResult out;
  std::vector<Rational> y(k);
  for (;;) {
    // y = c_B B^-1
    for (std::size_t j = 0; j < k; ++j) {
      y[j] = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (cost(basis[i]) != 0 && sgn(inv[i][j]) != 0) y[j] += inv[i][j];
      }
    }

    std::size_t enter = m + k;
    for (std::size_t v = 0; v < m + k && enter == m + k; ++v) {
      Rational reduced = cost(v);
      if (v < m) {
        for (std::size_t r = 0; r < k; ++r) {
          if (sgn(columns[v][r]) != 0) reduced -= y[r] * columns[v][r];
        }
      } else {
        reduced += y[v - m];
      }
      if (sgn(reduced) < 0) enter = v;
    }
    if (enter == m + k) break;

    std::vector<Rational> dir(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t r = 0; r < k; ++r) {
        if (sgn(inv[i][r]) == 0) continue;
        const Rational a = entry(enter, r);
        if (sgn(a) != 0) dir[i] += inv[i][r] * a;
      }
    }
    std::size_t leave = k;
    Rational best;
    for (std::size_t i = 0; i < k; ++i) {
      if (sgn(dir[i]) <= 0) continue;
      Rational ratio = x[i] / dir[i];
      if (leave == k || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    if (leave == k) throw InvariantError("simplex: covering problem reported unbounded");

    const Rational pivot = dir[leave];
    for (auto& v : inv[leave]) v /= pivot;
    x[leave] /= pivot;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == leave || sgn(dir[i]) == 0) continue;
      const Rational f = dir[i];
      for (std::size_t r = 0; r < k; ++r) {
        if (sgn(inv[leave][r]) != 0) inv[i][r] -= f * inv[leave][r];
      }
      x[i] -= f * x[leave];
    }
    basis[leave] = enter;
    ++out.pivots;
  }

  out.primal.assign(m, 0);
  out.objective = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (basis[i] < m) {
      out.primal[basis[i]] = x[i];
      out.objective += x[i];
    }
  }
  out.dual = y;
  return out;
}

}  // namespace bpro
