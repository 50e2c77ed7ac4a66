#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bpro/core.hpp"

namespace bpro {

// A discrete item-size distribution with exact rational probabilities.
class DiscreteDistribution {
 public:
  // Zero-probability entries are dropped. Throws DomainError on duplicate
  // sizes, negative probabilities, an empty support, or a total other than 1.
  explicit DiscreteDistribution(std::vector<std::pair<ExactSize, Rational>> entries);

  [[nodiscard]] std::size_t size() const noexcept { return sizes_.size(); }
  [[nodiscard]] const std::vector<ExactSize>& sizes() const noexcept { return sizes_; }
  [[nodiscard]] const std::vector<Rational>& probs() const noexcept { return probs_; }
  [[nodiscard]] const ExactSize& min_size() const noexcept { return sizes_[min_index_]; }
  // Index of `size` in the support, or npos.
  [[nodiscard]] std::size_t index_of(const ExactSize& size) const noexcept;
  // Expected item size.
  [[nodiscard]] Rational mean() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<ExactSize> sizes_;
  std::vector<Rational> probs_;
  std::size_t min_index_ = 0;
};

// Support and empirical frequencies of an instance (counts / n).
DiscreteDistribution empirical_distribution(std::span<const ExactSize> items);

}  // namespace bpro
