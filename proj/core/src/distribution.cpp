#include "bpro/distribution.hpp"

#include <map>

#include "bpro/error.hpp"

namespace bpro {

DiscreteDistribution::DiscreteDistribution(std::vector<std::pair<ExactSize, Rational>> entries) {
  Rational total = 0;
  for (auto& [size, prob] : entries) {
    prob.canonicalize();
    if (sgn(prob) < 0) throw DomainError("negative probability " + to_fraction_string(prob));
    total += prob;
    if (sgn(prob) == 0) continue;
    if (index_of(size) != npos) {
      throw DomainError("duplicate size " + to_fraction_string(size.value()) + " in distribution");
    }
    sizes_.push_back(size);
    probs_.push_back(prob);
  }
  if (sizes_.empty()) throw DomainError("distribution has no item with positive probability");
  if (total != 1) throw DomainError("probabilities sum to " + to_fraction_string(total) + ", not 1");
  for (std::size_t i = 1; i < sizes_.size(); ++i) {
    if (sizes_[i] < sizes_[min_index_]) min_index_ = i;
  }
}

std::size_t DiscreteDistribution::index_of(const ExactSize& size) const noexcept {
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == size) return i;
  }
  return npos;
}

Rational DiscreteDistribution::mean() const {
  Rational m = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) m += sizes_[i].value() * probs_[i];
  return m;
}

DiscreteDistribution empirical_distribution(std::span<const ExactSize> items) {
  if (items.empty()) throw DomainError("empirical distribution of an empty instance");
  std::map<ExactSize, long> counts;
  for (const auto& s : items) ++counts[s];
  std::vector<std::pair<ExactSize, Rational>> entries;
  const long n = static_cast<long>(items.size());
  for (const auto& [size, c] : counts) entries.emplace_back(size, Rational{c, n});
  for (auto& e : entries) e.second.canonicalize();
  return DiscreteDistribution{std::move(entries)};
}

}  // namespace bpro
