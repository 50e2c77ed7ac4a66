#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bpro/core.hpp"
#include "bpro/distribution.hpp"
#include "bpro/matching.hpp"
#include "bpro/rng.hpp"

namespace bpro::testing {

// Relative weights of Large, Medium, Small, Tiny items.
using Profile = std::array<unsigned, 4>;

// Random size in the category's range with denominator `den` (a multiple of 12
// keeps every boundary reachable).
ExactSize random_size(Category c, CounterRng& rng, std::int64_t den = 120);

Sequence random_sequence(std::size_t n, const Profile& profile, CounterRng& rng, std::int64_t den = 120);

// A profile drawn from a few families: all four categories, S/T only, L/M
// only, no tiny, and single-category heavy mixes.
Profile random_profile(CounterRng& rng);

DiscreteDistribution distribution(std::initializer_list<std::pair<const char*, const char*>> entries);

// Minimum bin count by trying every set partition.
std::size_t brute_force_opt(std::span<const ExactSize> items);

// Largest family of pairwise disjoint qualifying windows, searched over all
// subsets of windows.
std::size_t brute_force_s_triplets(std::span<const ExactSize> items);
std::size_t brute_force_ml_triplets(std::span<const ExactSize> items, bool allow_small);

// Maximum matching size over all assignments of plus points to distinct
// upright minus points.
std::size_t exhaustive_upright_matching(std::span<const Point> plus, std::span<const Point> minus);

std::string data_path(const std::string& relative);

}  // namespace bpro::testing
