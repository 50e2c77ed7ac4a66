#include "support.hpp"

#include <algorithm>
#include <functional>

#include "bpro/io.hpp"

#ifndef BPRO_DATA_DIR
#error "BPRO_DATA_DIR must point at the data/ directory"
#endif

namespace bpro::testing {

ExactSize random_size(Category c, CounterRng& rng, std::int64_t den) {
  // Numerator range (lo, hi] for each category.
  std::int64_t lo = 0;
  std::int64_t hi = den / 4;
  switch (c) {
    case Category::Large: lo = den / 2; hi = den; break;
    case Category::Medium: lo = den / 3; hi = den / 2; break;
    case Category::Small: lo = den / 4; hi = den / 3; break;
    case Category::Tiny: break;
  }
  const auto num = lo + 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo)));
  return ExactSize(num, den);
}

Sequence random_sequence(std::size_t n, const Profile& profile, CounterRng& rng, std::int64_t den) {
  unsigned total = 0;
  for (unsigned w : profile) total += w;
  Sequence seq;
  seq.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = static_cast<unsigned>(rng.below(total));
    std::size_t c = 0;
    while (r >= profile[c]) r -= profile[c++];
    // Profile order is L, M, S, T; Category order is the reverse.
    seq.push_back(random_size(static_cast<Category>(3 - c), rng, den));
  }
  return seq;
}

Profile random_profile(CounterRng& rng) {
  static constexpr std::array<Profile, 7> families{{
      {1, 1, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 1, 0}, {3, 1, 1, 1}, {1, 1, 4, 1}, {1, 1, 1, 4}}};
  Profile p = families[rng.below(families.size())];
  for (auto& w : p) {
    if (w > 0) w += static_cast<unsigned>(rng.below(3));
  }
  return p;
}

DiscreteDistribution distribution(std::initializer_list<std::pair<const char*, const char*>> entries) {
  std::vector<std::pair<ExactSize, Rational>> v;
  for (const auto& [size, prob] : entries) v.emplace_back(parse_size(size), parse_rational(prob));
  return DiscreteDistribution(std::move(v));
}

std::size_t brute_force_opt(std::span<const ExactSize> items) {
  std::size_t best = items.size();
  std::vector<Rational> loads;
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (loads.size() >= best) return;
    if (i == items.size()) {
      best = loads.size();
      return;
    }
    const Rational& s = items[i].value();
    // Indexing, not references: the recursion grows `loads`.
    for (std::size_t b = 0; b < loads.size(); ++b) {
      if (loads[b] + s <= 1) {
        loads[b] += s;
        place(i + 1);
        loads[b] -= s;
      }
    }
    loads.push_back(s);
    place(i + 1);
    loads.pop_back();
  };
  place(0);
  return best;
}

namespace {

using Window = std::pair<std::size_t, std::size_t>;  // [begin, end) in the filtered list

std::size_t max_disjoint(const std::vector<Window>& windows) {
  std::size_t best = 0;
  const std::size_t m = windows.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<Window> chosen;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) chosen.push_back(windows[i]);
    }
    bool ok = true;
    for (std::size_t a = 0; a < chosen.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < chosen.size() && ok; ++b) {
        ok = chosen[a].second <= chosen[b].first || chosen[b].second <= chosen[a].first;
      }
    }
    if (ok) best = std::max(best, chosen.size());
  }
  return best;
}

}  // namespace

std::size_t brute_force_s_triplets(std::span<const ExactSize> items) {
  std::vector<Category> f;
  for (const auto& s : items) {
    if (classify(s) != Category::Tiny) f.push_back(classify(s));
  }
  std::vector<Window> windows;
  for (std::size_t i = 0; i + 3 <= f.size(); ++i) {
    if (f[i] == Category::Small && f[i + 1] == Category::Small && f[i + 2] == Category::Small) {
      windows.emplace_back(i, i + 3);
    }
  }
  return max_disjoint(windows);
}

std::size_t brute_force_ml_triplets(std::span<const ExactSize> items, bool allow_small) {
  std::vector<ExactSize> f;
  for (const auto& s : items) {
    const Category c = classify(s);
    if (c == Category::Large || c == Category::Medium || (allow_small && c == Category::Small)) f.push_back(s);
  }
  auto is_q = [&](const ExactSize& s) {
    const Category c = classify(s);
    return c == Category::Medium || (allow_small && c == Category::Small);
  };
  std::vector<Window> windows;
  for (std::size_t i = 0; i + 6 <= f.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < 3 && ok; ++j) {
      const auto& q = f[i + 2 * j];
      const auto& l = f[i + 2 * j + 1];
      ok = is_q(q) && classify(l) == Category::Large && q.value() + l.value() <= 1;
    }
    if (ok) windows.emplace_back(i, i + 6);
  }
  return max_disjoint(windows);
}

std::size_t exhaustive_upright_matching(std::span<const Point> plus, std::span<const Point> minus) {
  std::vector<bool> used(minus.size(), false);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t matched) {
    if (matched + (plus.size() - i) <= best) return;
    if (i == plus.size()) {
      best = matched;
      return;
    }
    for (std::size_t j = 0; j < minus.size(); ++j) {
      if (!used[j] && minus[j].x <= plus[i].x && minus[j].y <= plus[i].y) {
        used[j] = true;
        go(i + 1, matched + 1);
        used[j] = false;
      }
    }
    go(i + 1, matched);
  };
  go(0, 0);
  return best;
}

std::string data_path(const std::string& relative) { return std::string(BPRO_DATA_DIR) + "/" + relative; }

}  // namespace bpro::testing
