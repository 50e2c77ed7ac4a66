#include <doctest.h>

#include <cmath>
#include <set>

#include "bpro/error.hpp"
#include "bpro/io.hpp"
#include "bpro/markov.hpp"
#include "bpro/random_order.hpp"
#include "support.hpp"

using namespace bpro;

namespace {

DiscreteDistribution load_dist(const std::string& rel) {
  return parse_distribution_json(read_text_file(testing::data_path(rel)));
}

ChainSpec hand_chain(std::vector<std::vector<std::pair<std::size_t, Rational>>> moves) {
  ChainSpec c;
  for (auto& row : moves) {
    std::vector<ChainTransition> out;
    for (auto& [next, p] : row) out.push_back({next, p, false});
    c.transitions.push_back(std::move(out));
  }
  return c;
}

std::set<Rational> subset_sums(const DiscreteDistribution& dist) {
  std::set<Rational> sums{0};
  std::vector<Rational> frontier{0};
  while (!frontier.empty()) {
    std::vector<Rational> next;
    for (const auto& s : frontier) {
      for (const auto& size : dist.sizes()) {
        const Rational t = s + size.value();
        if (t <= 1 && sums.insert(t).second) next.push_back(t);
      }
    }
    frontier = std::move(next);
  }
  return sums;
}

}  // namespace

TEST_CASE("build_chain: Fig. 1 loads table") {
  const auto dist = testing::distribution({{"1/4", "3/5"}, {"1/3", "2/5"}});
  const ChainSpec chain = build_chain(dist);
  REQUIRE(chain.size() == 9);
  CHECK(chain.states[0].open_loads.empty());
  std::set<std::vector<Rational>> got;
  for (const auto& s : chain.states) got.insert(s.open_loads);
  const std::set<std::vector<Rational>> expected{
      {},
      {make_rational(1, 4)},
      {make_rational(1, 3)},
      {make_rational(1, 2)},
      {make_rational(7, 12)},
      {make_rational(2, 3)},
      {make_rational(3, 4)},
      {make_rational(3, 4), make_rational(1, 3)},
      {make_rational(3, 4), make_rational(2, 3)}};
  CHECK(got == expected);
  // The state set does not depend on the probabilities.
  CHECK(build_chain(testing::distribution({{"1/4", "1/100"}, {"1/3", "99/100"}})).size() == 9);
  CHECK_NOTHROW(validate_chain(chain));
}

TEST_CASE("build_chain: single-size supports and the cap") {
  const ChainSpec large = build_chain(testing::distribution({{"3/5", "1"}}));
  CHECK(large.size() == 1);
  CHECK(large.transitions[0][0].opened_new);
  CHECK(large.transitions[0][0].next == 0);
  CHECK(build_chain(testing::distribution({{"1/2", "1"}})).size() == 2);
  CHECK_THROWS_AS(build_chain(load_dist("table1/types7.json"), 50), CapExceeded);
}

TEST_CASE("stationary examples") {
  const Rational h = make_rational(1, 2);
  const ChainSpec two = hand_chain({{{0, h}, {1, h}}, {{0, h}, {1, h}}});
  for (SolveMode m : {SolveMode::Exact, SolveMode::Iterative}) {
    const StationaryVector w = stationary(two, m);
    CHECK(w.values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.values[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(stationary(two, SolveMode::Exact).exact == std::vector<Rational>{h, h});

  const ChainSpec one = hand_chain({{{0, 1}}});
  CHECK(stationary(one, SolveMode::Exact).exact == std::vector<Rational>{1});
  CHECK(stationary(one, SolveMode::Iterative).values[0] == doctest::Approx(1.0));

  const ChainSpec reducible = hand_chain({{{1, 1}}, {{1, 1}}});
  CHECK_THROWS_AS(stationary(reducible), DomainError);
  CHECK_THROWS_AS(validate_chain(hand_chain({{{0, h}}})), InvariantError);
  CHECK_THROWS_AS(validate_chain(hand_chain({{{3, 1}}})), InvariantError);
}

TEST_CASE("Fig. 1 chain: ergodic, ratio close to 1.1") {
  const auto dist = load_dist("fig1.json");
  const IidRatio r = iid_ratio(dist, OptMode::Lp);
  CHECK(r.ergodicity.irreducible);
  CHECK(r.ergodicity.aperiodic());
  CHECK(r.ergodicity.reachable_from_start == 9);
  CHECK(r.omega.is_exact());
  CHECK(r.opt_rate == make_rational(17, 60));
  // The published value 1.1 is rounded; the exact chain gives 8875/8041.
  REQUIRE(r.exact_ratio.has_value());
  CHECK(*r.exact_ratio == make_rational(8875, 8041));
  CHECK(std::abs(r.ratio - 1.1) < 0.01);
}

TEST_CASE("verify_ergodicity examples") {
  const ChainSpec swap = hand_chain({{{1, 1}}, {{0, 1}}});
  ErgodicityReport e = verify_ergodicity(swap);
  CHECK(e.irreducible);
  CHECK(e.period == 2);
  CHECK_FALSE(e.ergodic());

  e = verify_ergodicity(hand_chain({{{0, 1}}}));
  CHECK(e.ergodic());

  e = verify_ergodicity(hand_chain({{{1, 1}}, {{1, 1}}}));
  CHECK_FALSE(e.irreducible);

  // Cycles of length 2 and 3 through state 0 give period 1.
  const Rational h = make_rational(1, 2);
  e = verify_ergodicity(hand_chain({{{1, 1}}, {{0, h}, {2, h}}, {{0, 1}}}));
  CHECK(e.period == 1);
}

TEST_CASE("bf_rate examples") {
  auto rate = [](const DiscreteDistribution& d) {
    const ChainSpec c = build_chain(d);
    return bf_rate(c, stationary(c, SolveMode::Exact));
  };
  const BfRate half = rate(testing::distribution({{"1/2", "1"}}));
  REQUIRE(half.exact.has_value());
  CHECK(*half.exact == make_rational(1, 2));
  CHECK(*rate(testing::distribution({{"1", "1"}})).exact == 1);
  CHECK(rate(load_dist("table1/types7.json")).value == doctest::Approx(0.3317621).epsilon(3e-7));
}

TEST_CASE("iid_ratio examples") {
  CHECK(*iid_ratio(testing::distribution({{"1/2", "1"}}), OptMode::Lp).exact_ratio == 1);
  CHECK(iid_ratio(load_dist("table1/types2.json"), OptMode::Lp).ratio == doctest::Approx(1.1037).epsilon(1e-3));
  CHECK(iid_ratio(load_dist("table1/types3.json"), OptMode::Lp).ratio == doctest::Approx(1.1182).epsilon(1e-3));
  CHECK(iid_ratio(load_dist("table1/types7.json"), OptMode::Lp).ratio == doctest::Approx(1.1440).epsilon(1e-3));
  CHECK_THROWS_AS(iid_ratio(load_dist("fig1.json"), OptMode::Recipe), DomainError);

  const Recipe recipe = parse_recipe_json(read_text_file(testing::data_path("table1/types7_recipe.json")));
  const IidRatio r = iid_ratio(load_dist("table1/types7.json"), OptMode::Recipe, &recipe);
  CHECK(r.opt_rate == make_rational(29, 100));
  CHECK_FALSE(r.lp.has_value());
}

TEST_CASE("property: chain states are valid and transitions are Best-Fit moves") {
  for (const char* rel : {"fig1.json", "table1/types3.json", "table1/types5.json", "table1/types7.json"}) {
    CAPTURE(rel);
    const auto dist = load_dist(rel);
    const ChainSpec chain = build_chain(dist);
    CHECK_NOTHROW(validate_chain(chain));
    const std::set<Rational> sums = subset_sums(dist);
    const Rational limit = 1 - dist.min_size().value();
    for (std::size_t s = 0; s < chain.size(); ++s) {
      const auto& loads = chain.states[s].open_loads;
      CHECK(std::is_sorted(loads.rbegin(), loads.rend()));
      for (const auto& l : loads) {
        CHECK(sums.count(l) == 1);
        CHECK(l <= limit);
        CHECK(l > 0);
      }
      Rational mass = 0;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        const auto& t = chain.transitions[s][i];
        mass += t.probability;
        CHECK(t.probability == dist.probs()[i]);
        const Rational& size = dist.sizes()[i].value();
        const bool fits = std::any_of(loads.begin(), loads.end(), [&](const Rational& l) { return l + size <= 1; });
        CHECK(t.opened_new == !fits);
      }
      CHECK(mass == 1);
    }
    CHECK(verify_ergodicity(chain).ergodic());
  }
}

TEST_CASE("property: exact and iterative stationary vectors agree") {
  for (const char* rel : {"fig1.json", "table1/types2.json", "table1/types4.json", "table1/types7.json"}) {
    CAPTURE(rel);
    const ChainSpec chain = build_chain(load_dist(rel));
    const StationaryVector exact = stationary(chain, SolveMode::Exact);
    const StationaryVector iter = stationary(chain, SolveMode::Iterative);
    REQUIRE(exact.values.size() == iter.values.size());
    Rational total = 0;
    for (std::size_t s = 0; s < chain.size(); ++s) {
      CHECK(std::abs(exact.values[s] - iter.values[s]) <= 1e-10);
      CHECK(exact.exact[s] >= 0);
      total += exact.exact[s];
    }
    CHECK(total == 1);
    CHECK(exact.residual <= 1e-14);
    CHECK(iter.residual <= kIterativeResidual);
    CHECK(std::abs(bf_rate(chain, exact).value - bf_rate(chain, iter).value) <= 1e-10);
  }
}

TEST_CASE("property: chain rate matches streamed Best-Fit") {
  for (const char* rel : {"fig1.json", "table1/types4.json"}) {
    CAPTURE(rel);
    const auto dist = load_dist(rel);
    const ChainSpec chain = build_chain(dist);
    const double rate = bf_rate(chain, stationary(chain)).value;
    const SimulatedRate sim = simulate_iid_best_fit(dist, 200'000, 17);
    CHECK(std::abs(sim.rate - rate) <= 4 * sim.std_error);
  }
}
