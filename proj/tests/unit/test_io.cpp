#include <doctest.h>

#include "bpro/error.hpp"
#include "bpro/io.hpp"
#include "bpro/markov.hpp"
#include "support.hpp"

using namespace bpro;

TEST_CASE("FNV-1a reference digests") {
  CHECK(fnv1a64_digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(fnv1a64_digest("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(fnv1a64_digest("foobar") == "fnv1a64:85944171f73967e8");
}

TEST_CASE("distribution JSON") {
  const auto d = parse_distribution_json(R"({"items":[{"size":"0.25","prob":"3/5"},{"size":"1/3","prob":"0.4"}]})");
  REQUIRE(d.size() == 2);
  CHECK(d.sizes()[0] == ExactSize(1, 4));
  CHECK(d.probs()[1] == make_rational(2, 5));
  CHECK(to_json(d).dump() == R"({"items":[{"size":"1/4","prob":"3/5"},{"size":"1/3","prob":"2/5"}]})");

  CHECK_THROWS_AS(parse_distribution_json(R"({"items":[{"size":0.25,"prob":"1"}]})"), ParseError);
  CHECK_THROWS_AS(parse_distribution_json(R"({"things":[]})"), ParseError);
  CHECK_THROWS_AS(parse_distribution_json(R"({"items":[{"size":"1/2","prob":"1/2"}]})"), DomainError);
  CHECK_THROWS_AS(
      parse_distribution_json(R"({"items":[{"size":"1/2","prob":"1/2"},{"size":"0.5","prob":"1/2"}]})"),
      DomainError);
  try {
    parse_distribution_json("{\n\"items\": [\n  {\"size\": \"1/2\",, }\n]}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("recipe JSON") {
  const Recipe r = parse_recipe_json(R"({"bins":[{"counts":{"0.245":2,"1/4":1},"rate":"13/100"}]})");
  REQUIRE(r.size() == 1);
  CHECK(r[0].counts.size() == 2);
  CHECK(r[0].rate == make_rational(13, 100));
  CHECK_THROWS_AS(parse_recipe_json(R"({"bins":[{"counts":{"1/4":-1},"rate":"1"}]})"), ParseError);
  CHECK_THROWS_AS(parse_recipe_json(R"({"bins":[{"counts":{"1/4":1}}]})"), ParseError);
}

TEST_CASE("reports carry exact fractions and decimals") {
  const Json j = rational_json(make_rational(29, 100));
  CHECK(j["fraction"] == "29/100");
  CHECK(j["decimal"] == doctest::Approx(0.29));

  const auto dist = parse_distribution_json(read_text_file(testing::data_path("fig1.json")));
  const Json r = to_json(iid_ratio(dist, OptMode::Lp));
  CHECK(r["states"] == 9);
  CHECK(r["ratio"]["fraction"] == "8875/8041");
  CHECK(r["ergodicity"]["ergodic"] == true);
  CHECK(r["opt_rate"]["fraction"] == "17/60");
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/bpro/file"), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/bpro/file", "x"), IoError);
}
