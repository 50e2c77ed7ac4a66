#include "bpro/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bpro/error.hpp"

namespace bpro {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string fnv1a64_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n')) + 1;
    throw ParseError("malformed JSON", line);
  }
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::string string_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = member(obj, key, where);
  if (!v.is_string()) throw ParseError(where + ": \"" + key + "\" must be a string (exact value)");
  return v.get<std::string>();
}

}  // namespace

DiscreteDistribution parse_distribution_json(std::string_view text) {
  const Json doc = parse_json_text(text);
  const Json& items = member(doc, "items", "distribution");
  if (!items.is_array()) throw ParseError("distribution: \"items\" must be an array");
  std::vector<std::pair<ExactSize, Rational>> entries;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "distribution item " + std::to_string(i);
    const ExactSize size = parse_size(string_field(items[i], "size", where));
    entries.emplace_back(size, parse_rational(string_field(items[i], "prob", where)));
  }
  return DiscreteDistribution(std::move(entries));
}

Recipe parse_recipe_json(std::string_view text) {
  const Json doc = parse_json_text(text);
  const Json& bins = member(doc, "bins", "recipe");
  if (!bins.is_array()) throw ParseError("recipe: \"bins\" must be an array");
  Recipe recipe;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const std::string where = "recipe bin " + std::to_string(b);
    const Json& counts = member(bins[b], "counts", where);
    if (!counts.is_object()) throw ParseError(where + ": \"counts\" must be an object");
    RecipeBin bin;
    for (const auto& [key, value] : counts.items()) {
      if (!value.is_number_unsigned()) throw ParseError(where + ": count for " + key + " must be a non-negative integer");
      bin.counts.emplace_back(parse_size(key), value.get<std::size_t>());
    }
    bin.rate = parse_rational(string_field(bins[b], "rate", where));
    recipe.push_back(std::move(bin));
  }
  return recipe;
}

Json rational_json(const Rational& value) {
  Json j;
  j["fraction"] = to_fraction_string(value);
  j["decimal"] = to_double(value);
  return j;
}

Json to_json(const DiscreteDistribution& dist) {
  Json items = Json::array();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    items.push_back({{"size", to_fraction_string(dist.sizes()[i].value())},
                     {"prob", to_fraction_string(dist.probs()[i])}});
  }
  return Json{{"items", std::move(items)}};
}

Json to_json(const TraceStats& stats) {
  return Json{{"t_sigma", stats.t_sigma},
              {"t_sigma_prime", stats.t_sigma_prime},
              {"tiny_volume_prefix", rational_json(stats.tiny_volume_prefix)},
              {"total_volume_prefix", rational_json(stats.total_volume_prefix)}};
}

Json to_json(const ClaimReport& report) {
  Json records = Json::array();
  for (const auto& r : report.records) {
    records.push_back({{"name", r.name},
                       {"status", claim_status_name(r.status)},
                       {"violations", r.violations},
                       {"allowed_exceptions", r.allowed_exceptions},
                       {"witness_bins", r.witnesses},
                       {"asserted", r.asserted},
                       {"description", r.description}});
  }
  return Json{{"all_pass", report.all_pass()}, {"records", std::move(records)}};
}

Json to_json(const PackingTrace& trace) {
  Json bins = Json::array();
  for (const auto& b : trace.bins) {
    Json items = Json::array();
    for (const auto& it : b.contents) items.push_back({it.time, to_fraction_string(it.size.value())});
    bins.push_back({{"id", b.id}, {"load", to_fraction_string(b.load)}, {"items", std::move(items)}});
  }
  return Json{{"algorithm", algorithm_name(trace.algorithm)},
              {"items", trace.size()},
              {"bins_used", trace.bin_count()},
              {"bins", std::move(bins)}};
}

Json to_json(const PostTSigmaStats& stats) {
  return Json{{"ell_hat", stats.ell_hat},
              {"m_hat", stats.m_hat},
              {"b_hat", stats.b_hat},
              {"n_sigma", stats.n_sigma},
              {"opt_suffix", stats.opt_suffix},
              {"n_sigma_bound_holds", stats.n_sigma_bound_holds},
              {"opt_formula_holds", stats.opt_formula_holds}};
}

Json to_json(const OptBracket& bracket) {
  return Json{{"lower", bracket.lower}, {"upper", bracket.upper}, {"exact", bracket.exact}};
}

Json to_json(const LpSolution& lp) {
  Json support = Json::array();
  for (const auto& s : lp.support) support.push_back(to_fraction_string(s.value()));
  Json rates = Json::array();
  for (const auto& [config, rate] : lp.rates) {
    rates.push_back({{"counts", config.counts}, {"rate", rational_json(rate)}});
  }
  return Json{{"support", std::move(support)},
              {"objective", rational_json(lp.objective)},
              {"configurations_considered", lp.configurations_considered},
              {"rates", std::move(rates)}};
}

Json to_json(const ErgodicityReport& report) {
  return Json{{"irreducible", report.irreducible},
              {"period", report.period},
              {"aperiodic", report.aperiodic()},
              {"ergodic", report.ergodic()},
              {"reachable_from_empty", report.reachable_from_start}};
}

Json to_json(const IidRatio& ratio) {
  Json j;
  j["states"] = ratio.states;
  j["ergodicity"] = to_json(ratio.ergodicity);
  j["bf_rate"] = ratio.bf.exact ? rational_json(*ratio.bf.exact) : Json{{"decimal", ratio.bf.value}};
  j["opt_mode"] = ratio.opt_mode == OptMode::Lp ? "lp" : "recipe";
  j["opt_rate"] = rational_json(ratio.opt_rate);
  j["ratio"] = ratio.exact_ratio ? rational_json(*ratio.exact_ratio) : Json{{"decimal", ratio.ratio}};
  if (ratio.lp) j["lp"] = to_json(*ratio.lp);
  return j;
}

Json to_json(const RatioEstimate& estimate) {
  return Json{{"samples", estimate.samples},
              {"seed", estimate.seed},
              {"mean_bf", estimate.mean_bf},
              {"stderr", estimate.std_error},
              {"opt_reference", {{"kind", opt_reference_name(estimate.opt_reference.kind)},
                                 {"value", rational_json(estimate.opt_reference.value)}}},
              {"ratio", estimate.ratio},
              {"ratio_stderr", estimate.ratio_std_error}};
}

Json to_json(const KenyonReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"t", r.t},
                    {"min_ratio", r.min_ratio},
                    {"mean_ratio", r.mean_ratio},
                    {"max_ratio", r.max_ratio},
                    {"max_deviation", r.max_deviation},
                    {"max_deviation_bound", r.max_deviation_bound},
                    {"exact_prefixes", r.exact_prefixes},
                    {"within_band", r.within_band}});
  }
  return Json{{"opt_total", to_json(report.opt_total)},
              {"samples", report.samples},
              {"seed", report.seed},
              {"band", report.band},
              {"rows", std::move(rows)}};
}

namespace {

Json counts_json(const GadgetCounts& c) {
  return Json{{"mean", c.mean}, {"min", c.min}, {"max", c.max}, {"predicted_lower_bound", c.bound}};
}

}  // namespace

Json to_json(const GadgetReport& report) {
  return Json{{"n", report.n},
              {"range", {report.first, report.last}},
              {"samples", report.samples},
              {"seed", report.seed},
              {"non_tiny", report.non_tiny},
              {"small", report.small},
              {"f_small", report.f_small},
              {"s_triplets", counts_json(report.s_triplets)},
              {"ml_pairs", report.ml_pairs},
              {"ml_unpaired", report.ml_unpaired},
              {"opt_large_medium", report.opt_lm},
              {"u", report.u},
              {"ml_triplets", counts_json(report.ml_triplets)},
              {"ml_claim_bound", report.ml_claim_bound},
              {"msl_pairs", report.msl_pairs},
              {"msl_unpaired", report.msl_unpaired},
              {"msl_triplets", counts_json(report.msl_triplets)}};
}

Json to_json(const FischerStats& stats) {
  return Json{{"k", stats.k},
              {"trials", stats.trials},
              {"seed", stats.seed},
              {"mean", stats.mean},
              {"max", stats.max},
              {"scale", stats.scale},
              {"normalized_quantiles", {{"q10", stats.q10}, {"q50", stats.q50}, {"q90", stats.q90}}}};
}

}  // namespace bpro
