#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "bpro/distribution.hpp"
#include "bpro/markov.hpp"
#include "bpro/optimal.hpp"
#include "bpro/packers.hpp"
#include "bpro/random_order.hpp"
#include "bpro/matching.hpp"
#include "bpro/trace_analysis.hpp"

namespace bpro {

// Reports keep insertion order so equal inputs give byte-identical output.
using Json = nlohmann::ordered_json;

// Whole file as bytes; IoError when unreadable.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// 64-bit FNV-1a, rendered "fnv1a64:<16 hex digits>".
std::string fnv1a64_digest(std::string_view bytes);

// {"items":[{"size":"<fraction|decimal>","prob":"<fraction|decimal>"}, ...]}.
// ParseError (with a line number when the JSON itself is malformed) or
// DomainError for an invalid distribution.
DiscreteDistribution parse_distribution_json(std::string_view text);

// {"bins":[{"counts":{"<size>":k, ...},"rate":"<fraction>"}, ...]}.
Recipe parse_recipe_json(std::string_view text);

// {"fraction": "p/q", "decimal": <double>}.
Json rational_json(const Rational& value);

Json to_json(const DiscreteDistribution& dist);
Json to_json(const TraceStats& stats);
Json to_json(const ClaimReport& report);
Json to_json(const PackingTrace& trace);
Json to_json(const PostTSigmaStats& stats);
Json to_json(const OptBracket& bracket);
Json to_json(const LpSolution& lp);
Json to_json(const ErgodicityReport& report);
Json to_json(const IidRatio& ratio);
Json to_json(const RatioEstimate& estimate);
Json to_json(const KenyonReport& report);
Json to_json(const GadgetReport& report);
Json to_json(const FischerStats& stats);

}  // namespace bpro
