#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace bpro::cli {

enum class Format { Json, Csv };

struct RunConfig {
  std::string command;
  std::optional<std::string> instance_path;
  std::optional<std::string> dist_path;
  std::optional<std::string> recipe_path;
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  std::size_t n = 0;  // items sampled from --dist when no --instance is given
  std::string range = "1/4:1/2";
  std::size_t state_cap = 0;
  std::size_t opt_cap = 0;
  std::string alg = "best-fit";
  std::string order = "identity";
  std::string mode = "auto";
  std::string opt = "lp";
  std::size_t k = 64;
  std::size_t trials = 200;
  unsigned threads = 0;
  bool trace = false;
  Format format = Format::Json;
  std::optional<std::string> out;
};

// Each command writes its report and returns the process exit status.
int cmd_simulate(const RunConfig& cfg);
int cmd_ratio(const RunConfig& cfg);
int cmd_markov(const RunConfig& cfg);
int cmd_gadgets(const RunConfig& cfg);
int cmd_match(const RunConfig& cfg);
int cmd_opt(const RunConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitCap = 4;
inline constexpr int kExitInvariant = 5;

}  // namespace bpro::cli
