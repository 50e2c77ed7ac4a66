#include <iostream>

#include <CLI11.hpp>

#include "bpro/error.hpp"
#include "bpro/markov.hpp"
#include "bpro/optimal.hpp"
#include "bpro/version.hpp"
#include "commands.hpp"

using bpro::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Root seed for all randomness")->capture_default_str();
  sub->add_option("--format", cfg.format, "Report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, bpro::cli::Format>{{"json", bpro::cli::Format::Json}, {"csv", bpro::cli::Format::Csv}}));
  sub->add_option("--out", cfg.out, "Write the report here instead of stdout");
  sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores); results do not depend on it");
}

void add_items(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--instance", cfg.instance_path, "Instance file, one size per line");
  sub->add_option("--dist", cfg.dist_path, "Distribution JSON to sample an instance from");
  sub->add_option("--n", cfg.n, "Items to sample from --dist");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-Fit random-order toolkit"};
  app.set_version_flag("--version", BPRO_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.state_cap = bpro::kDefaultStateCap;
  cfg.opt_cap = bpro::kDefaultOptCap;

  auto* simulate = app.add_subcommand("simulate", "Run an online packer and check Best-Fit structure");
  add_items(simulate, cfg);
  add_common(simulate, cfg);
  simulate->add_option("--alg", cfg.alg, "best-fit, first-fit or next-fit")->capture_default_str();
  simulate->add_option("--order", cfg.order, "identity or random (seeded)")->capture_default_str();
  simulate->add_flag("--trace", cfg.trace, "Include the final bins in the JSON report");

  auto* ratio = app.add_subcommand("ratio", "Estimate E[BF(I_sigma)] / Opt(I) over random orders");
  add_items(ratio, cfg);
  add_common(ratio, cfg);
  ratio->add_option("--samples", cfg.samples, "Random permutations")->capture_default_str();
  ratio->add_option("--recipe", cfg.recipe_path, "Recipe JSON giving an Opt rate (needs --dist)");
  ratio->add_option("--opt-cap", cfg.opt_cap, "Largest n solved exactly")->capture_default_str();

  auto* markov = app.add_subcommand("markov", "Best-Fit Markov chain and i.i.d. ratio for a distribution");
  add_common(markov, cfg);
  markov->add_option("--dist", cfg.dist_path, "Distribution JSON")->required();
  markov->add_option("--recipe", cfg.recipe_path, "Recipe JSON for --opt recipe");
  markov->add_option("--opt", cfg.opt, "lp or recipe")->capture_default_str();
  markov->add_option("--mode", cfg.mode, "auto, exact or iterative")->capture_default_str();
  markov->add_option("--state-cap", cfg.state_cap, "Maximum number of chain states")->capture_default_str();

  auto* gadgets = app.add_subcommand("gadgets", "Count S-triplets and fitting ML triplets over random orders");
  add_items(gadgets, cfg);
  add_common(gadgets, cfg);
  gadgets->add_option("--range", cfg.range, "Position range a:b as fractions of n")->capture_default_str();
  gadgets->add_option("--samples", cfg.samples, "Random permutations")->capture_default_str();

  auto* match = app.add_subcommand("match", "Stochastic upright matching experiment");
  add_common(match, cfg);
  match->add_option("--k", cfg.k, "Points per side")->capture_default_str();
  match->add_option("--trials", cfg.trials, "Random permutations")->capture_default_str();

  auto* opt = app.add_subcommand("opt", "Optimal bin count of an instance, or the configuration LP of a distribution");
  add_common(opt, cfg);
  opt->add_option("--instance", cfg.instance_path, "Instance file");
  opt->add_option("--dist", cfg.dist_path, "Distribution JSON");
  opt->add_option("--recipe", cfg.recipe_path, "Recipe JSON to verify against --dist");
  opt->add_option("--opt-cap", cfg.opt_cap, "Largest n solved exactly")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bpro::cli::kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      cfg.command = "simulate";
      return bpro::cli::cmd_simulate(cfg);
    }
    if (ratio->parsed()) {
      cfg.command = "ratio";
      return bpro::cli::cmd_ratio(cfg);
    }
    if (markov->parsed()) {
      cfg.command = "markov";
      return bpro::cli::cmd_markov(cfg);
    }
    if (gadgets->parsed()) {
      cfg.command = "gadgets";
      return bpro::cli::cmd_gadgets(cfg);
    }
    if (match->parsed()) {
      cfg.command = "match";
      return bpro::cli::cmd_match(cfg);
    }
    cfg.command = "opt";
    return bpro::cli::cmd_opt(cfg);
  } catch (const bpro::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return bpro::cli::kExitUsage;
  } catch (const bpro::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return bpro::cli::kExitInput;
  } catch (const bpro::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return bpro::cli::kExitInput;
  } catch (const bpro::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return bpro::cli::kExitCap;
  } catch (const bpro::InvariantError& e) {
    std::cerr << "internal invariant failed: " << e.what() << "\n";
    return bpro::cli::kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bpro::cli::kExitError;
  }
}
