#include "commands.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <sstream>

#include "bpro/error.hpp"
#include "bpro/io.hpp"
#include "bpro/markov.hpp"
#include "bpro/matching.hpp"
#include "bpro/optimal.hpp"
#include "bpro/packers.hpp"
#include "bpro/random_order.hpp"
#include "bpro/rng.hpp"
#include "bpro/trace_analysis.hpp"
#include "bpro/version.hpp"

namespace bpro::cli {

namespace {

// Stream ids for derived seeds, so each use of the root seed is independent.
constexpr std::uint64_t kInstanceStream = 0x1;
constexpr std::uint64_t kOrderStream = 0x2;

class Report {
 public:
  explicit Report(const RunConfig& cfg) : cfg_(cfg) {}

  void add_input(const std::string& role, const std::string& path, const std::string& bytes) {
    inputs_[role] = {{"path", path}, {"digest", fnv1a64_digest(bytes)}};
  }

  Json header() const {
    Json config;
    config["instance"] = cfg_.instance_path ? Json(*cfg_.instance_path) : Json(nullptr);
    config["dist"] = cfg_.dist_path ? Json(*cfg_.dist_path) : Json(nullptr);
    config["recipe"] = cfg_.recipe_path ? Json(*cfg_.recipe_path) : Json(nullptr);
    config["seed"] = cfg_.seed;
    config["samples"] = cfg_.samples;
    config["n"] = cfg_.n;
    config["range"] = cfg_.range;
    config["state_cap"] = cfg_.state_cap;
    config["opt_cap"] = cfg_.opt_cap;
    config["alg"] = cfg_.alg;
    config["order"] = cfg_.order;
    config["mode"] = cfg_.mode;
    config["opt"] = cfg_.opt;
    config["k"] = cfg_.k;
    config["trials"] = cfg_.trials;
    config["threads"] = cfg_.threads;
    config["trace"] = cfg_.trace;
    config["format"] = cfg_.format == Format::Json ? "json" : "csv";
    Json j;
    j["tool"] = "bpro";
    j["version"] = BPRO_VERSION;
    j["command"] = cfg_.command;
    j["seed"] = cfg_.seed;
    j["config"] = std::move(config);
    j["inputs"] = inputs_;
    return j;
  }

 private:
  const RunConfig& cfg_;
  Json inputs_ = Json::object();
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out) {
    write_text_file(*cfg.out, text);
  } else {
    std::cout << text;
    std::cout.flush();
  }
}

void emit_json(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

// CSV with the report header as one leading comment line.
void emit_csv(const RunConfig& cfg, const Json& header, const std::string& table) {
  emit(cfg, "# " + header.dump() + "\n" + table);
}

DiscreteDistribution load_distribution(const RunConfig& cfg, Report& report) {
  if (!cfg.dist_path) throw UsageError(cfg.command + " needs --dist");
  const std::string bytes = read_text_file(*cfg.dist_path);
  report.add_input("dist", *cfg.dist_path, bytes);
  return parse_distribution_json(bytes);
}

Instance load_instance(const RunConfig& cfg, Report& report) {
  if (cfg.instance_path) {
    const std::string bytes = read_text_file(*cfg.instance_path);
    report.add_input("instance", *cfg.instance_path, bytes);
    std::istringstream in(bytes);
    Instance inst = parse_instance(in);
    inst.id = *cfg.instance_path;
    return inst;
  }
  if (cfg.dist_path) {
    if (cfg.n == 0) throw UsageError(cfg.command + " with --dist and no --instance needs --n >= 1");
    const DiscreteDistribution dist = load_distribution(cfg, report);
    return sample_iid_instance(dist, cfg.n, derive_seed(cfg.seed, kInstanceStream));
  }
  throw UsageError(cfg.command + " needs --instance or --dist with --n");
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--range expects a:b");
  Rational lo, hi;
  try {
    lo = parse_rational(text.substr(0, colon));
    hi = parse_rational(text.substr(colon + 1));
  } catch (const ParseError& e) {
    throw UsageError(std::string("--range: ") + e.what());
  }
  if (lo > hi || hi > 1) throw UsageError("--range needs 0 <= a <= b <= 1");
  return {to_double(lo), to_double(hi)};
}

// Flag values name enum members; an unknown name is a usage error.
template <typename Parse>
auto parse_flag(const char* flag, const std::string& value, Parse parse) {
  try {
    return parse(value);
  } catch (const DomainError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

std::string loads_text(const ChainState& state) {
  std::string s;
  for (const auto& l : state.open_loads) {
    if (!s.empty()) s += ';';
    s += to_fraction_string(l);
  }
  return s.empty() ? "-" : s;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg) {
  Report report(cfg);
  const Instance inst = load_instance(cfg, report);
  const Algorithm alg = parse_flag("--alg", cfg.alg, parse_algorithm);
  Permutation sigma = Permutation::identity(inst.size());
  if (cfg.order == "random") {
    CounterRng rng(derive_seed(cfg.seed, kOrderStream));
    sigma = Permutation(random_permutation(inst.size(), rng));
  } else if (cfg.order != "identity") {
    throw UsageError("--order must be identity or random");
  }
  const Sequence seq = inst.permuted(sigma);
  const PackingTrace trace = pack(alg, seq);

  Json j = report.header();
  j["algorithm"] = algorithm_name(alg);
  j["items"] = seq.size();
  j["volume"] = rational_json(volume(seq));
  j["bins"] = trace.bin_count();
  std::size_t above_34 = 0, above_23 = 0;
  for (const auto& b : trace.bins) {
    if (b.load > Rational{3} / 4) ++above_34;
    if (b.load > Rational{2} / 3) ++above_23;
  }
  j["load_profile"] = {{"above_3/4", above_34},
                       {"above_2/3", above_23},
                       {"at_most_3/4", trace.bin_count() - above_34}};
  j["t_sigma"] = to_json(compute_t_sigma(trace));
  if (alg == Algorithm::BestFit) {
    j["claims"] = to_json(verify_structural_claims(trace));
    j["post_t_sigma"] = to_json(post_t_sigma_stats(trace));
  } else {
    j["claims"] = nullptr;
    j["post_t_sigma"] = nullptr;
  }
  j["gadgets"] = {{"s_triplets", count_s_triplets(seq)},
                  {"ml_triplets", count_fitting_ml_triplets(seq, false)},
                  {"msl_triplets", count_fitting_ml_triplets(seq, true)}};
  if (cfg.trace) j["trace"] = to_json(trace);

  if (cfg.format == Format::Csv) {
    std::string table = "time,size,bin,load_before,opened\n";
    for (const auto& e : trace.events) {
      table += std::to_string(e.time) + "," + to_fraction_string(e.size.value()) + "," + std::to_string(e.bin_id) +
               "," + to_fraction_string(e.load_before) + "," + (e.opened_new ? "1" : "0") + "\n";
    }
    emit_csv(cfg, j, table);
  } else {
    emit_json(cfg, j);
  }
  return kExitOk;
}

int cmd_ratio(const RunConfig& cfg) {
  if (cfg.samples == 0) throw UsageError("--samples must be at least 1");
  Report report(cfg);
  const Instance inst = load_instance(cfg, report);
  RrOptions opts;
  opts.opt_cap = cfg.opt_cap;
  opts.parallel.threads = cfg.threads;
  if (cfg.dist_path) {
    const DiscreteDistribution dist = load_distribution(cfg, report);
    if (cfg.recipe_path) {
      const std::string bytes = read_text_file(*cfg.recipe_path);
      report.add_input("recipe", *cfg.recipe_path, bytes);
      opts.recipe_rate = verify_recipe(dist, parse_recipe_json(bytes));
    }
    opts.lp_rate = configuration_lp(dist).objective;
  } else if (cfg.recipe_path) {
    throw UsageError("--recipe needs --dist");
  }
  const RatioEstimate est = estimate_rr(inst, cfg.samples, cfg.seed, opts);

  Json j = report.header();
  j["items"] = inst.size();
  j["estimate"] = to_json(est);
  if (cfg.format == Format::Csv) {
    std::string table = "sample,bins\n";
    for (std::size_t i = 0; i < est.bins.size(); ++i) {
      table += std::to_string(i) + "," + std::to_string(est.bins[i]) + "\n";
    }
    emit_csv(cfg, j, table);
  } else {
    j["bins"] = est.bins;
    emit_json(cfg, j);
  }
  return kExitOk;
}

int cmd_markov(const RunConfig& cfg) {
  Report report(cfg);
  const DiscreteDistribution dist = load_distribution(cfg, report);
  IidOptions opts;
  opts.state_cap = cfg.state_cap;
  opts.solve = parse_flag("--mode", cfg.mode, parse_solve_mode);
  OptMode opt_mode;
  std::optional<Recipe> recipe;
  if (cfg.opt == "lp") {
    opt_mode = OptMode::Lp;
  } else if (cfg.opt == "recipe") {
    opt_mode = OptMode::Recipe;
    if (!cfg.recipe_path) throw UsageError("--opt recipe needs --recipe");
    const std::string bytes = read_text_file(*cfg.recipe_path);
    report.add_input("recipe", *cfg.recipe_path, bytes);
    recipe = parse_recipe_json(bytes);
  } else {
    throw UsageError("--opt must be lp or recipe");
  }

  Json j = report.header();
  j["distribution"] = to_json(dist);
  IidRatio r;
  try {
    r = iid_ratio(dist, opt_mode, recipe ? &*recipe : nullptr, opts);
  } catch (const CapExceeded& e) {
    j["status"] = "state-cap-exceeded";
    j["message"] = e.what();
    j["states_explored"] = e.cap();
    emit_json(cfg, j);
    return kExitCap;
  }
  j["status"] = "ok";
  j["solve_mode"] = solve_mode_name(r.omega.mode);
  j["residual"] = r.omega.residual;
  j["result"] = to_json(r);

  std::vector<std::size_t> order(r.states);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.omega.values[a] > r.omega.values[b]; });

  if (cfg.format == Format::Csv) {
    std::string table = "state,open_loads,omega\n";
    for (std::size_t s = 0; s < r.states; ++s) {
      std::ostringstream w;
      w.precision(17);
      w << r.omega.values[s];
      table += std::to_string(s) + "," + loads_text(r.chain.states[s]) + "," + w.str() + "\n";
    }
    emit_csv(cfg, j, table);
    return kExitOk;
  }
  Json top = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, order.size()); ++i) {
    const std::size_t s = order[i];
    Json row{{"state", s}, {"open_loads", loads_text(r.chain.states[s])}, {"omega", r.omega.values[s]}};
    top.push_back(std::move(row));
  }
  j["omega_top"] = std::move(top);
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_gadgets(const RunConfig& cfg) {
  if (cfg.samples == 0) throw UsageError("--samples must be at least 1");
  Report report(cfg);
  const Instance inst = load_instance(cfg, report);
  const auto [lo, hi] = parse_range(cfg.range);
  const GadgetReport g = gadget_rate_experiment(inst, lo, hi, cfg.samples, cfg.seed, {cfg.threads});

  Json j = report.header();
  j["gadgets"] = to_json(g);
  if (cfg.format == Format::Csv) {
    std::string table = "sample,s_triplets,ml_triplets,msl_triplets\n";
    for (std::size_t i = 0; i < g.samples; ++i) {
      table += std::to_string(i) + "," + std::to_string(g.s_triplets.per_sample[i]) + "," +
               std::to_string(g.ml_triplets.per_sample[i]) + "," + std::to_string(g.msl_triplets.per_sample[i]) +
               "\n";
    }
    emit_csv(cfg, j, table);
  } else {
    emit_json(cfg, j);
  }
  return kExitOk;
}

int cmd_match(const RunConfig& cfg) {
  if (cfg.k < 2) throw UsageError("--k must be at least 2");
  if (cfg.trials == 0) throw UsageError("--trials must be at least 1");
  Report report(cfg);
  const FischerStats f = fischer_experiment(cfg.k, cfg.trials, cfg.seed, cfg.threads);
  Json j = report.header();
  j["fischer"] = to_json(f);
  if (cfg.format == Format::Csv) {
    std::string table = "trial,unmatched,normalized\n";
    for (std::size_t i = 0; i < f.trials; ++i) {
      std::ostringstream w;
      w.precision(17);
      w << f.normalized[i];
      table += std::to_string(i) + "," + std::to_string(f.unmatched[i]) + "," + w.str() + "\n";
    }
    emit_csv(cfg, j, table);
  } else {
    j["unmatched"] = f.unmatched;
    emit_json(cfg, j);
  }
  return kExitOk;
}

int cmd_opt(const RunConfig& cfg) {
  Report report(cfg);
  if (!cfg.instance_path && cfg.dist_path) {
    const DiscreteDistribution dist = load_distribution(cfg, report);
    std::optional<Rational> recipe_rate;
    if (cfg.recipe_path) {
      const std::string bytes = read_text_file(*cfg.recipe_path);
      report.add_input("recipe", *cfg.recipe_path, bytes);
      recipe_rate = verify_recipe(dist, parse_recipe_json(bytes));
    }
    Json j = report.header();
    j["distribution"] = to_json(dist);
    j["lp"] = to_json(configuration_lp(dist));
    if (recipe_rate) j["recipe_rate"] = rational_json(*recipe_rate);
    emit_json(cfg, j);
    return kExitOk;
  }
  const Instance inst = load_instance(cfg, report);
  Json j = report.header();
  const OptBracket b = opt_bracket(inst.items, cfg.opt_cap);
  j["items"] = inst.size();
  j["volume"] = rational_json(volume(inst.items));
  j["lower_bound"] = opt_lower_bound(inst.items);
  j["ffd"] = first_fit_decreasing(inst.items).size();
  j["opt"] = to_json(b);
  if (b.exact && !inst.empty()) {
    Json bins = Json::array();
    for (const auto& bin : opt_exact(inst.items, cfg.opt_cap).packing) {
      Json items = Json::array();
      for (const auto& s : bin) items.push_back(to_fraction_string(s.value()));
      bins.push_back(std::move(items));
    }
    j["packing"] = std::move(bins);
  }
  if (cfg.format == Format::Csv) {
    emit_csv(cfg, j,
             "items,lower,upper,exact\n" + std::to_string(inst.size()) + "," + std::to_string(b.lower) + "," +
                 std::to_string(b.upper) + "," + (b.exact ? "1" : "0") + "\n");
  } else {
    emit_json(cfg, j);
  }
  return kExitOk;
}

}  // namespace bpro::cli
