#include "bpro/trace_analysis.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "bpro/error.hpp"
#include "bpro/optimal.hpp"

namespace bpro {

namespace {

const Rational kHalf{1, 2};
const Rational kThird{1, 3};
const Rational kQuarter{1, 4};
const Rational kTwoThirds{2, 3};
const Rational kThreeQuarters{3, 4};
const Rational kThreeHalves{3, 2};

constexpr std::size_t kSTripletSlack = 4;

void check_range(std::size_t n, std::size_t first, std::size_t last) {
  if (first < 1 || first > last || last > n) {
    throw DomainError("invalid arrival range [" + std::to_string(first) + "," + std::to_string(last) +
                      "] for a sequence of length " + std::to_string(n));
  }
}

// Per-bin running tallies during a replay of the event log.
struct BinTally {
  Rational load = 0;
  std::size_t large = 0;
  std::size_t medium = 0;
  std::size_t small = 0;
  std::size_t tiny = 0;
  std::size_t opened_at = 0;

  void add(const ExactSize& s) {
    load += s.value();
    switch (classify(s)) {
      case Category::Large:
        ++large;
        break;
      case Category::Medium:
        ++medium;
        break;
      case Category::Small:
        ++small;
        break;
      case Category::Tiny:
        ++tiny;
        break;
    }
  }
};

// Tallies of every bin counting only arrivals 1..t.
std::vector<BinTally> tallies_at(const PackingTrace& trace, std::size_t t) {
  std::vector<BinTally> bins;
  for (std::size_t i = 0; i < t && i < trace.events.size(); ++i) {
    const auto& e = trace.events[i];
    if (e.bin_id >= bins.size()) bins.resize(e.bin_id + 1);
    if (e.opened_new) bins[e.bin_id].opened_at = e.time;
    bins[e.bin_id].add(e.size);
  }
  return bins;
}

Rational bin_weight_at(const Bin& bin, std::size_t t) {
  Rational w = 0;
  for (const auto& item : bin.contents) {
    if (item.time <= t) w += weight(item.size);
  }
  return w;
}

ClaimRecord make_record(std::string name, std::string description, std::size_t offenders,
                        std::size_t allowed, std::vector<std::size_t> witnesses) {
  ClaimRecord r;
  r.name = std::move(name);
  r.description = std::move(description);
  r.allowed_exceptions = allowed;
  r.violations = offenders > allowed ? offenders - allowed : 0;
  r.status = r.violations == 0 ? ClaimStatus::Pass : ClaimStatus::Fail;
  if (r.status == ClaimStatus::Fail) r.witnesses = std::move(witnesses);
  return r;
}

ClaimRecord not_applicable(std::string name, std::string description) {
  ClaimRecord r;
  r.name = std::move(name);
  r.description = std::move(description);
  r.status = ClaimStatus::NotApplicable;
  return r;
}

// Bins opened by time t whose final load is not above `threshold`.
ClaimRecord early_bins_loaded(const PackingTrace& trace, std::size_t t, const Rational& threshold,
                              std::string name, std::string description) {
  std::vector<std::size_t> offenders;
  for (const auto& bin : trace.bins) {
    if (bin.contents.front().time <= t && bin.load <= threshold) offenders.push_back(bin.id);
  }
  return make_record(std::move(name), std::move(description), offenders.size(), 1, offenders);
}

// Replays the trace and, after every arrival, counts bins satisfying `pred`.
// Records the arrival times where the count exceeds `limit`.
template <typename Pred>
ClaimRecord every_prefix(const PackingTrace& trace, std::size_t limit, Pred pred, std::string name,
                         std::string description) {
  std::vector<BinTally> bins;
  std::vector<bool> flagged;
  std::size_t count = 0;
  std::size_t offences = 0;
  std::vector<std::size_t> witnesses;
  for (const auto& e : trace.events) {
    if (e.bin_id >= bins.size()) {
      bins.resize(e.bin_id + 1);
      flagged.resize(e.bin_id + 1, false);
    }
    BinTally& bin = bins[e.bin_id];
    bin.add(e.size);
    const bool now = pred(bin);
    if (now != flagged[e.bin_id]) {
      count = now ? count + 1 : count - 1;
      flagged[e.bin_id] = now;
    }
    if (count > limit) {
      if (offences == 0) {
        for (std::size_t id = 0; id < bins.size(); ++id) {
          if (flagged[id]) witnesses.push_back(id);
        }
      }
      ++offences;
    }
  }
  ClaimRecord r = make_record(std::move(name), std::move(description), offences, 0, witnesses);
  r.allowed_exceptions = limit;
  return r;
}

}  // namespace

TraceStats compute_t_sigma(const PackingTrace& trace) {
  TraceStats stats;
  for (const auto& e : trace.events) {
    if (e.load_before > kHalf) continue;
    if (e.size.value() <= kThird) stats.t_sigma = e.time;
    if (e.size.value() <= kQuarter) stats.t_sigma_prime = e.time;
  }
  for (std::size_t i = 0; i < stats.t_sigma; ++i) {
    const auto& s = trace.events[i].size;
    stats.total_volume_prefix += s.value();
    if (classify(s) == Category::Tiny) stats.tiny_volume_prefix += s.value();
  }
  return stats;
}

std::string_view claim_status_name(ClaimStatus s) noexcept {
  switch (s) {
    case ClaimStatus::Pass:
      return "pass";
    case ClaimStatus::Fail:
      return "fail";
    case ClaimStatus::NotApplicable:
      return "not-applicable";
    case ClaimStatus::Flagged:
      break;
  }
  return "flagged";
}

bool ClaimReport::all_pass() const {
  return std::none_of(records.begin(), records.end(),
                      [](const ClaimRecord& r) { return r.asserted && r.status == ClaimStatus::Fail; });
}

std::size_t ClaimReport::total_violations() const {
  std::size_t total = 0;
  for (const auto& r : records) {
    if (r.asserted) total += r.violations;
  }
  return total;
}

const ClaimRecord& ClaimReport::find(std::string_view name) const {
  for (const auto& r : records) {
    if (r.name == name) return r;
  }
  throw DomainError("no claim record named '" + std::string(name) + "'");
}

ClaimReport verify_structural_claims(const PackingTrace& trace) {
  ClaimReport report;
  const TraceStats ts = compute_t_sigma(trace);
  const std::size_t n = trace.events.size();

  report.records.push_back(early_bins_loaded(trace, ts.t_sigma, kTwoThirds, "a-load-above-2/3",
                                             "bins opened by t_sigma end with load > 2/3"));
  report.records.push_back(early_bins_loaded(trace, ts.t_sigma_prime, kThreeQuarters,
                                             "b-load-above-3/4",
                                             "bins opened by t'_sigma end with load > 3/4"));

  {
    std::vector<std::size_t> light;
    for (const auto& bin : trace.bins) {
      if (bin.contents.front().time > ts.t_sigma) continue;
      if (bin_weight_at(bin, ts.t_sigma) < 1) light.push_back(bin.id);
    }
    report.records.push_back(make_record("c-weight-at-least-one",
                                         "bins of BF(1..t_sigma) have weight >= 1", light.size(), 1,
                                         light));
  }

  report.records.push_back(every_prefix(
      trace, 2, [](const BinTally& b) { return b.large == 0 && b.load <= kTwoThirds; },
      "d-few-light-nonlarge-bins", "at every prefix <= 2 bins without a large item have load <= 2/3"));

  {
    const auto bins = tallies_at(trace, ts.t_sigma);
    std::vector<bool> light(bins.size(), false);
    std::vector<std::size_t> ids;
    for (std::size_t id = 0; id < bins.size(); ++id) {
      if (bins[id].opened_at != 0 && bins[id].load <= kThreeQuarters) {
        light[id] = true;
        ids.push_back(id);
      }
    }
    Rational tiny_volume = 0;
    for (std::size_t i = 0; i < ts.t_sigma; ++i) {
      const auto& e = trace.events[i];
      if (light[e.bin_id] && classify(e.size) == Category::Tiny) tiny_volume += e.size.value();
    }
    report.records.push_back(make_record("e-tiny-volume-in-light-bins",
                                         "tiny volume in bins of load <= 3/4 at t_sigma is <= 3/4",
                                         tiny_volume > kThreeQuarters ? 1 : 0, 0, ids));
  }

  report.records.push_back(every_prefix(
      trace, 1,
      [](const BinTally& b) {
        return b.large == 0 && b.medium == 1 && b.small == 0 && b.tiny > 0 && b.load <= kThreeQuarters;
      },
      "f-medium-bins-with-tiny", "at every prefix <= 1 M-bin with tiny items has load <= 3/4"));

  {
    const bool small_tiny_only = std::all_of(trace.events.begin(), trace.events.end(), [](const PackEvent& e) {
      return e.size.value() <= kThird;
    });
    const char* name = "g-small-tiny-bins-above-3/4";
    const char* description = "S/T-only instance: at every prefix all but <= 2 bins have load > 3/4";
    if (small_tiny_only) {
      report.records.push_back(every_prefix(
          trace, 2, [](const BinTally& b) { return b.load <= kThreeQuarters; }, name, description));
    } else {
      report.records.push_back(not_applicable(name, description));
    }
  }

  {
    const char* name = "ml-triplet-lm-bins";
    const char* description = "fitting ML triplets after t_sigma each complete a distinct LM bin";
    const bool only_lm_after = std::all_of(trace.events.begin() + static_cast<std::ptrdiff_t>(ts.t_sigma),
                                           trace.events.end(),
                                           [](const PackEvent& e) { return e.size.value() > kThird; });
    if (ts.t_sigma < n && only_lm_after) {
      Sequence seq;
      for (const auto& e : trace.events) seq.push_back(e.size);
      const std::size_t triplets = count_fitting_ml_triplets(seq, ts.t_sigma + 1, n, false);
      const std::size_t lm = lm_bins_completed_after(trace, ts.t_sigma);
      report.records.push_back(make_record(name, description, triplets > lm ? triplets - lm : 0, 0, {}));
    } else {
      report.records.push_back(not_applicable(name, description));
    }
  }

  {
    ClaimRecord r;
    r.name = "s-triplet-heavy-bins";
    r.description = "kappa S-triplets in (t'_sigma, t_sigma] give >= kappa/2 - 4 bins of weight >= 3/2";
    r.asserted = false;
    if (ts.t_sigma_prime < ts.t_sigma) {
      Sequence seq;
      for (const auto& e : trace.events) seq.push_back(e.size);
      const std::size_t kappa = count_s_triplets(seq, ts.t_sigma_prime + 1, ts.t_sigma);
      const std::size_t heavy = heavy_bins_at(trace, ts.t_sigma);
      // heavy >= kappa/2 - C  <=>  2*heavy + 2*C >= kappa
      r.status = 2 * heavy + 2 * kSTripletSlack >= kappa ? ClaimStatus::Pass : ClaimStatus::Flagged;
      r.violations = r.status == ClaimStatus::Flagged ? 1 : 0;
    } else {
      r.status = ClaimStatus::NotApplicable;
    }
    report.records.push_back(std::move(r));
  }
  return report;
}

std::size_t count_s_triplets(std::span<const ExactSize> sequence, std::size_t first, std::size_t last) {
  check_range(sequence.size(), first, last);
  std::size_t count = 0;
  std::size_t run = 0;
  for (std::size_t i = first - 1; i < last; ++i) {
    switch (classify(sequence[i])) {
      case Category::Tiny:
        break;
      case Category::Small:
        if (++run == 3) {
          ++count;
          run = 0;
        }
        break;
      default:
        run = 0;
        break;
    }
  }
  return count;
}

std::size_t count_s_triplets(std::span<const ExactSize> sequence) {
  return sequence.empty() ? 0 : count_s_triplets(sequence, 1, sequence.size());
}

std::size_t count_fitting_ml_triplets(std::span<const ExactSize> sequence, std::size_t first,
                                      std::size_t last, bool allow_small) {
  check_range(sequence.size(), first, last);
  std::vector<const ExactSize*> kept;
  for (std::size_t i = first - 1; i < last; ++i) {
    const Category c = classify(sequence[i]);
    if (c == Category::Large || c == Category::Medium || (allow_small && c == Category::Small)) {
      kept.push_back(&sequence[i]);
    }
  }
  auto is_partner = [&](const ExactSize& s) {
    const Category c = classify(s);
    return c == Category::Medium || (allow_small && c == Category::Small);
  };
  auto matches_at = [&](std::size_t i) {
    for (std::size_t k = 0; k < 3; ++k) {
      const ExactSize& q = *kept[i + 2 * k];
      const ExactSize& l = *kept[i + 2 * k + 1];
      if (!is_partner(q) || classify(l) != Category::Large || q.value() + l.value() > 1) return false;
    }
    return true;
  };
  std::size_t count = 0;
  std::size_t i = 0;
  while (i + 6 <= kept.size()) {
    if (matches_at(i)) {
      ++count;
      i += 6;
    } else {
      ++i;
    }
  }
  return count;
}

std::size_t count_fitting_ml_triplets(std::span<const ExactSize> sequence, bool allow_small) {
  return sequence.empty() ? 0 : count_fitting_ml_triplets(sequence, 1, sequence.size(), allow_small);
}

OptBinProfile profile_opt_bins(const Packing& packing) {
  OptBinProfile p;
  std::size_t type1 = 0;
  std::size_t type_lm_ls = 0;
  std::size_t type_three = 0;
  for (const auto& bin : packing) {
    if (bin.empty()) throw DomainError("empty bin in packing");
    std::size_t large = 0;
    std::size_t medium = 0;
    std::size_t small = 0;
    Rational load = 0;
    for (const auto& item : bin) {
      load += item.value();
      switch (classify(item)) {
        case Category::Large:
          ++large;
          break;
        case Category::Medium:
          ++medium;
          break;
        case Category::Small:
          ++small;
          break;
        case Category::Tiny:
          throw DomainError("bin profile is defined only for Large/Medium/Small items");
      }
    }
    if (load > 1) throw DomainError("bin load " + to_fraction_string(load) + " exceeds capacity");
    const std::size_t k = large + medium + small;
    if (large == 1 && k == 1) {
      ++type1;
    } else if (large == 1) {
      ++type_lm_ls;
    } else if (k == 2 && medium >= 1) {
      ++type1;  // MS, MM
    } else if (k == 3) {
      ++type_three;  // MMS, MSS, SSS
    } else {
      ++p.exceptional;  // M, S, SS
    }
  }
  p.total = packing.size();
  if (p.total > 0) {
    const Rational total{static_cast<long>(p.total)};
    p.beta = Rational{static_cast<long>(type1)} / total;
    p.r1 = Rational{static_cast<long>(type_lm_ls)} / total;
    p.r2 = Rational{static_cast<long>(type_three)} / total;
  }
  return p;
}

PostTSigmaStats post_t_sigma_stats(const PackingTrace& trace, const Packing& opt_suffix_packing) {
  const TraceStats ts = compute_t_sigma(trace);
  PostTSigmaStats out;
  std::vector<Rational> suffix;
  for (std::size_t i = ts.t_sigma; i < trace.events.size(); ++i) {
    const auto& s = trace.events[i].size;
    const Category c = classify(s);
    if (c == Category::Large) ++out.ell_hat;
    if (c == Category::Medium) ++out.m_hat;
    if (c == Category::Large || c == Category::Medium) suffix.push_back(s.value());
  }
  std::vector<Rational> packed;
  for (const auto& bin : opt_suffix_packing) {
    std::size_t large = 0;
    std::size_t medium = 0;
    Rational load = 0;
    for (const auto& item : bin) {
      packed.push_back(item.value());
      load += item.value();
      const Category c = classify(item);
      large += c == Category::Large ? 1 : 0;
      medium += c == Category::Medium ? 1 : 0;
    }
    if (load > 1) throw DomainError("suffix packing has an overfull bin");
    if (large == 1 && medium == 1) ++out.b_hat;
  }
  std::sort(suffix.begin(), suffix.end());
  std::sort(packed.begin(), packed.end());
  if (suffix != packed) {
    throw DomainError("suffix packing does not cover exactly the Large/Medium items after t_sigma");
  }
  out.n_sigma = bins_opened_by(trace, trace.events.size()) - bins_opened_by(trace, ts.t_sigma);
  out.opt_suffix = opt_suffix_packing.size();
  // 2*n_sigma <= 2*ell + m + 2
  out.n_sigma_bound_holds = 2 * out.n_sigma <= 2 * out.ell_hat + out.m_hat + 2;
  const Rational formula = Rational{static_cast<long>(out.ell_hat)} +
                           Rational{static_cast<long>(out.m_hat - out.b_hat), 2};
  out.opt_formula_holds = Integer{static_cast<long>(out.opt_suffix)} == ceil_of(formula);
  return out;
}

PostTSigmaStats post_t_sigma_stats(const PackingTrace& trace) {
  const TraceStats ts = compute_t_sigma(trace);
  Sequence suffix;
  for (std::size_t i = ts.t_sigma; i < trace.events.size(); ++i) {
    const auto& s = trace.events[i].size;
    if (s.value() > kThird) suffix.push_back(s);
  }
  return post_t_sigma_stats(trace, opt_large_medium(suffix));
}

std::size_t lm_bins_completed_after(const PackingTrace& trace, std::size_t t) {
  std::size_t count = 0;
  for (const auto& bin : trace.bins) {
    std::size_t first_large = 0;
    std::size_t first_medium = 0;
    for (const auto& item : bin.contents) {
      const Category c = classify(item.size);
      if (c == Category::Large && first_large == 0) first_large = item.time;
      if (c == Category::Medium && first_medium == 0) first_medium = item.time;
    }
    if (first_large != 0 && first_medium != 0 && std::max(first_large, first_medium) > t) ++count;
  }
  return count;
}

std::size_t heavy_bins_at(const PackingTrace& trace, std::size_t t) {
  std::size_t count = 0;
  for (const auto& bin : trace.bins) {
    if (bin.contents.front().time <= t && bin_weight_at(bin, t) >= kThreeHalves) ++count;
  }
  return count;
}

}  // namespace bpro
