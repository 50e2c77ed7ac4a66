#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bpro/core.hpp"
#include "bpro/packers.hpp"

namespace bpro {

// t_sigma: last arrival at which a size <= 1/3 item went into a bin of load at
// most 1/2 (opening a bin counts, load 0). t_sigma_prime: same for size <= 1/4.
// Both are 0 when no such arrival exists.
struct TraceStats {
  std::size_t t_sigma = 0;
  std::size_t t_sigma_prime = 0;
  Rational tiny_volume_prefix = 0;   // tiny items among arrivals 1..t_sigma
  Rational total_volume_prefix = 0;  // all items among arrivals 1..t_sigma
};

TraceStats compute_t_sigma(const PackingTrace& trace);

enum class ClaimStatus { Pass, Fail, NotApplicable, Flagged };

std::string_view claim_status_name(ClaimStatus s) noexcept;

struct ClaimRecord {
  std::string name;
  std::string description;
  ClaimStatus status = ClaimStatus::Pass;
  // Offenders beyond the allowed number of exceptions.
  std::size_t violations = 0;
  std::size_t allowed_exceptions = 0;
  // Bin ids involved in the first observed offence.
  std::vector<std::size_t> witnesses;
  // Heuristic records are reported but never count as failures.
  bool asserted = true;
};

struct ClaimReport {
  std::vector<ClaimRecord> records;

  // True when no asserted record failed.
  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] std::size_t total_violations() const;
  [[nodiscard]] const ClaimRecord& find(std::string_view name) const;
};

// Runs the Best-Fit structural checks (a)-(g), the fitting ML-triplet check
// and the S-triplet heuristic (slack C = 4) on a Best-Fit trace.
ClaimReport verify_structural_claims(const PackingTrace& trace);

// Maximum number of disjoint S-triplets inside arrivals [first, last]
// (1-based, inclusive): three Small items adjacent once Tiny items are
// dropped. Throws DomainError on an invalid range.
std::size_t count_s_triplets(std::span<const ExactSize> sequence, std::size_t first, std::size_t last);
std::size_t count_s_triplets(std::span<const ExactSize> sequence);

// Maximum number of disjoint fitting triplets q1 l1 q2 l2 q3 l3 inside
// [first, last]: each q Medium (or Small when allow_small), each l Large,
// q_i + l_i <= 1, adjacent after filtering out Small and Tiny items (only Tiny
// when allow_small).
std::size_t count_fitting_ml_triplets(std::span<const ExactSize> sequence, std::size_t first,
                                      std::size_t last, bool allow_small);
std::size_t count_fitting_ml_triplets(std::span<const ExactSize> sequence, bool allow_small);

using BinContents = std::vector<ExactSize>;
using Packing = std::vector<BinContents>;

// Bin-type fractions of a packing of Large/Medium/Small items.
struct OptBinProfile {
  Rational beta = 0;  // L, MS, MM
  Rational r1 = 0;    // LM, LS
  Rational r2 = 0;    // MMS, MSS, SSS
  std::size_t exceptional = 0;  // M, S, SS
  std::size_t total = 0;
};

// Throws DomainError on a tiny item or an overfull bin.
OptBinProfile profile_opt_bins(const Packing& packing);

struct PostTSigmaStats {
  std::size_t ell_hat = 0;  // Large items after t_sigma
  std::size_t m_hat = 0;    // Medium items after t_sigma
  std::size_t b_hat = 0;    // LM bins in the supplied optimal suffix packing
  std::size_t n_sigma = 0;  // bins opened after t_sigma
  std::size_t opt_suffix = 0;
  bool n_sigma_bound_holds = true;  // n_sigma <= ell + m/2 + 1
  bool opt_formula_holds = true;    // opt_suffix == ceil(ell + (m - b)/2)
};

// `opt_suffix_packing` must be an optimal packing of the Large and Medium
// items arriving after t_sigma; DomainError when it does not cover exactly
// those items.
PostTSigmaStats post_t_sigma_stats(const PackingTrace& trace, const Packing& opt_suffix_packing);
// Computes the optimal suffix packing itself.
PostTSigmaStats post_t_sigma_stats(const PackingTrace& trace);

// LM bins whose L/M pair completed after time t.
std::size_t lm_bins_completed_after(const PackingTrace& trace, std::size_t t);

// Bins of BF(1..t) with weight >= 3/2, counting only items that arrived by t.
std::size_t heavy_bins_at(const PackingTrace& trace, std::size_t t);

}  // namespace bpro
