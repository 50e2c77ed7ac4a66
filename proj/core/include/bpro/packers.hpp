#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bpro/core.hpp"

namespace bpro {

enum class Algorithm { BestFit, FirstFit, NextFit };

std::string_view algorithm_name(Algorithm a) noexcept;
// Accepts "best-fit", "first-fit", "next-fit"; DomainError otherwise.
Algorithm parse_algorithm(std::string_view name);

struct BinItem {
  std::size_t time;  // 1-based arrival index
  ExactSize size;
};

struct Bin {
  std::size_t id;  // opening order, 0-based
  Rational load;
  std::vector<BinItem> contents;
};

struct PackEvent {
  std::size_t time;  // 1-based arrival index
  ExactSize size;
  std::size_t bin_id;
  Rational load_before;
  bool opened_new;
};

// Replayable record of one online packing run.
struct PackingTrace {
  Algorithm algorithm = Algorithm::BestFit;
  std::vector<PackEvent> events;
  std::vector<Bin> bins;

  [[nodiscard]] std::size_t size() const noexcept { return events.size(); }
  [[nodiscard]] std::size_t bin_count() const noexcept { return bins.size(); }
};

// Fullest bin that fits; ties go to the smallest bin id.
PackingTrace best_fit(std::span<const ExactSize> sequence);
// Lowest-id bin that fits.
PackingTrace first_fit(std::span<const ExactSize> sequence);
// Only the most recently opened bin is a candidate.
PackingTrace next_fit(std::span<const ExactSize> sequence);

PackingTrace pack(Algorithm algorithm, std::span<const ExactSize> sequence);

// Number of bins opened by arrival time t (0 <= t <= trace length).
std::size_t bins_opened_by(const PackingTrace& trace, std::size_t t);

// Rebuilds final bins from the event log alone. Throws InvariantError if an
// event would overflow a bin or references an unopened bin.
std::vector<Bin> replay(const PackingTrace& trace);

// Best-Fit without a trace, for long streams. Keeps only the loads of bins
// that can still take something.
class BestFitCounter {
 public:
  // Packs one item; returns true when it opened a new bin.
  bool add(const Rational& size);

  [[nodiscard]] std::size_t bins() const noexcept { return bins_; }

 private:
  struct Order {
    bool operator()(const std::pair<Rational, std::size_t>& a,
                    const std::pair<Rational, std::size_t>& b) const {
      const int c = cmp(a.first, b.first);
      return c > 0 || (c == 0 && a.second < b.second);
    }
  };
  std::set<std::pair<Rational, std::size_t>, Order> open_;
  std::size_t bins_ = 0;
};

}  // namespace bpro
