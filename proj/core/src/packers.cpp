#include "bpro/packers.hpp"

#include <string>

#include "bpro/error.hpp"

namespace bpro {

namespace {

// Segment tree of free capacity; finds the lowest-index bin with enough room.
class FreeSpaceTree {
 public:
  explicit FreeSpaceTree(std::size_t capacity) {
    while (leaves_ < capacity) leaves_ *= 2;
    tree_.assign(2 * leaves_, Rational{0});
  }

  void set(std::size_t index, const Rational& free) {
    std::size_t node = index + leaves_;
    tree_[node] = free;
    for (node /= 2; node >= 1; node /= 2) {
      tree_[node] = tree_[2 * node] > tree_[2 * node + 1] ? tree_[2 * node] : tree_[2 * node + 1];
    }
  }

  // Lowest index whose free capacity is >= need, or npos.
  [[nodiscard]] std::size_t first_fitting(const Rational& need) const {
    if (tree_[1] < need) return npos;
    std::size_t node = 1;
    while (node < leaves_) node = tree_[2 * node] >= need ? 2 * node : 2 * node + 1;
    return node - leaves_;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t leaves_ = 1;
  std::vector<Rational> tree_;
};

struct TraceBuilder {
  explicit TraceBuilder(Algorithm a, std::size_t n) { trace.algorithm = a; trace.events.reserve(n); }

  std::size_t open(std::size_t time, const ExactSize& size) {
    const std::size_t id = trace.bins.size();
    trace.bins.push_back(Bin{id, Rational{0}, {}});
    place(time, size, id, true);
    return id;
  }

  void place(std::size_t time, const ExactSize& size, std::size_t id, bool opened = false) {
    Bin& bin = trace.bins[id];
    trace.events.push_back(PackEvent{time, size, id, bin.load, opened});
    bin.load += size.value();
    bin.contents.push_back(BinItem{time, size});
  }

  PackingTrace trace;
};

}  // namespace

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::BestFit:
      return "best-fit";
    case Algorithm::FirstFit:
      return "first-fit";
    case Algorithm::NextFit:
      break;
  }
  return "next-fit";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "best-fit") return Algorithm::BestFit;
  if (name == "first-fit") return Algorithm::FirstFit;
  if (name == "next-fit") return Algorithm::NextFit;
  throw DomainError("unknown packing algorithm '" + std::string(name) + "'");
}

PackingTrace best_fit(std::span<const ExactSize> sequence) {
  struct Order {
    bool operator()(const std::pair<Rational, std::size_t>& a,
                    const std::pair<Rational, std::size_t>& b) const {
      const int c = cmp(a.first, b.first);
      return c > 0 || (c == 0 && a.second < b.second);
    }
  };
  std::set<std::pair<Rational, std::size_t>, Order> by_load;
  TraceBuilder b(Algorithm::BestFit, sequence.size());
  std::size_t time = 0;
  for (const auto& item : sequence) {
    ++time;
    // First entry with load <= 1 - size: the fullest fitting bin, lowest id on ties.
    auto it = by_load.lower_bound({Rational{1 - item.value()}, 0});
    std::size_t id;
    if (it == by_load.end()) {
      id = b.open(time, item);
    } else {
      id = it->second;
      by_load.erase(it);
      b.place(time, item, id);
    }
    if (b.trace.bins[id].load < 1) by_load.emplace(b.trace.bins[id].load, id);
  }
  return std::move(b.trace);
}

PackingTrace first_fit(std::span<const ExactSize> sequence) {
  FreeSpaceTree tree(sequence.size());
  TraceBuilder b(Algorithm::FirstFit, sequence.size());
  std::size_t time = 0;
  for (const auto& item : sequence) {
    ++time;
    std::size_t id = tree.first_fitting(item.value());
    if (id == FreeSpaceTree::npos || id >= b.trace.bins.size()) {
      id = b.open(time, item);
    } else {
      b.place(time, item, id);
    }
    tree.set(id, 1 - b.trace.bins[id].load);
  }
  return std::move(b.trace);
}

PackingTrace next_fit(std::span<const ExactSize> sequence) {
  TraceBuilder b(Algorithm::NextFit, sequence.size());
  std::size_t time = 0;
  for (const auto& item : sequence) {
    ++time;
    if (b.trace.bins.empty() || b.trace.bins.back().load + item.value() > 1) {
      b.open(time, item);
    } else {
      b.place(time, item, b.trace.bins.size() - 1);
    }
  }
  return std::move(b.trace);
}

PackingTrace pack(Algorithm algorithm, std::span<const ExactSize> sequence) {
  switch (algorithm) {
    case Algorithm::BestFit:
      return best_fit(sequence);
    case Algorithm::FirstFit:
      return first_fit(sequence);
    case Algorithm::NextFit:
      break;
  }
  return next_fit(sequence);
}

std::size_t bins_opened_by(const PackingTrace& trace, std::size_t t) {
  if (t > trace.events.size()) {
    throw DomainError("time " + std::to_string(t) + " exceeds trace length " +
                      std::to_string(trace.events.size()));
  }
  std::size_t opened = 0;
  for (std::size_t i = 0; i < t; ++i) opened += trace.events[i].opened_new ? 1 : 0;
  return opened;
}

std::vector<Bin> replay(const PackingTrace& trace) {
  std::vector<Bin> bins;
  for (const auto& e : trace.events) {
    if (e.opened_new) {
      if (e.bin_id != bins.size()) throw InvariantError("bin opened out of order");
      bins.push_back(Bin{e.bin_id, Rational{0}, {}});
    }
    if (e.bin_id >= bins.size()) throw InvariantError("event references an unopened bin");
    Bin& bin = bins[e.bin_id];
    if (bin.load != e.load_before) throw InvariantError("recorded load_before disagrees with replay");
    bin.load += e.size.value();
    if (bin.load > 1) throw InvariantError("bin overflows capacity on replay");
    bin.contents.push_back(BinItem{e.time, e.size});
  }
  return bins;
}

bool BestFitCounter::add(const Rational& size) {
  auto it = open_.lower_bound({Rational{1 - size}, 0});
  if (it == open_.end()) {
    const std::size_t id = bins_++;
    if (size < 1) open_.emplace(size, id);
    return true;
  }
  auto node = open_.extract(it);
  node.value().first += size;
  if (node.value().first < 1) open_.insert(std::move(node));
  return false;
}

}  // namespace bpro
