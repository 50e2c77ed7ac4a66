#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bpro/rational.hpp"

namespace bpro {

// An item size: an exact rational in (0, 1], in units of bin capacity.
class ExactSize {
 public:
  // Throws DomainError unless 0 < value <= 1.
  explicit ExactSize(Rational value);
  ExactSize(std::int64_t num, std::int64_t den) : ExactSize(make_rational(num, den)) {}

  [[nodiscard]] const Rational& value() const noexcept { return value_; }

  friend bool operator==(const ExactSize& a, const ExactSize& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const ExactSize& a, const ExactSize& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_;
};

// Ordered so that Tiny < Small < Medium < Large.
enum class Category { Tiny, Small, Medium, Large };

// Large (1/2,1], Medium (1/3,1/2], Small (1/4,1/3], Tiny (0,1/4].
Category classify(const Rational& size);
inline Category classify(const ExactSize& size) { return classify(size.value()); }

// 1 for Large, 1/2 for Medium and Small, 3*size for Tiny.
Rational weight(const Rational& size);
inline Rational weight(const ExactSize& size) { return weight(size.value()); }

char category_code(Category c) noexcept;
std::string_view category_name(Category c) noexcept;

// Decimal ("0.245") or fraction ("1/3") text to a size; ParseError on malformed
// text, DomainError when the value is outside (0,1].
ExactSize parse_size(std::string_view text);

using Sequence = std::vector<ExactSize>;

Rational volume(std::span<const ExactSize> items);

// A bijection on positions; position i of the permuted list holds item at(i).
class Permutation {
 public:
  // Throws DomainError if `mapping` is not a bijection on 0..n-1.
  explicit Permutation(std::vector<std::size_t> mapping);
  static Permutation identity(std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return mapping_.size(); }
  [[nodiscard]] std::size_t at(std::size_t i) const { return mapping_.at(i); }
  [[nodiscard]] const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }

 private:
  std::vector<std::size_t> mapping_;
};

// The canonical (unpermuted) item list I.
struct Instance {
  Sequence items;
  std::optional<std::string> id;

  [[nodiscard]] std::size_t size() const noexcept { return items.size(); }
  [[nodiscard]] bool empty() const noexcept { return items.empty(); }

  // I_sigma. Throws DomainError on a length mismatch.
  [[nodiscard]] Sequence permuted(const Permutation& sigma) const;
};

// One size per line; blank lines and '#' comments are ignored. Errors carry the
// offending line number.
Instance parse_instance(std::istream& in);
Instance read_instance_file(const std::string& path);

}  // namespace bpro
