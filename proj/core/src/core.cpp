#include "bpro/core.hpp"

#include <fstream>
#include <utility>

#include "bpro/error.hpp"

namespace bpro {

namespace {

const Rational kHalf{1, 2};
const Rational kThird{1, 3};
const Rational kQuarter{1, 4};

void require_size_domain(const Rational& size) {
  if (sgn(size) <= 0 || size > 1) {
    throw DomainError("size " + to_fraction_string(size) + " is outside (0,1]");
  }
}

}  // namespace

ExactSize::ExactSize(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  require_size_domain(value_);
}

Category classify(const Rational& size) {
  require_size_domain(size);
  if (size > kHalf) return Category::Large;
  if (size > kThird) return Category::Medium;
  if (size > kQuarter) return Category::Small;
  return Category::Tiny;
}

Rational weight(const Rational& size) {
  switch (classify(size)) {
    case Category::Large:
      return Rational{1};
    case Category::Medium:
    case Category::Small:
      return kHalf;
    case Category::Tiny:
      break;
  }
  return Rational{3 * size};
}

char category_code(Category c) noexcept {
  switch (c) {
    case Category::Large:
      return 'L';
    case Category::Medium:
      return 'M';
    case Category::Small:
      return 'S';
    case Category::Tiny:
      break;
  }
  return 'T';
}

std::string_view category_name(Category c) noexcept {
  switch (c) {
    case Category::Large:
      return "large";
    case Category::Medium:
      return "medium";
    case Category::Small:
      return "small";
    case Category::Tiny:
      break;
  }
  return "tiny";
}

ExactSize parse_size(std::string_view text) { return ExactSize{parse_rational(text)}; }

Rational volume(std::span<const ExactSize> items) {
  Rational total = 0;
  for (const auto& x : items) total += x.value();
  return total;
}

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t v : mapping_) {
    if (v >= mapping_.size() || seen[v]) throw DomainError("permutation is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = i;
  return Permutation{std::move(m)};
}

Sequence Instance::permuted(const Permutation& sigma) const {
  if (sigma.size() != items.size()) throw DomainError("permutation length differs from instance length");
  Sequence out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) out.push_back(items[sigma.at(i)]);
  return out;
}

Instance parse_instance(std::istream& in) {
  Instance inst;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      inst.items.push_back(parse_size(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file '" + path + "'");
  Instance inst = parse_instance(in);
  inst.id = path;
  return inst;
}

}  // namespace bpro
