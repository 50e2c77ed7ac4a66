#include "bpro/rational.hpp"

#include <cctype>
#include <limits>
#include <string>

#include "bpro/error.hpp"

namespace bpro {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty number");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = trim(s.substr(0, slash));
    const auto den = trim(s.substr(slash + 1));
    if (num.empty() || den.empty() || !all_digits(num) || !all_digits(den)) {
      throw ParseError("malformed fraction '" + std::string(s) + "'");
    }
    Integer d{std::string(den), 10};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    Rational r{Integer{std::string(num), 10}, d};
    r.canonicalize();
    return r;
  }

  const auto dot = s.find('.');
  const auto int_part = s.substr(0, dot);
  const auto frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if ((int_part.empty() && frac_part.empty()) || !all_digits(int_part) || !all_digits(frac_part)) {
    throw ParseError("malformed decimal '" + std::string(s) + "'");
  }
  std::string digits{int_part};
  digits += frac_part;
  Integer den = 1;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
  Rational r{Integer{digits, 10}, den};
  r.canonicalize();
  return r;
}

std::string to_fraction_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal_string(const Rational& value, int digits) {
  const bool negative = sgn(value) < 0;
  const Rational magnitude = abs(value);
  Integer scale = 1;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // round half up: floor(|v| * 10^d + 1/2)
  const Integer scaled = floor_of(magnitude * scale + Rational(1, 2));
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) {
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    }
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && scaled != 0) s.insert(0, "-");
  return s;
}

double to_double(const Rational& value) { return value.get_d(); }

Integer ceil_of(const Rational& value) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

Integer floor_of(const Rational& value) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

std::int64_t to_int64(const Integer& value) {
  if (!value.fits_slong_p()) throw DomainError("integer " + value.get_str() + " does not fit 64 bits");
  static_assert(sizeof(long) == sizeof(std::int64_t));
  return value.get_si();
}

}  // namespace bpro
