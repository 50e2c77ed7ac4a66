#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace bpro {

// Arbitrary-precision rational; always kept canonical (lowest terms, positive
// denominator).
using Rational = mpq_class;
using Integer = mpz_class;

// Parses a non-negative finite decimal ("0.245", ".5", "3") or a fraction
// ("p/q") into an exact rational. Throws ParseError on malformed text.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& value);

// Decimal rendering rounded half-up to `digits` places after the point.
std::string to_decimal_string(const Rational& value, int digits = 10);

double to_double(const Rational& value);

Integer ceil_of(const Rational& value);
Integer floor_of(const Rational& value);

// Narrowing conversion; throws DomainError when out of range.
std::int64_t to_int64(const Integer& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r{Integer{static_cast<long>(num)}, Integer{static_cast<long>(den)}};
  r.canonicalize();
  return r;
}

}  // namespace bpro
