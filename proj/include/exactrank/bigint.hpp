#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace exactrank {

using BigInt = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms. mpq_class's two-argument constructor does not reduce.
inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt binomial(std::int64_t n, std::int64_t k);

// Correctly rounded (round-to-nearest-even) conversion. mpq_get_d truncates,
// which would break float/rational agreement in reports.
double to_double(const Rational& value);
double to_double(const BigInt& value);

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Canonical "num/den" text ("1/10", "7/40"); integers print without "/1".
std::string to_string(const Rational& value);

/// Accepts "a/b", integers and plain decimals ("0.3" is exactly 3/10).
Rational parse_rational(std::string_view text);

/// Renders a doubled lattice value as an exact decimal: 13 -> "6.5", -1 -> "-0.5".
std::string doubled_to_decimal(std::int64_t doubled);

/// Parses an integer or half-integer decimal ("2.5", "3", "4.50") and returns
/// twice its value. Anything with a denominator above 2 is an InputError.
std::int64_t parse_doubled(std::string_view text);

}  // namespace exactrank
