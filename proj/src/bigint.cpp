#include "exactrank/bigint.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include <mpfr.h>

#include "exactrank/errors.hpp"

namespace exactrank {

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

double to_double(const Rational& value) {
  mpfr_t tmp;
  mpfr_init2(tmp, 53);
  mpfr_set_q(tmp, value.get_mpq_t(), MPFR_RNDN);
  const double out = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

double to_double(const BigInt& value) {
  mpfr_t tmp;
  mpfr_init2(tmp, 53);
  mpfr_set_z(tmp, value.get_mpz_t(), MPFR_RNDN);
  const double out = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string to_string(const Rational& value) { return value.get_str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw InputError("malformed rational '" + original + "'");
    }
    BigInt d(std::string(den), 10);
    if (d == 0) throw InputError("zero denominator in '" + original + "'");
    out = Rational(BigInt(std::string(num), 10), d);
  } else {
    const auto dot = s.find('.');
    const auto whole = s.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)) ||
        (dot != std::string_view::npos && frac.empty() && whole.empty())) {
      throw InputError("malformed number '" + original + "'");
    }
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const std::string digits = std::string(whole) + std::string(frac);
    out = Rational(BigInt(digits.empty() ? "0" : digits, 10), scale);
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string doubled_to_decimal(std::int64_t doubled) {
  const bool negative = doubled < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(doubled + 1)) + 1
                                     : static_cast<std::uint64_t>(doubled);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / 2);
  if (mag % 2) out += ".5";
  return out;
}

std::int64_t parse_doubled(std::string_view text) {
  const Rational value = parse_rational(text);
  const Rational twice = value * 2;
  if (twice.get_den() != 1) {
    throw InputError("rank '" + std::string(trim(text)) +
                     "' is not an integer or half-integer");
  }
  if (!twice.get_num().fits_slong_p()) throw InputError("rank out of range");
  return twice.get_num().get_si();
}

}  // namespace exactrank
