#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "exactrank/bigint.hpp"

namespace exactrank {

/// Dense univariate polynomial with nonnegative big-integer coefficients.
/// Index i holds the coefficient of x^i. The highest stored coefficient is
/// always nonzero; the zero polynomial has no coefficients.
class IntPoly {
 public:
  IntPoly() = default;
  /// Trailing zeros are trimmed. Throws InputError on a negative coefficient.
  explicit IntPoly(std::vector<BigInt> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  static IntPoly one() { return monomial(0); }
  static IntPoly monomial(std::size_t exponent, const BigInt& coeff = 1);

  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  std::ptrdiff_t degree() const noexcept { return static_cast<std::ptrdiff_t>(coeffs_.size()) - 1; }
  /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
  std::size_t low_degree() const noexcept;
  /// Zero beyond the stored range.
  BigInt coeff(std::size_t exponent) const;

  BigInt eval(const BigInt& x) const;
  Rational eval(const Rational& x) const;
  /// Value at x = 1.
  BigInt sum() const;

  /// Multiply by x^by.
  IntPoly shifted(std::size_t by) const;
  /// Coefficient of x^e moves to x^(total - e). Requires total >= degree().
  IntPoly reflected(std::size_t total) const;

  IntPoly& operator+=(const IntPoly& other);
  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Human-readable form in ascending powers, e.g. "q^3 + q^4 + 2q^5".
  std::string to_string(const std::string& var = "q") const;

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

/// Schoolbook product.
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);

/// Gaussian binomial [n choose k]_q in whole q-steps, built with the Pascal
/// recurrence [n,k] = [n-1,k] + q^(n-k) [n-1,k-1]. Degree k(n-k).
IntPoly qbinomial(std::int64_t n, std::int64_t k);

/// z^k coefficient of prod_{i=1..n} (1 + z q^i): qbinomial(n,k) times q^(k(k+1)/2).
IntPoly rothe_row(std::int64_t n, std::int64_t k);

/// Number of partitions of w into at most `parts` parts, each in {1..max_part}.
BigInt bounded_partition_count(std::int64_t w, std::int64_t parts, std::int64_t max_part);

/// Number of sets of exactly `parts` distinct integers from {1..max_part}
/// summing to w. Zero for out-of-range w.
BigInt strict_partition_count(std::int64_t w, std::int64_t parts, std::int64_t max_part);

/// Truncated bivariate polynomial: rows[k] is the z^k coefficient, a
/// polynomial in x over the doubled-rank lattice.
struct CoeffTable {
  int total = 0;  // N, the number of linear factors expanded
  int k_max = 0;
  std::vector<IntPoly> rows;

  const IntPoly& row(int k) const;
  /// Sum of every coefficient in every row.
  BigInt grand_total() const;
  friend bool operator==(const CoeffTable&, const CoeffTable&) = default;
};

}  // namespace exactrank
