#include "exactrank/polycore.hpp"

#include <algorithm>
#include <sstream>

#include "exactrank/errors.hpp"

namespace exactrank {

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (sgn(c) < 0) throw InputError("IntPoly coefficients must be nonnegative");
  }
  trim();
}

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) {
    if (c < 0) throw InputError("IntPoly coefficients must be nonnegative");
    coeffs_.emplace_back(c);
  }
  trim();
}

IntPoly IntPoly::monomial(std::size_t exponent, const BigInt& coeff) {
  std::vector<BigInt> c(exponent + 1);
  c[exponent] = coeff;
  return IntPoly(std::move(c));
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::size_t IntPoly::low_degree() const noexcept {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) return i;
  }
  return 0;
}

BigInt IntPoly::coeff(std::size_t exponent) const {
  return exponent < coeffs_.size() ? coeffs_[exponent] : BigInt(0);
}

BigInt IntPoly::eval(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rational IntPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + Rational(*it);
  return acc;
}

BigInt IntPoly::sum() const {
  BigInt acc = 0;
  for (const auto& c : coeffs_) acc += c;
  return acc;
}

IntPoly IntPoly::shifted(std::size_t by) const {
  if (is_zero()) return {};
  IntPoly out;
  out.coeffs_.resize(coeffs_.size() + by);
  std::copy(coeffs_.begin(), coeffs_.end(), out.coeffs_.begin() + static_cast<std::ptrdiff_t>(by));
  return out;
}

IntPoly IntPoly::reflected(std::size_t total) const {
  if (is_zero()) return {};
  if (total < coeffs_.size() - 1) throw InputError("reflection total below degree");
  std::vector<BigInt> out(total + 1);
  for (std::size_t e = 0; e < coeffs_.size(); ++e) out[total - e] = coeffs_[e];
  return IntPoly(std::move(out));
}

IntPoly& IntPoly::operator+=(const IntPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

std::string IntPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t e = 0; e < coeffs_.size(); ++e) {
    const auto& c = coeffs_[e];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (e == 0) {
      os << c.get_str();
      continue;
    }
    if (c != 1) os << c.get_str();
    os << var;
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  std::vector<BigInt> out(ac.size() + bc.size() - 1);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i] == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), ac[i].get_mpz_t(), bc[j].get_mpz_t());
    }
  }
  return IntPoly(std::move(out));
}

IntPoly qbinomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw InputError("qbinomial requires 0 <= k <= n (got n=" + std::to_string(n) +
                     ", k=" + std::to_string(k) + ")");
  }
  // One row of the q-Pascal triangle at a time, updated in place from the
  // highest column down so column j-1 still holds row i-1 when it is read.
  // Column j of row i is only needed while j >= k - (n - i).
  std::vector<std::vector<BigInt>> col(static_cast<std::size_t>(k) + 1);
  col[0] = {BigInt(1)};
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t hi = std::min(i, k);
    const std::int64_t lo = std::max<std::int64_t>(1, k - (n - i));
    for (std::int64_t j = hi; j >= lo; --j) {
      auto& dst = col[static_cast<std::size_t>(j)];
      const auto& src = col[static_cast<std::size_t>(j - 1)];
      const auto shift = static_cast<std::size_t>(i - j);
      if (dst.size() < src.size() + shift) dst.resize(src.size() + shift);
      for (std::size_t e = 0; e < src.size(); ++e) dst[e + shift] += src[e];
    }
    if (lo >= 2) {
      // Column lo-1 can no longer reach column k.
      std::vector<BigInt>().swap(col[static_cast<std::size_t>(lo - 1)]);
    }
  }
  return IntPoly(std::move(col[static_cast<std::size_t>(k)]));
}

IntPoly rothe_row(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw InputError("rothe_row requires 0 <= k <= n");
  }
  return qbinomial(n, k).shifted(static_cast<std::size_t>(k * (k + 1) / 2));
}

BigInt bounded_partition_count(std::int64_t w, std::int64_t parts, std::int64_t max_part) {
  if (parts < 0 || max_part < 0) throw InputError("partition bounds must be nonnegative");
  if (w < 0) return 0;
  return qbinomial(max_part + parts, parts).coeff(static_cast<std::size_t>(w));
}

BigInt strict_partition_count(std::int64_t w, std::int64_t parts, std::int64_t max_part) {
  if (parts < 0 || max_part < 0) throw InputError("partition bounds must be nonnegative");
  if (parts > max_part) return 0;
  // Subtracting i from the i-th smallest part maps strict partitions onto
  // partitions into at most `parts` parts no larger than max_part - parts.
  return bounded_partition_count(w - parts * (parts + 1) / 2, parts, max_part - parts);
}

const IntPoly& CoeffTable::row(int k) const {
  if (k < 0 || k > k_max) throw InputError("row index outside the stored z-degrees");
  return rows[static_cast<std::size_t>(k)];
}

BigInt CoeffTable::grand_total() const {
  BigInt acc = 0;
  for (const auto& r : rows) acc += r.sum();
  return acc;
}

}  // namespace exactrank
