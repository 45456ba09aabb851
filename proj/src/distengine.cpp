#include "exactrank/distengine.hpp"

#include <algorithm>
#include <string>

#include "exactrank/errors.hpp"

namespace exactrank {
namespace {

// A polynomial stored as a contiguous coefficient window starting at `low`.
struct Window {
  std::int64_t low = 0;
  std::vector<BigInt> coeffs;

  std::int64_t high() const { return low + static_cast<std::int64_t>(coeffs.size()) - 1; }
};

// Multiplies out prod (1 + z x^d) keeping rows k in [k_floor(i), k_ceil],
// where k_floor(i) = target_min - (remaining factors) drops rows that can no
// longer reach target_min.
std::vector<Window> expand(std::span<const std::int64_t> doubled, int target_min, int k_ceil) {
  const int n = static_cast<int>(doubled.size());
  std::vector<Window> rows(static_cast<std::size_t>(k_ceil) + 1);
  rows[0] = Window{0, {BigInt(1)}};
  int active_hi = 0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t d = doubled[static_cast<std::size_t>(i)];
    const int remaining = n - i - 1;
    const int new_hi = std::min(i + 1, k_ceil);
    const int new_lo = std::max(0, target_min - remaining);
    for (int k = new_hi; k >= std::max(new_lo, 1); --k) {
      const Window& src = rows[static_cast<std::size_t>(k - 1)];
      Window& dst = rows[static_cast<std::size_t>(k)];
      if (k > active_hi) {
        dst.low = src.low + d;
        dst.coeffs = src.coeffs;
        continue;
      }
      const std::int64_t src_low = src.low + d;
      if (src_low < dst.low) {
        dst.coeffs.insert(dst.coeffs.begin(), static_cast<std::size_t>(dst.low - src_low), BigInt(0));
        dst.low = src_low;
      }
      const std::int64_t src_high = src.high() + d;
      if (src_high > dst.high()) dst.coeffs.resize(static_cast<std::size_t>(src_high - dst.low + 1));
      auto* out = dst.coeffs.data() + (src_low - dst.low);
      for (std::size_t e = 0; e < src.coeffs.size(); ++e) {
        mpz_add(out[e].get_mpz_t(), out[e].get_mpz_t(), src.coeffs[e].get_mpz_t());
      }
    }
    for (int k = 0; k < new_lo; ++k) {
      if (!rows[static_cast<std::size_t>(k)].coeffs.empty()) {
        std::vector<BigInt>().swap(rows[static_cast<std::size_t>(k)].coeffs);
      }
    }
    active_hi = new_hi;
  }
  return rows;
}

ExactDist window_to_dist(const Window& row, int n1, int n2, bool reflect, std::int64_t total) {
  ExactDist out;
  out.n1 = n1;
  out.n2 = n2;
  out.denominator = binomial(n1 + n2, n1);
  const auto size = row.coeffs.size();
  for (std::size_t t = 0; t < size; ++t) {
    const std::size_t e = reflect ? size - 1 - t : t;
    const BigInt& c = row.coeffs[e];
    if (c == 0) continue;
    const std::int64_t x = row.low + static_cast<std::int64_t>(e);
    out.support.push_back(reflect ? total - x : x);
    out.counts.push_back(c);
  }
  return out;
}

void check_n1(int n1, int n) {
  if (n1 < 0 || n1 > n) {
    throw InputError("sample size n1=" + std::to_string(n1) + " outside [0, " +
                     std::to_string(n) + "]");
  }
}

}  // namespace

Rational ExactDist::probability(std::size_t index) const {
  Rational p(counts.at(index), denominator);
  p.canonicalize();
  return p;
}

BigInt ExactDist::count_at(std::int64_t doubled_w) const {
  auto it = std::lower_bound(support.begin(), support.end(), doubled_w);
  if (it == support.end() || *it != doubled_w) return 0;
  return counts[static_cast<std::size_t>(it - support.begin())];
}

Rational ExactDist::probability_at(std::int64_t doubled_w) const {
  Rational p(count_at(doubled_w), denominator);
  p.canonicalize();
  return p;
}

CoeffTable euler_expand(const RankMultiset& ranks, int k_max) {
  const int n = ranks.size();
  if (k_max < 0 || k_max > n) {
    throw InputError("k_max=" + std::to_string(k_max) + " outside [0, " + std::to_string(n) + "]");
  }
  auto rows = expand(ranks.doubled(), 0, k_max);
  CoeffTable table;
  table.total = n;
  table.k_max = k_max;
  table.rows.reserve(rows.size());
  for (auto& w : rows) {
    std::vector<BigInt> dense(static_cast<std::size_t>(w.low));
    dense.insert(dense.end(), std::make_move_iterator(w.coeffs.begin()),
                 std::make_move_iterator(w.coeffs.end()));
    table.rows.emplace_back(std::move(dense));
  }
  return table;
}

ExactDist dist_from_ranks(const RankMultiset& ranks, int n1) {
  const int n = ranks.size();
  check_n1(n1, n);
  const int n2 = n - n1;
  // Row n1 is row n2 reflected about N(N+1); expand the shorter one.
  const int k = std::min(n1, n2);
  auto rows = expand(ranks.doubled(), k, k);
  return window_to_dist(rows[static_cast<std::size_t>(k)], n1, n2, k != n1,
                        static_cast<std::int64_t>(n) * (n + 1));
}

ExactDist dist_from_table(const CoeffTable& table, int n1) {
  const int n = table.total;
  check_n1(n1, n);
  const int n2 = n - n1;
  const bool reflect = n1 > table.k_max;
  const int k = reflect ? n2 : n1;
  if (k > table.k_max) throw InputError("coefficient table does not hold row " + std::to_string(n1));
  const IntPoly& row = table.row(k);
  Window w{0, row.coeffs()};
  return window_to_dist(w, n1, n2, reflect, static_cast<std::int64_t>(n) * (n + 1));
}

ExactDist dist_no_ties(int n1, int n2) {
  if (n1 < 0 || n2 < 0 || n1 + n2 < 1) {
    throw InputError("sample sizes must be nonnegative with n1 + n2 >= 1");
  }
  const int k = std::min(n1, n2);
  IntPoly q = qbinomial(n1 + n2, k);
  // [N, n1]_q == [N, n2]_q. Its q^j term is the rank sum n1(n1+1)/2 + j.
  const std::int64_t offset = static_cast<std::int64_t>(n1) * (n1 + 1);
  ExactDist out;
  out.n1 = n1;
  out.n2 = n2;
  out.denominator = binomial(n1 + n2, n1);
  const auto& c = q.coeffs();
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0) continue;
    out.support.push_back(offset + 2 * static_cast<std::int64_t>(j));
    out.counts.push_back(c[j]);
  }
  return out;
}

Moments moments_exact(const ExactDist& dist) {
  BigInt first = 0;
  BigInt second = 0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const BigInt s(static_cast<long>(dist.support[i]));
    first += s * dist.counts[i];
    second += s * s * dist.counts[i];
  }
  Moments m;
  m.mean = Rational(first, dist.denominator * 2);
  m.mean.canonicalize();
  m.second_moment = Rational(second, dist.denominator * 4);
  m.second_moment.canonicalize();
  m.variance = m.second_moment - m.mean * m.mean;
  return m;
}

Moments moments_closed_form(const RankMultiset& ranks, int n1) {
  const int n = ranks.size();
  check_n1(n1, n);
  const int n2 = n - n1;
  Moments m;
  m.mean = Rational(static_cast<long>(n1) * (n + 1), 2);
  m.mean.canonicalize();
  if (n1 == 0 || n2 == 0) {
    m.variance = 0;
  } else {
    BigInt squares = 0;  // sum of (2R)^2
    for (auto d : ranks.doubled()) squares += BigInt(static_cast<long>(d)) * static_cast<long>(d);
    const Rational mean_square(squares, BigInt(4L * n));
    const Rational centre(BigInt(static_cast<long>(n + 1) * (n + 1)), 4);
    m.variance = Rational(static_cast<long>(n1) * n2, n - 1) * (mean_square - centre);
    m.variance.canonicalize();
  }
  m.second_moment = m.variance + m.mean * m.mean;
  return m;
}

Rational p_value(const ExactDist& dist, std::int64_t doubled_w, Alternative alternative,
                 TwoSidedMode mode) {
  BigInt below = 0;
  BigInt above = 0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    if (dist.support[i] <= doubled_w) below += dist.counts[i];
    if (dist.support[i] >= doubled_w) above += dist.counts[i];
  }
  BigInt tail;
  switch (alternative) {
    case Alternative::less:
      tail = below;
      break;
    case Alternative::greater:
      tail = above;
      break;
    case Alternative::two_sided:
      if (mode == TwoSidedMode::twice_min) {
        tail = 2 * (below < above ? below : above);
        if (tail > dist.denominator) tail = dist.denominator;
      } else {
        const BigInt observed = dist.count_at(doubled_w);
        tail = 0;
        for (const auto& c : dist.counts) {
          if (c <= observed) tail += c;
        }
      }
      break;
  }
  Rational p(tail, dist.denominator);
  p.canonicalize();
  return p;
}

std::int64_t u_from_w(std::int64_t doubled_w, int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw InputError("sample sizes must be nonnegative");
  return 2 * static_cast<std::int64_t>(n1) * n2 + static_cast<std::int64_t>(n2) * (n2 + 1) - doubled_w;
}

}  // namespace exactrank
