#pragma once

#include <cstdint>
#include <vector>

#include "exactrank/bigint.hpp"
#include "exactrank/polycore.hpp"
#include "exactrank/ranks.hpp"

namespace exactrank {

enum class Alternative { less, greater, two_sided };
enum class TwoSidedMode { twice_min, minlike };

/// Exact null distribution of the rank sum W of a sample of size n1. The
/// support holds doubled rank sums in strictly increasing order; counts are
/// parallel and sum to the denominator, binomial(n1 + n2, n1).
struct ExactDist {
  int n1 = 0;
  int n2 = 0;
  std::vector<std::int64_t> support;
  std::vector<BigInt> counts;
  BigInt denominator = 1;

  Rational probability(std::size_t index) const;
  /// Zero when the value is not a support point.
  Rational probability_at(std::int64_t doubled_w) const;
  BigInt count_at(std::int64_t doubled_w) const;

  friend bool operator==(const ExactDist&, const ExactDist&) = default;
};

struct Moments {
  Rational mean;
  Rational second_moment;
  Rational variance;

  friend bool operator==(const Moments&, const Moments&) = default;
};

/// Expands prod (1 + z x^d) over the doubled ranks d in ascending order and
/// keeps z-degrees 0..k_max. Row k, coefficient e counts the k-subsets of the
/// ranks (tied copies distinguished) whose doubled sum is e.
CoeffTable euler_expand(const RankMultiset& ranks, int k_max);

/// Null distribution of W for the first n1 of N = ranks.size() observations.
/// n1 = 0 and n1 = N give a point mass.
ExactDist dist_from_ranks(const RankMultiset& ranks, int n1);

/// Same as dist_from_ranks but reads the row from a precomputed table. Row
/// N - n1 is reflected when row n1 was not kept.
ExactDist dist_from_table(const CoeffTable& table, int n1);

/// Untied case through the Gaussian binomial: no product expansion.
ExactDist dist_no_ties(int n1, int n2);

Moments moments_exact(const ExactDist& dist);

/// Mean n1(N+1)/2 and variance n1 n2/(N-1) * (sum R_i^2 / N - (N+1)^2/4).
Moments moments_closed_form(const RankMultiset& ranks, int n1);

/// less: P(W <= w); greater: P(W >= w); two_sided: either min(1, 2 min(less,
/// greater)) or the total probability of outcomes no more likely than w.
Rational p_value(const ExactDist& dist, std::int64_t doubled_w, Alternative alternative,
                 TwoSidedMode mode = TwoSidedMode::twice_min);

/// U = n1 n2 + n2(n2+1)/2 - W on the doubled lattice. The map is an involution.
std::int64_t u_from_w(std::int64_t doubled_w, int n1, int n2);

}  // namespace exactrank
