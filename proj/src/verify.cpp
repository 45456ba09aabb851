#include "exactrank/verify.hpp"

#include <algorithm>
#include <cmath>

#include "exactrank/errors.hpp"

namespace exactrank {
namespace {

// Depth-first choose/skip over positions, carrying the running sum.
// tally is indexed by doubled sum.
void enumerate(std::span<const std::int64_t> ranks, std::size_t pos, int left, std::int64_t sum,
               std::vector<std::uint64_t>& tally) {
  if (left == 0) {
    ++tally[static_cast<std::size_t>(sum)];
    return;
  }
  const std::size_t last = ranks.size() - static_cast<std::size_t>(left);
  for (std::size_t i = pos; i <= last; ++i) enumerate(ranks, i + 1, left - 1, sum + ranks[i], tally);
}

}  // namespace

ExactDist brute_force_dist(const RankMultiset& ranks, int n1, std::uint64_t max_subsets) {
  const int n = ranks.size();
  if (n1 < 0 || n1 > n) throw InputError("n1 outside [0, N]");
  const BigInt subsets = binomial(n, n1);
  if (subsets > BigInt(static_cast<unsigned long>(max_subsets))) {
    throw CapExceeded("brute force over " + subsets.get_str() + " subsets exceeds the cap of " +
                      std::to_string(max_subsets));
  }
  std::int64_t top = 0;
  for (auto d : ranks.doubled()) top += d;
  std::vector<std::uint64_t> tally(static_cast<std::size_t>(top) + 1);
  enumerate(ranks.doubled(), 0, n1, 0, tally);
  ExactDist out;
  out.n1 = n1;
  out.n2 = n - n1;
  out.denominator = subsets;
  for (std::size_t sum = 0; sum < tally.size(); ++sum) {
    if (tally[sum] == 0) continue;
    out.support.push_back(static_cast<std::int64_t>(sum));
    out.counts.emplace_back(static_cast<unsigned long>(tally[sum]));
  }
  return out;
}

Rational lattice_half_step(const ExactDist& dist) {
  const bool half = std::any_of(dist.support.begin(), dist.support.end(),
                                [](std::int64_t s) { return s % 2 != 0; });
  return half ? Rational(1, 4) : Rational(1, 2);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_approx_p(const Moments& moments, std::int64_t doubled_w, Alternative alternative,
                       const Rational& continuity) {
  if (moments.variance <= 0) throw InputError("normal approximation needs positive variance");
  const double sd = std::sqrt(to_double(moments.variance));
  const Rational w(doubled_w, 2);
  const double lower = to_double(w + continuity - moments.mean) / sd;
  const double upper = to_double(w - continuity - moments.mean) / sd;
  const double p_less = normal_cdf(lower);
  const double p_greater = normal_cdf(-upper);
  switch (alternative) {
    case Alternative::less:
      return p_less;
    case Alternative::greater:
      return p_greater;
    case Alternative::two_sided:
      break;
  }
  return std::min(1.0, 2.0 * std::min(p_less, p_greater));
}

ApproxReport compare_with_normal(const ExactDist& dist, std::int64_t doubled_w,
                                 Alternative alternative, Correction correction,
                                 TwoSidedMode mode) {
  ApproxReport r;
  r.w_obs = doubled_w;
  r.exact_p = p_value(dist, doubled_w, alternative, mode);
  r.continuity_correction = correction == Correction::none ? Rational(0) : lattice_half_step(dist);
  r.normal_p = normal_approx_p(moments_exact(dist), doubled_w, alternative, r.continuity_correction);
  r.abs_error = std::fabs(to_double(r.exact_p) - r.normal_p);
  return r;
}

std::vector<ApproxReport> approximation_table(const ExactDist& dist, Alternative alternative,
                                              Correction correction, TwoSidedMode mode) {
  std::vector<ApproxReport> out;
  out.reserve(dist.support.size());
  for (auto w : dist.support) out.push_back(compare_with_normal(dist, w, alternative, correction, mode));
  return out;
}

}  // namespace exactrank
