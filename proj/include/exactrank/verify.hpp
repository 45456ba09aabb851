#pragma once

#include <cstdint>
#include <vector>

#include "exactrank/distengine.hpp"
#include "exactrank/ranks.hpp"

namespace exactrank {

inline constexpr std::uint64_t kBruteForceSubsetCap = 10'000'000;

/// Tallies the doubled sum of every n1-subset of the ranks (tied copies
/// distinguished by position). Independent of the polynomial route. Throws
/// CapExceeded when binomial(N, n1) exceeds `max_subsets`.
ExactDist brute_force_dist(const RankMultiset& ranks, int n1,
                           std::uint64_t max_subsets = kBruteForceSubsetCap);

enum class Correction { none, lattice_half_step };

/// Half the lattice spacing of the support, in undoubled units: 1/2 when every
/// support point is an integer, 1/4 when half-integers occur.
Rational lattice_half_step(const ExactDist& dist);

double normal_cdf(double z);

/// Normal tail probability of the observed doubled rank sum, shifting it by
/// `continuity` towards the centre. Throws InputError for zero variance.
double normal_approx_p(const Moments& moments, std::int64_t doubled_w, Alternative alternative,
                       const Rational& continuity = 0);

struct ApproxReport {
  std::int64_t w_obs = 0;  // doubled
  Rational exact_p;
  double normal_p = 0;
  double abs_error = 0;
  Rational continuity_correction;
};

ApproxReport compare_with_normal(const ExactDist& dist, std::int64_t doubled_w,
                                 Alternative alternative, Correction correction,
                                 TwoSidedMode mode = TwoSidedMode::twice_min);

/// One report per support point.
std::vector<ApproxReport> approximation_table(const ExactDist& dist, Alternative alternative,
                                              Correction correction,
                                              TwoSidedMode mode = TwoSidedMode::twice_min);

}  // namespace exactrank
