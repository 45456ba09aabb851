#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exactrank/bigint.hpp"
#include "exactrank/distengine.hpp"
#include "exactrank/ranks.hpp"

namespace exactrank {

/// Probability p_k of each of the 2^(N-1) tie patterns, indexed by label.
class PatternWeights {
 public:
  static PatternWeights uniform(int total);
  static PatternWeights one_hot(int total, std::uint64_t label);
  /// Validates length, range and an exact total of 1.
  static PatternWeights explicit_weights(int total, std::vector<Rational> weights);
  /// JSON array of rational strings ("1/16", "0.3") or integers.
  static PatternWeights from_json(int total, std::string_view json);

  int total() const noexcept { return total_; }
  std::uint64_t pattern_count() const noexcept { return std::uint64_t{1} << (total_ - 1); }
  Rational weight(std::uint64_t label) const;
  bool is_uniform() const noexcept { return uniform_; }

 private:
  int total_ = 0;
  bool uniform_ = false;
  std::optional<std::uint64_t> one_hot_;
  std::vector<Rational> weights_;
};

struct MixedDist {
  std::vector<std::int64_t> support;  // doubled
  std::vector<Rational> probs;

  Rational probability_at(std::int64_t doubled_w) const;
  friend bool operator==(const MixedDist&, const MixedDist&) = default;
};

struct PatternDist {
  TiePattern pattern;
  ExactDist dist;
};

struct MixtureOptions {
  /// Largest N enumerated unless allow_large is set.
  int max_total = 24;
  bool allow_large = false;
  unsigned threads = 1;
};

/// One conditional null distribution per tie pattern, in label order.
std::vector<PatternDist> enumerate_patterns(int total, int n1, const MixtureOptions& options = {});

/// Calls `visit` for labels in [first, last) in increasing order.
void for_each_pattern(int total, int n1, std::uint64_t first, std::uint64_t last,
                      const std::function<void(std::uint64_t, const ExactDist&)>& visit);

/// Pointwise mixture of an enumerated table.
MixedDist mix(std::span<const PatternDist> table, const PatternWeights& weights);

/// Same mixture without materializing the table: patterns are generated and
/// folded into per-thread accumulators, then merged.
MixedDist mix_streaming(int total, int n1, const PatternWeights& weights,
                        const MixtureOptions& options = {});

struct LinearTerm {
  std::uint64_t label;
  Rational coefficient;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// P(W = w) as a linear form in the unspecified pattern probabilities.
struct SymbolicMix {
  int total = 0;
  int n1 = 0;
  std::vector<std::int64_t> support;
  std::vector<std::vector<LinearTerm>> forms;  // parallel to support, labels ascending

  MixedDist evaluate(const PatternWeights& weights) const;
  /// e.g. "3/10*(p2 + p3 + p9) + 1/10*(p14 + p15)"
  std::string render(std::size_t index) const;
};

SymbolicMix symbolic_mix(int total, int n1, const MixtureOptions& options = {});

}  // namespace exactrank
