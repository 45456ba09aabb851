#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace exactrank {

/// Sorted multiset of ranks, stored doubled so midranks such as 2.5 stay
/// integral. Invariants: values lie in [2, 2N], they sum to N(N+1), and every
/// odd (half-integer) value occurs an even number of times.
class RankMultiset {
 public:
  RankMultiset() = default;

  /// Sorts and validates. Throws InputError if an invariant fails.
  static RankMultiset from_doubled(std::vector<std::int64_t> doubled);
  /// Ranks 1..n without ties.
  static RankMultiset untied(int n);
  /// Comma- or whitespace-separated decimal ranks, e.g. "1,2.5,2.5,4,5".
  static RankMultiset parse(std::string_view text);

  std::span<const std::int64_t> doubled() const noexcept { return doubled_; }
  int size() const noexcept { return static_cast<int>(doubled_.size()); }
  bool has_ties() const noexcept;
  /// Undoubled ranks as exact decimal strings.
  std::vector<std::string> as_decimal() const;
  /// Sum of the k smallest and k largest doubled ranks.
  std::int64_t min_sum(int k) const;
  std::int64_t max_sum(int k) const;

  friend bool operator==(const RankMultiset&, const RankMultiset&) = default;

 private:
  std::vector<std::int64_t> doubled_;
};

/// Tie pattern over N order statistics: bit j (0-based, leftmost first) is 1
/// when order statistics j+1 and j+2 differ and 0 when they are tied.
class TiePattern {
 public:
  TiePattern() = default;
  explicit TiePattern(std::vector<bool> bits) : bits_(std::move(bits)) {}

  /// "0010" style; the string length is N-1.
  static TiePattern parse(std::string_view bits);
  /// Label read as a binary number with the leftmost bit most significant.
  static TiePattern from_label(std::uint64_t label, int n);
  static TiePattern all_distinct(int n);

  int total() const noexcept { return static_cast<int>(bits_.size()) + 1; }
  const std::vector<bool>& bits() const noexcept { return bits_; }
  /// Throws InputError when N-1 exceeds 64 bits.
  std::uint64_t label() const;
  std::string to_string() const;

  friend bool operator==(const TiePattern&, const TiePattern&) = default;
  friend auto operator<=>(const TiePattern& a, const TiePattern& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::vector<bool> bits_;
};

struct Ranking {
  RankMultiset ranks;
  /// Doubled midrank of each input value, in input order.
  std::vector<std::int64_t> by_position;
};

/// Joint midranks. Values compare by exact equality. Throws InputError on
/// empty input or a non-finite value.
Ranking midranks(std::span<const double> values);

/// Replaces every value by the smallest member of its chain, where a chain
/// links sorted neighbours no more than `epsilon` apart.
std::vector<double> coalesce_ties(std::span<const double> values, double epsilon);

RankMultiset pattern_to_ranks(const TiePattern& pattern);

/// Inverse of pattern_to_ranks. Throws InputError if the multiset is not a
/// midrank assignment of any tie pattern.
TiePattern ranks_to_pattern(const RankMultiset& ranks);

}  // namespace exactrank
