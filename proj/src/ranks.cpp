#include "exactrank/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exactrank/bigint.hpp"
#include "exactrank/errors.hpp"

namespace exactrank {

RankMultiset RankMultiset::from_doubled(std::vector<std::int64_t> doubled) {
  std::sort(doubled.begin(), doubled.end());
  const auto n = static_cast<std::int64_t>(doubled.size());
  if (n == 0) throw InputError("rank multiset is empty");
  for (auto d : doubled) {
    if (d < 2 || d > 2 * n) {
      throw InputError("rank " + doubled_to_decimal(d) + " outside [1, " + std::to_string(n) + "]");
    }
  }
  const auto total = std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
  if (total != n * (n + 1)) {
    throw InputError("ranks sum to " + doubled_to_decimal(total) + ", expected " +
                     std::to_string(n * (n + 1) / 2));
  }
  for (std::size_t i = 0; i < doubled.size();) {
    std::size_t j = i;
    while (j < doubled.size() && doubled[j] == doubled[i]) ++j;
    if (doubled[i] % 2 != 0 && (j - i) % 2 != 0) {
      throw InputError("half-integer rank " + doubled_to_decimal(doubled[i]) +
                       " must occur an even number of times");
    }
    i = j;
  }
  RankMultiset out;
  out.doubled_ = std::move(doubled);
  return out;
}

RankMultiset RankMultiset::untied(int n) {
  if (n < 1) throw InputError("need at least one rank");
  std::vector<std::int64_t> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = 2 * (i + 1);
  RankMultiset out;
  out.doubled_ = std::move(d);
  return out;
}

RankMultiset RankMultiset::parse(std::string_view text) {
  std::vector<std::int64_t> doubled;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n'; };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    if (end > pos) doubled.push_back(parse_doubled(text.substr(pos, end - pos)));
    pos = end;
  }
  return from_doubled(std::move(doubled));
}

bool RankMultiset::has_ties() const noexcept {
  return std::adjacent_find(doubled_.begin(), doubled_.end()) != doubled_.end();
}

std::vector<std::string> RankMultiset::as_decimal() const {
  std::vector<std::string> out;
  out.reserve(doubled_.size());
  for (auto d : doubled_) out.push_back(doubled_to_decimal(d));
  return out;
}

std::int64_t RankMultiset::min_sum(int k) const {
  return std::accumulate(doubled_.begin(), doubled_.begin() + k, std::int64_t{0});
}

std::int64_t RankMultiset::max_sum(int k) const {
  return std::accumulate(doubled_.end() - k, doubled_.end(), std::int64_t{0});
}

TiePattern TiePattern::parse(std::string_view bits) {
  std::vector<bool> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw InputError("tie pattern must consist of '0' and '1' characters");
    }
    out.push_back(c == '1');
  }
  return TiePattern(std::move(out));
}

TiePattern TiePattern::from_label(std::uint64_t label, int n) {
  if (n < 1 || n > 65) throw InputError("pattern labels cover 1 <= N <= 65");
  const int width = n - 1;
  if (width < 64 && (label >> width) != 0) {
    throw InputError("label " + std::to_string(label) + " needs more than " +
                     std::to_string(width) + " bits");
  }
  std::vector<bool> bits(static_cast<std::size_t>(width));
  for (int j = 0; j < width; ++j) bits[static_cast<std::size_t>(j)] = (label >> (width - 1 - j)) & 1U;
  return TiePattern(std::move(bits));
}

TiePattern TiePattern::all_distinct(int n) {
  if (n < 1) throw InputError("need at least one order statistic");
  return TiePattern(std::vector<bool>(static_cast<std::size_t>(n - 1), true));
}

std::uint64_t TiePattern::label() const {
  if (bits_.size() > 64) throw InputError("tie pattern too long for an integer label");
  std::uint64_t out = 0;
  for (bool b : bits_) out = (out << 1) | (b ? 1U : 0U);
  return out;
}

std::string TiePattern::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (bool b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

Ranking midranks(std::span<const double> values) {
  if (values.empty()) throw InputError("cannot rank an empty sample");
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("non-finite value in data");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  Ranking out;
  out.by_position.resize(values.size());
  std::vector<std::int64_t> doubled(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i+1..j share the midrank (i+1+j)/2
    const auto mid = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      out.by_position[order[t]] = mid;
      doubled[t] = mid;
    }
    i = j;
  }
  out.ranks = RankMultiset::from_doubled(std::move(doubled));
  return out;
}

std::vector<double> coalesce_ties(std::span<const double> values, double epsilon) {
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
    throw InputError("tie epsilon must be a finite nonnegative number");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] - values[order[j - 1]] <= epsilon) ++j;
    for (std::size_t t = i; t < j; ++t) out[order[t]] = values[order[i]];
    i = j;
  }
  return out;
}

RankMultiset pattern_to_ranks(const TiePattern& pattern) {
  const int n = pattern.total();
  std::vector<std::int64_t> doubled(static_cast<std::size_t>(n));
  int start = 1;
  for (int pos = 1; pos <= n; ++pos) {
    const bool block_ends = pos == n || pattern.bits()[static_cast<std::size_t>(pos - 1)];
    if (!block_ends) continue;
    for (int t = start; t <= pos; ++t) doubled[static_cast<std::size_t>(t - 1)] = start + pos;
    start = pos + 1;
  }
  return RankMultiset::from_doubled(std::move(doubled));
}

TiePattern ranks_to_pattern(const RankMultiset& ranks) {
  const auto d = ranks.doubled();
  std::vector<bool> bits;
  bits.reserve(d.size() - 1);
  std::size_t start = 0;
  while (start < d.size()) {
    std::size_t end = start;
    while (end < d.size() && d[end] == d[start]) ++end;
    // positions start+1..end (1-based) must carry their midrank
    if (d[start] != static_cast<std::int64_t>(start + 1 + end)) {
      throw InputError("ranks are not a midrank assignment: block of " +
                       std::to_string(end - start) + " at position " +
                       std::to_string(start + 1) + " has rank " + doubled_to_decimal(d[start]));
    }
    for (std::size_t t = start + 1; t < end; ++t) bits.push_back(false);
    if (end < d.size()) bits.push_back(true);
    start = end;
  }
  return TiePattern(std::move(bits));
}

}  // namespace exactrank
