#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <tuple>

#include "exactrank/distengine.hpp"
#include "exactrank/polycore.hpp"
#include "exactrank/ranks.hpp"

namespace exactrank {

struct TableKey {
  int total = 0;
  int n1 = 0;
  TiePattern pattern;

  friend auto operator<=>(const TableKey& a, const TableKey& b) {
    return std::tie(a.total, a.n1, a.pattern) <=> std::tie(b.total, b.n1, b.pattern);
  }
  friend bool operator==(const TableKey&, const TableKey&) = default;
};

// On-disk layout, all integers little-endian:
//   magic "XRKTABLE" | u32 version | u32 N | u32 n1 | u32 k_max
//   u32 pattern bit count | packed pattern bits, MSB first
//   per row k = 0..k_max: u64 coefficient count, then per coefficient
//   u32 byte length followed by the big-endian magnitude.
inline constexpr std::uint32_t kTableFormatVersion = 1;

void write_table(std::ostream& out, const TableKey& key, const CoeffTable& table);
/// Throws InputError on a bad magic, unknown version or truncated stream.
CoeffTable read_table(std::istream& in, TableKey* key_out = nullptr);

/// File name used for `key` inside a cache directory.
std::string table_file_name(const TableKey& key);

/// Memoizes coefficient tables keyed by (N, n1, tie pattern), optionally
/// persisting them under a directory. Safe for concurrent use.
class TableCache {
 public:
  explicit TableCache(std::optional<std::filesystem::path> directory = std::nullopt);

  /// Table of z-degrees 0..max(n1, N - n1) for `ranks`. Ranks that are not a
  /// midrank assignment bypass the cache.
  std::shared_ptr<const CoeffTable> table_for(const RankMultiset& ranks, int n1);
  ExactDist dist(const RankMultiset& ranks, int n1);

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  std::optional<std::filesystem::path> directory_;
  mutable std::shared_mutex mutex_;
  std::map<TableKey, std::shared_ptr<const CoeffTable>> tables_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

}  // namespace exactrank
