#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace exactrank {

/// Comma-separated table with a mandatory header row. Double-quoted fields
/// may contain commas and "" escapes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws InputError when the column is missing.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace exactrank
