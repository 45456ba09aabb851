#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exactrank/bigint.hpp"
#include "exactrank/csv.hpp"
#include "exactrank/distengine.hpp"

namespace exactrank {

class TableCache;

struct TwoSample {
  std::string label1;
  std::string label2;
  std::vector<double> values1;
  std::vector<double> values2;
};

/// Splits a table into two labelled samples. Sample 1 is `group1` when given,
/// otherwise the lexicographically smaller label. Throws InputError unless
/// exactly two non-empty groups exist and every value parses as a finite
/// decimal number.
TwoSample split_groups(const CsvTable& table, std::string_view group_col,
                       std::string_view value_col, const std::optional<std::string>& group1 = {});

enum class Method { exact, normal };

struct TestOptions {
  Alternative alternative = Alternative::two_sided;
  TwoSidedMode two_sided_mode = TwoSidedMode::twice_min;
  std::optional<double> tie_epsilon;
  Method method = Method::exact;
  /// Exact computation refuses N above this unless `force` is set.
  int max_total = 250;
  bool force = false;
  TableCache* cache = nullptr;
};

/// A probability as an exact rational (absent under the normal method) and
/// its correctly rounded double.
struct Probability {
  std::optional<Rational> exact;
  double value = 0;
};

struct TestReport {
  std::string group1;
  std::string group2;
  int n1 = 0;
  int n2 = 0;
  std::vector<std::string> ranks;         // all midranks, ascending
  std::vector<std::string> ranks_group1;  // sample 1, ascending
  std::int64_t w_doubled = 0;
  std::string w_obs;
  std::string u_obs;
  bool ties_present = false;
  std::string tie_pattern;
  Method method = Method::exact;
  Alternative alternative = Alternative::two_sided;
  TwoSidedMode two_sided_mode = TwoSidedMode::twice_min;
  Probability p_less;
  Probability p_greater;
  Probability p_two_sided;
  Rational mean;
  Rational variance;
  /// Normal approximation with lattice continuity correction; absent when
  /// the variance is zero.
  std::optional<double> normal_p_less;
  std::optional<double> normal_p_greater;
  std::optional<double> normal_p_two_sided;
  Rational continuity_correction;

  /// p-value of the requested alternative.
  const Probability& p_selected() const;
};

/// Throws CapExceeded when an exact test exceeds the size guard.
TestReport run_test(const TwoSample& data, const TestOptions& options);

std::string report_to_json(const TestReport& report);
std::string report_to_text(const TestReport& report);

/// Reparses a JSON document and recomputes every {"rational", "float"} pair's
/// float from its rational, then serializes it again.
std::string recompute_report_floats(std::string_view json);

std::string_view to_string(Alternative alternative);
std::string_view to_string(TwoSidedMode mode);
std::string_view to_string(Method method);

}  // namespace exactrank
