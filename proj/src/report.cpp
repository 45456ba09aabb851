#include "exactrank/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "exactrank/errors.hpp"
#include "exactrank/ranks.hpp"
#include "exactrank/table_cache.hpp"
#include "exactrank/verify.hpp"

namespace exactrank {
namespace {

double parse_value(const std::string& text, std::size_t row) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("row " + std::to_string(row) + ": '" + text + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw InputError("row " + std::to_string(row) + ": value must be finite");
  }
  return value;
}

Probability exact_probability(const Rational& p) { return {p, to_double(p)}; }

nlohmann::ordered_json probability_json(const Probability& p) {
  nlohmann::ordered_json j;
  j["rational"] = p.exact ? nlohmann::ordered_json(to_string(*p.exact)) : nlohmann::ordered_json(nullptr);
  j["float"] = p.value;
  return j;
}

nlohmann::ordered_json rational_json(const Rational& r) {
  nlohmann::ordered_json j;
  j["rational"] = to_string(r);
  j["float"] = to_double(r);
  return j;
}

}  // namespace

std::string_view to_string(Alternative alternative) {
  switch (alternative) {
    case Alternative::less:
      return "less";
    case Alternative::greater:
      return "greater";
    case Alternative::two_sided:
      break;
  }
  return "two-sided";
}

std::string_view to_string(TwoSidedMode mode) {
  return mode == TwoSidedMode::twice_min ? "twice-min" : "minlike";
}

std::string_view to_string(Method method) { return method == Method::exact ? "exact" : "normal"; }

TwoSample split_groups(const CsvTable& table, std::string_view group_col,
                       std::string_view value_col, const std::optional<std::string>& group1) {
  const auto g = table.column(group_col);
  const auto v = table.column(value_col);
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    groups[row[g]].push_back(parse_value(row[v], r + 1));
  }
  if (groups.size() != 2) {
    throw InputError("expected exactly two groups in column '" + std::string(group_col) +
                     "', found " + std::to_string(groups.size()));
  }
  auto first = groups.begin();
  auto second = std::next(first);
  if (group1) {
    if (second->first == *group1) {
      std::swap(first, second);
    } else if (first->first != *group1) {
      throw InputError("group '" + *group1 + "' does not occur in the data");
    }
  }
  return TwoSample{first->first, second->first, first->second, second->second};
}

const Probability& TestReport::p_selected() const {
  switch (alternative) {
    case Alternative::less:
      return p_less;
    case Alternative::greater:
      return p_greater;
    case Alternative::two_sided:
      break;
  }
  return p_two_sided;
}

TestReport run_test(const TwoSample& data, const TestOptions& options) {
  if (data.values1.empty() || data.values2.empty()) throw InputError("both groups need observations");
  std::vector<double> values = data.values1;
  values.insert(values.end(), data.values2.begin(), data.values2.end());
  if (options.tie_epsilon) values = coalesce_ties(values, *options.tie_epsilon);
  const Ranking ranking = midranks(values);

  TestReport r;
  r.group1 = data.label1;
  r.group2 = data.label2;
  r.n1 = static_cast<int>(data.values1.size());
  r.n2 = static_cast<int>(data.values2.size());
  const int total = r.n1 + r.n2;
  r.method = options.method;
  r.alternative = options.alternative;
  r.two_sided_mode = options.two_sided_mode;
  r.ranks = ranking.ranks.as_decimal();
  std::vector<std::int64_t> sample1(ranking.by_position.begin(),
                                    ranking.by_position.begin() + r.n1);
  std::sort(sample1.begin(), sample1.end());
  for (auto d : sample1) {
    r.ranks_group1.push_back(doubled_to_decimal(d));
    r.w_doubled += d;
  }
  r.w_obs = doubled_to_decimal(r.w_doubled);
  r.u_obs = doubled_to_decimal(u_from_w(r.w_doubled, r.n1, r.n2));
  r.ties_present = ranking.ranks.has_ties();
  r.tie_pattern = ranks_to_pattern(ranking.ranks).to_string();

  const Moments closed = moments_closed_form(ranking.ranks, r.n1);
  r.mean = closed.mean;
  r.variance = closed.variance;

  std::optional<ExactDist> dist;
  if (options.method == Method::exact) {
    if (total > options.max_total && !options.force) {
      throw CapExceeded("exact test with N=" + std::to_string(total) + " exceeds the cap of " +
                        std::to_string(options.max_total) + " (use --force or --method normal)");
    }
    if (options.cache) {
      dist = options.cache->dist(ranking.ranks, r.n1);
    } else if (!r.ties_present) {
      dist = dist_no_ties(r.n1, r.n2);
    } else {
      dist = dist_from_ranks(ranking.ranks, r.n1);
    }
    r.p_less = exact_probability(p_value(*dist, r.w_doubled, Alternative::less));
    r.p_greater = exact_probability(p_value(*dist, r.w_doubled, Alternative::greater));
    r.p_two_sided = exact_probability(
        p_value(*dist, r.w_doubled, Alternative::two_sided, options.two_sided_mode));
  }

  if (closed.variance > 0) {
    // Lattice: half-integer sums occur exactly when some rank is half-odd.
    const bool half = std::any_of(ranking.ranks.doubled().begin(), ranking.ranks.doubled().end(),
                                  [](std::int64_t d) { return d % 2 != 0; });
    r.continuity_correction = half ? Rational(1, 4) : Rational(1, 2);
    r.normal_p_less = normal_approx_p(closed, r.w_doubled, Alternative::less, r.continuity_correction);
    r.normal_p_greater =
        normal_approx_p(closed, r.w_doubled, Alternative::greater, r.continuity_correction);
    r.normal_p_two_sided =
        normal_approx_p(closed, r.w_doubled, Alternative::two_sided, r.continuity_correction);
  }
  if (options.method == Method::normal) {
    if (!r.normal_p_less) throw InputError("normal approximation needs positive variance");
    r.p_less = {std::nullopt, *r.normal_p_less};
    r.p_greater = {std::nullopt, *r.normal_p_greater};
    r.p_two_sided = {std::nullopt, *r.normal_p_two_sided};
  }
  return r;
}

std::string report_to_json(const TestReport& r) {
  nlohmann::ordered_json j;
  j["method"] = to_string(r.method);
  j["group1"] = r.group1;
  j["group2"] = r.group2;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["ranks"] = r.ranks;
  j["ranks_group1"] = r.ranks_group1;
  j["ties_present"] = r.ties_present;
  j["tie_pattern"] = r.tie_pattern;
  j["w_obs"] = r.w_obs;
  j["u_obs"] = r.u_obs;
  j["alternative"] = to_string(r.alternative);
  j["two_sided_mode"] = to_string(r.two_sided_mode);
  j["p_value"] = probability_json(r.p_selected());
  j["p_less"] = probability_json(r.p_less);
  j["p_greater"] = probability_json(r.p_greater);
  j["p_two_sided"] = probability_json(r.p_two_sided);
  j["mean"] = rational_json(r.mean);
  j["variance"] = rational_json(r.variance);
  if (r.normal_p_less) {
    j["normal_approximation"] = {
        {"continuity_correction", to_string(r.continuity_correction)},
        {"p_less", *r.normal_p_less},
        {"p_greater", *r.normal_p_greater},
        {"p_two_sided", *r.normal_p_two_sided},
    };
  } else {
    j["normal_approximation"] = nullptr;
  }
  return j.dump(2);
}

std::string report_to_text(const TestReport& r) {
  std::ostringstream os;
  auto prob = [](const Probability& p) {
    std::ostringstream s;
    if (p.exact) s << to_string(*p.exact) << "  ";
    s << "(" << format_double(p.value) << ")";
    return s.str();
  };
  os << "Wilcoxon rank-sum test (" << to_string(r.method) << ")\n";
  os << "  sample 1:      " << r.group1 << " (n1 = " << r.n1 << ")\n";
  os << "  sample 2:      " << r.group2 << " (n2 = " << r.n2 << ")\n";
  os << "  ties present:  " << (r.ties_present ? "yes" : "no") << " (pattern " << r.tie_pattern
     << ")\n";
  os << "  W:             " << r.w_obs << "\n";
  os << "  U:             " << r.u_obs << "\n";
  os << "  E(W):          " << to_string(r.mean) << "\n";
  os << "  Var(W):        " << to_string(r.variance) << "\n";
  os << "  P(W <= w):     " << prob(r.p_less) << "\n";
  os << "  P(W >= w):     " << prob(r.p_greater) << "\n";
  os << "  two-sided:     " << prob(r.p_two_sided) << " [" << to_string(r.two_sided_mode) << "]\n";
  os << "  p-value:       " << prob(r.p_selected()) << " [" << to_string(r.alternative) << "]\n";
  if (r.normal_p_less && r.method == Method::exact) {
    os << "  normal approx: less " << format_double(*r.normal_p_less) << ", greater "
       << format_double(*r.normal_p_greater)
       << ", two-sided " << format_double(*r.normal_p_two_sided) << " (continuity "
       << to_string(r.continuity_correction) << ")\n";
  }
  return os.str();
}

std::string recompute_report_floats(std::string_view json) {
  auto doc = nlohmann::ordered_json::parse(json);
  std::function<void(nlohmann::ordered_json&)> walk = [&](nlohmann::ordered_json& node) {
    if (node.is_object()) {
      if (node.contains("rational") && node.contains("float") && node["rational"].is_string()) {
        node["float"] = to_double(parse_rational(node["rational"].get<std::string>()));
      }
      for (auto& [key, child] : node.items()) walk(child);
    } else if (node.is_array()) {
      for (auto& child : node) walk(child);
    }
  };
  walk(doc);
  return doc.dump(2);
}

}  // namespace exactrank
