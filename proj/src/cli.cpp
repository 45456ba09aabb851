#include "exactrank/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "exactrank/csv.hpp"
#include "exactrank/distengine.hpp"
#include "exactrank/errors.hpp"
#include "exactrank/mixtures.hpp"
#include "exactrank/ranks.hpp"
#include "exactrank/report.hpp"
#include "exactrank/table_cache.hpp"
#include "exactrank/verify.hpp"

namespace exactrank {
namespace {

struct TestArgs {
  std::string input;
  std::string group_col = "group";
  std::string value_col = "value";
  std::string group1;
  std::string alternative = "two-sided";
  std::string two_sided_mode = "twice-min";
  std::string method = "exact";
  double tie_epsilon = -1;
  int max_n = 250;
  bool force = false;
  bool json = false;
  std::string cache;
};

struct PmfArgs {
  int n1 = -1;
  int n2 = -1;
  std::string ranks;
  std::string pattern;
  bool json = false;
  bool normal = false;
  int max_n = 250;
  bool force = false;
  std::string cache;
};

struct MixtureArgs {
  int total = 0;
  int n1 = 0;
  std::string weights = "uniform";
  bool symbolic = false;
  bool json = false;
  int max_n = 24;
  bool force = false;
  unsigned threads = 1;
};

Alternative parse_alternative(const std::string& s) {
  if (s == "less") return Alternative::less;
  if (s == "greater") return Alternative::greater;
  return Alternative::two_sided;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::ordered_json prob_json(const Rational& p) {
  nlohmann::ordered_json j;
  j["rational"] = to_string(p);
  j["float"] = to_double(p);
  return j;
}

int cmd_test(const TestArgs& a, std::ostream& out) {
  CsvTable table;
  if (a.input == "-") {
    table = read_csv(std::cin);
  } else {
    std::ifstream in(a.input);
    if (!in) throw InputError("cannot open '" + a.input + "'");
    table = read_csv(in);
  }
  std::optional<std::string> group1;
  if (!a.group1.empty()) group1 = a.group1;
  const TwoSample data = split_groups(table, a.group_col, a.value_col, group1);

  TestOptions options;
  options.alternative = parse_alternative(a.alternative);
  options.two_sided_mode = a.two_sided_mode == "minlike" ? TwoSidedMode::minlike : TwoSidedMode::twice_min;
  options.method = a.method == "normal" ? Method::normal : Method::exact;
  if (a.tie_epsilon >= 0) options.tie_epsilon = a.tie_epsilon;
  options.max_total = a.max_n;
  options.force = a.force;
  std::unique_ptr<TableCache> cache;
  if (!a.cache.empty()) {
    cache = std::make_unique<TableCache>(a.cache);
    options.cache = cache.get();
  }
  const TestReport report = run_test(data, options);
  out << (a.json ? report_to_json(report) + "\n" : report_to_text(report));
  return kExitOk;
}

int cmd_pmf(const PmfArgs& a, std::ostream& out) {
  const int sources = (a.n2 >= 0) + !a.ranks.empty() + !a.pattern.empty();
  if (sources != 1) {
    throw InputError("give exactly one of --n2, --ranks or --pattern (together with --n1)");
  }
  RankMultiset ranks;
  bool untied = false;
  if (a.n2 >= 0) {
    if (a.n1 + a.n2 < 1) throw InputError("need n1 + n2 >= 1");
    ranks = RankMultiset::untied(a.n1 + a.n2);
    untied = true;
  } else if (!a.ranks.empty()) {
    ranks = RankMultiset::parse(a.ranks);
  } else {
    const TiePattern pattern = TiePattern::parse(a.pattern);
    ranks = pattern_to_ranks(pattern);
  }
  const int total = ranks.size();
  if (a.n1 < 1 || a.n1 > total - 1) {
    throw InputError("--n1 must lie in [1, N-1] = [1, " + std::to_string(total - 1) +
                     "]; a sample of size 0 or N has a degenerate rank sum");
  }
  if (total > a.max_n && !a.force) {
    throw CapExceeded("N=" + std::to_string(total) + " exceeds the cap of " +
                      std::to_string(a.max_n) + " (use --force)");
  }
  ExactDist dist;
  if (!a.cache.empty()) {
    TableCache cache(a.cache);
    dist = cache.dist(ranks, a.n1);
  } else if (untied || !ranks.has_ties()) {
    dist = dist_no_ties(a.n1, total - a.n1);
  } else {
    dist = dist_from_ranks(ranks, a.n1);
  }
  const Moments m = moments_exact(dist);
  std::optional<std::vector<ApproxReport>> approx;
  if (a.normal && m.variance > 0) {
    approx = approximation_table(dist, Alternative::less, Correction::lattice_half_step);
  }

  if (a.json) {
    nlohmann::ordered_json j;
    j["n1"] = dist.n1;
    j["n2"] = dist.n2;
    j["ranks"] = ranks.as_decimal();
    j["denominator"] = dist.denominator.get_str();
    j["mean"] = prob_json(m.mean);
    j["variance"] = prob_json(m.variance);
    auto rows = nlohmann::ordered_json::array();
    Rational cdf = 0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
      const Rational p = dist.probability(i);
      cdf += p;
      nlohmann::ordered_json row;
      row["w"] = doubled_to_decimal(dist.support[i]);
      row["count"] = dist.counts[i].get_str();
      row["probability"] = prob_json(p);
      row["cdf"] = prob_json(cdf);
      if (approx) row["normal_p_less"] = (*approx)[i].normal_p;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  out << "w,count,probability,probability_float,cdf,cdf_float";
  if (approx) out << ",normal_p_less";
  out << "\n";
  Rational cdf = 0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const Rational p = dist.probability(i);
    cdf += p;
    out << doubled_to_decimal(dist.support[i]) << ',' << dist.counts[i].get_str() << ','
        << to_string(p) << ',' << format_double(to_double(p)) << ',' << to_string(cdf) << ','
        << format_double(to_double(cdf));
    if (approx) out << ',' << format_double((*approx)[i].normal_p);
    out << "\n";
  }
  return kExitOk;
}

PatternWeights parse_weights(const std::string& choice, int total) {
  if (choice == "uniform") return PatternWeights::uniform(total);
  std::string label;
  if (choice.rfind("onehot:", 0) == 0) {
    label = choice.substr(7);
  } else if (choice.rfind("one-hot(", 0) == 0 && choice.back() == ')') {
    label = choice.substr(8, choice.size() - 9);
  }
  if (!label.empty()) {
    if (label.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("malformed one-hot label '" + label + "'");
    }
    return PatternWeights::one_hot(total, std::stoull(label));
  }
  return PatternWeights::from_json(total, slurp(choice));
}

int cmd_mixture(const MixtureArgs& a, std::ostream& out) {
  MixtureOptions options;
  options.max_total = a.max_n;
  options.allow_large = a.force;
  options.threads = a.threads == 0 ? 1 : a.threads;

  if (a.symbolic) {
    const SymbolicMix sym = symbolic_mix(a.total, a.n1, options);
    if (a.json) {
      nlohmann::ordered_json j;
      j["N"] = a.total;
      j["n1"] = a.n1;
      auto rows = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < sym.support.size(); ++i) {
        auto terms = nlohmann::ordered_json::array();
        for (const auto& t : sym.forms[i]) {
          terms.push_back({{"pattern", t.label}, {"coefficient", to_string(t.coefficient)}});
        }
        rows.push_back({{"w", doubled_to_decimal(sym.support[i])},
                        {"form", sym.render(i)},
                        {"terms", std::move(terms)}});
      }
      j["rows"] = std::move(rows);
      out << j.dump(2) << "\n";
    } else {
      out << "w,form\n";
      for (std::size_t i = 0; i < sym.support.size(); ++i) {
        out << doubled_to_decimal(sym.support[i]) << ",\"" << sym.render(i) << "\"\n";
      }
    }
    return kExitOk;
  }

  // Cap check precedes reading a possibly huge weight file.
  if (a.total > a.max_n && !a.force) {
    throw CapExceeded("N=" + std::to_string(a.total) + " exceeds the pattern cap of " +
                      std::to_string(a.max_n) + " (use --force)");
  }
  const PatternWeights weights = parse_weights(a.weights, a.total);
  const MixedDist mixed = mix_streaming(a.total, a.n1, weights, options);
  if (a.json) {
    nlohmann::ordered_json j;
    j["N"] = a.total;
    j["n1"] = a.n1;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < mixed.support.size(); ++i) {
      rows.push_back({{"w", doubled_to_decimal(mixed.support[i])},
                      {"probability", prob_json(mixed.probs[i])}});
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << "\n";
  } else {
    out << "w,probability,probability_float\n";
    for (std::size_t i = 0; i < mixed.support.size(); ++i) {
      out << doubled_to_decimal(mixed.support[i]) << ',' << to_string(mixed.probs[i]) << ','
          << format_double(to_double(mixed.probs[i])) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact null distributions and p-values of the Wilcoxon rank-sum statistic"};
  app.name("exactrank");
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "Exact rank-sum test on two-sample CSV data");
  test->add_option("--input", test_args.input, "CSV file ('-' for stdin)")->required();
  test->add_option("--group-col", test_args.group_col, "Column holding the group label")
      ->capture_default_str();
  test->add_option("--value-col", test_args.value_col, "Column holding the measurement")
      ->capture_default_str();
  test->add_option("--group1", test_args.group1,
                   "Label of sample 1 (default: lexicographically smaller label)");
  test->add_option("--alternative", test_args.alternative)
      ->check(CLI::IsMember({"less", "greater", "two-sided"}))
      ->capture_default_str();
  test->add_option("--two-sided-mode", test_args.two_sided_mode)
      ->check(CLI::IsMember({"twice-min", "minlike"}))
      ->capture_default_str();
  test->add_option("--method", test_args.method)
      ->check(CLI::IsMember({"exact", "normal"}))
      ->capture_default_str();
  test->add_option("--tie-epsilon", test_args.tie_epsilon,
                   "Treat sorted neighbours within this distance as tied before ranking")
      ->check(CLI::NonNegativeNumber);
  test->add_option("--max-n", test_args.max_n, "Largest N computed exactly without --force")
      ->capture_default_str();
  test->add_flag("--force", test_args.force, "Ignore the size cap");
  test->add_flag("--json", test_args.json, "Emit a JSON report");
  test->add_option("--cache", test_args.cache, "Directory for persisted coefficient tables");

  PmfArgs pmf_args;
  auto* pmf = app.add_subcommand("pmf", "Print an exact null distribution of W");
  pmf->add_option("--n1", pmf_args.n1, "Size of sample 1")->required();
  pmf->add_option("--n2", pmf_args.n2, "Size of sample 2 (untied ranks 1..n1+n2)");
  pmf->add_option("--ranks", pmf_args.ranks, "Rank multiset, e.g. \"1,2.5,2.5,4,5\"");
  pmf->add_option("--pattern", pmf_args.pattern, "Tie pattern bits, e.g. 1011");
  pmf->add_flag("--json", pmf_args.json, "Emit JSON instead of CSV");
  pmf->add_flag("--normal", pmf_args.normal, "Add the normal approximation of P(W <= w)");
  pmf->add_option("--max-n", pmf_args.max_n)->capture_default_str();
  pmf->add_flag("--force", pmf_args.force);
  pmf->add_option("--cache", pmf_args.cache, "Directory for persisted coefficient tables");

  MixtureArgs mix_args;
  auto* mixture = app.add_subcommand("mixture", "Null distribution mixed over tie patterns");
  mixture->add_option("--N", mix_args.total, "Total sample size")->required();
  mixture->add_option("--n1", mix_args.n1, "Size of sample 1")->required();
  mixture->add_option("--weights", mix_args.weights,
                      "uniform, onehot:K, one-hot(K), or a JSON file of rational strings")
      ->capture_default_str();
  mixture->add_flag("--symbolic", mix_args.symbolic, "Print P(W = w) as linear forms in p_k");
  mixture->add_flag("--json", mix_args.json, "Emit JSON instead of CSV");
  mixture->add_option("--max-n", mix_args.max_n, "Largest N enumerated without --force")
      ->capture_default_str();
  mixture->add_flag("--force", mix_args.force);
  mixture->add_option("--threads", mix_args.threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*test) return cmd_test(test_args, out);
    if (*pmf) return cmd_pmf(pmf_args, out);
    return cmd_mixture(mix_args, out);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace exactrank
