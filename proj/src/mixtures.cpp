#include "exactrank/mixtures.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include <json.hpp>

#include "exactrank/errors.hpp"

namespace exactrank {
namespace {

void check_sizes(int total, int n1, const MixtureOptions& options) {
  if (total < 2) throw InputError("mixtures need N >= 2");
  if (n1 < 1 || n1 > total - 1) {
    throw InputError("n1 must lie in [1, N-1] (got " + std::to_string(n1) + ")");
  }
  if (total > 64) throw CapExceeded("N=" + std::to_string(total) + " exceeds 64-bit pattern labels");
  if (total > options.max_total && !options.allow_large) {
    throw CapExceeded("N=" + std::to_string(total) + " means 2^" + std::to_string(total - 1) +
                      " tie patterns; the cap is N <= " + std::to_string(options.max_total));
  }
}

void check_weights(int total, const PatternWeights& weights) {
  if (weights.total() != total) {
    throw InputError("weights are for N=" + std::to_string(weights.total()) + ", not N=" +
                     std::to_string(total));
  }
}

// Dense accumulator over the doubled range every pattern's support fits in:
// [n1(n1+1), n1(2N - n1 + 1)].
struct Accumulator {
  std::int64_t low;
  std::vector<Rational> sums;

  Accumulator(int total, int n1)
      : low(static_cast<std::int64_t>(n1) * (n1 + 1)),
        sums(static_cast<std::size_t>(2 * static_cast<std::int64_t>(n1) * (total - n1) + 1)) {}

  void add(const ExactDist& dist, const Rational& weight) {
    if (weight == 0) return;
    Rational scale = weight / Rational(dist.denominator);
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
      sums[static_cast<std::size_t>(dist.support[i] - low)] += scale * Rational(dist.counts[i]);
    }
  }

  MixedDist finish() const {
    MixedDist out;
    for (std::size_t i = 0; i < sums.size(); ++i) {
      if (sums[i] == 0) continue;
      out.support.push_back(low + static_cast<std::int64_t>(i));
      out.probs.push_back(sums[i]);
    }
    return out;
  }
};

}  // namespace

PatternWeights PatternWeights::uniform(int total) {
  if (total < 1 || total > 64) throw InputError("weights need 1 <= N <= 64");
  PatternWeights w;
  w.total_ = total;
  w.uniform_ = true;
  return w;
}

PatternWeights PatternWeights::one_hot(int total, std::uint64_t label) {
  if (total < 1 || total > 64) throw InputError("weights need 1 <= N <= 64");
  PatternWeights w;
  w.total_ = total;
  if (label >= w.pattern_count()) {
    throw InputError("pattern label " + std::to_string(label) + " out of range for N=" +
                     std::to_string(total));
  }
  w.one_hot_ = label;
  return w;
}

PatternWeights PatternWeights::explicit_weights(int total, std::vector<Rational> weights) {
  if (total < 1 || total > 25) throw InputError("explicit weight vectors need 1 <= N <= 25");
  PatternWeights w;
  w.total_ = total;
  if (weights.size() != w.pattern_count()) {
    throw InputError("expected " + std::to_string(w.pattern_count()) + " weights for N=" +
                     std::to_string(total) + ", got " + std::to_string(weights.size()));
  }
  Rational sum = 0;
  for (auto& p : weights) {
    p.canonicalize();
    if (p < 0 || p > 1) throw InputError("weight " + to_string(p) + " outside [0, 1]");
    sum += p;
  }
  if (sum != 1) throw InputError("weights sum to " + to_string(sum) + ", not 1");
  w.weights_ = std::move(weights);
  return w;
}

PatternWeights PatternWeights::from_json(int total, std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("weights JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("weights JSON must be an array");
  std::vector<Rational> weights;
  weights.reserve(doc.size());
  for (const auto& item : doc) {
    if (item.is_string()) {
      weights.push_back(parse_rational(item.get<std::string>()));
    } else if (item.is_number_integer()) {
      weights.emplace_back(item.get<long>());
    } else {
      throw InputError("weights must be rational strings such as \"1/16\" or \"0.3\"");
    }
  }
  return explicit_weights(total, std::move(weights));
}

Rational PatternWeights::weight(std::uint64_t label) const {
  if (label >= pattern_count()) throw InputError("pattern label out of range");
  if (uniform_) return Rational(1, pattern_count());
  if (one_hot_) return *one_hot_ == label ? Rational(1) : Rational(0);
  return weights_[label];
}

Rational MixedDist::probability_at(std::int64_t doubled_w) const {
  auto it = std::lower_bound(support.begin(), support.end(), doubled_w);
  if (it == support.end() || *it != doubled_w) return 0;
  return probs[static_cast<std::size_t>(it - support.begin())];
}

void for_each_pattern(int total, int n1, std::uint64_t first, std::uint64_t last,
                      const std::function<void(std::uint64_t, const ExactDist&)>& visit) {
  const auto all_distinct = (std::uint64_t{1} << (total - 1)) - 1;
  for (std::uint64_t label = first; label < last; ++label) {
    const ExactDist dist = label == all_distinct
                               ? dist_no_ties(n1, total - n1)
                               : dist_from_ranks(pattern_to_ranks(TiePattern::from_label(label, total)), n1);
    visit(label, dist);
  }
}

std::vector<PatternDist> enumerate_patterns(int total, int n1, const MixtureOptions& options) {
  check_sizes(total, n1, options);
  std::vector<PatternDist> out;
  out.reserve(std::uint64_t{1} << (total - 1));
  for_each_pattern(total, n1, 0, std::uint64_t{1} << (total - 1),
                   [&](std::uint64_t label, const ExactDist& dist) {
                     out.push_back({TiePattern::from_label(label, total), dist});
                   });
  return out;
}

MixedDist mix(std::span<const PatternDist> table, const PatternWeights& weights) {
  if (table.empty()) throw InputError("empty pattern table");
  const int total = table.front().pattern.total();
  const int n1 = table.front().dist.n1;
  check_weights(total, weights);
  if (table.size() != weights.pattern_count()) {
    throw InputError("pattern table and weight vector differ in length");
  }
  Accumulator acc(total, n1);
  for (const auto& entry : table) acc.add(entry.dist, weights.weight(entry.pattern.label()));
  return acc.finish();
}

MixedDist mix_streaming(int total, int n1, const PatternWeights& weights,
                        const MixtureOptions& options) {
  check_sizes(total, n1, options);
  check_weights(total, weights);
  const std::uint64_t count = std::uint64_t{1} << (total - 1);
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, count));

  auto run = [&](std::uint64_t first, std::uint64_t last, Accumulator& acc) {
    for_each_pattern(total, n1, first, last, [&](std::uint64_t label, const ExactDist& dist) {
      acc.add(dist, weights.weight(label));
    });
  };

  std::vector<Accumulator> partial(threads, Accumulator(total, n1));
  if (threads == 1) {
    run(0, count, partial[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t first = count * t / threads;
      const std::uint64_t last = count * (t + 1) / threads;
      pool.emplace_back([&, t, first, last] {
        try {
          run(first, last, partial[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Accumulator& merged = partial[0];
  for (unsigned t = 1; t < threads; ++t) {
    for (std::size_t i = 0; i < merged.sums.size(); ++i) merged.sums[i] += partial[t].sums[i];
  }
  return merged.finish();
}

MixedDist SymbolicMix::evaluate(const PatternWeights& weights) const {
  check_weights(total, weights);
  MixedDist out;
  for (std::size_t i = 0; i < support.size(); ++i) {
    Rational p = 0;
    for (const auto& term : forms[i]) p += term.coefficient * weights.weight(term.label);
    if (p == 0) continue;
    out.support.push_back(support[i]);
    out.probs.push_back(p);
  }
  return out;
}

std::string SymbolicMix::render(std::size_t index) const {
  const auto& terms = forms.at(index);
  // Group labels sharing a coefficient, in order of first appearance.
  std::vector<std::pair<Rational, std::vector<std::uint64_t>>> groups;
  for (const auto& term : terms) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == term.coefficient; });
    if (it == groups.end()) {
      groups.push_back({term.coefficient, {term.label}});
    } else {
      it->second.push_back(term.label);
    }
  }
  std::string out;
  for (const auto& [coefficient, labels] : groups) {
    if (!out.empty()) out += " + ";
    std::string sum;
    for (auto label : labels) {
      if (!sum.empty()) sum += " + ";
      sum += "p" + std::to_string(label);
    }
    if (coefficient == 1) {
      out += labels.size() > 1 ? "(" + sum + ")" : sum;
    } else {
      out += to_string(coefficient) + "*" + (labels.size() > 1 ? "(" + sum + ")" : sum);
    }
  }
  return out.empty() ? "0" : out;
}

SymbolicMix symbolic_mix(int total, int n1, const MixtureOptions& options) {
  check_sizes(total, n1, options);
  std::map<std::int64_t, std::vector<LinearTerm>> forms;
  for_each_pattern(total, n1, 0, std::uint64_t{1} << (total - 1),
                   [&](std::uint64_t label, const ExactDist& dist) {
                     for (std::size_t i = 0; i < dist.support.size(); ++i) {
                       forms[dist.support[i]].push_back({label, dist.probability(i)});
                     }
                   });
  SymbolicMix out;
  out.total = total;
  out.n1 = n1;
  for (auto& [w, terms] : forms) {
    out.support.push_back(w);
    out.forms.push_back(std::move(terms));
  }
  return out;
}

}  // namespace exactrank
