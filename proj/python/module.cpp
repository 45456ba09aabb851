#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "exactrank/distengine.hpp"
#include "exactrank/errors.hpp"
#include "exactrank/mixtures.hpp"
#include "exactrank/polycore.hpp"
#include "exactrank/ranks.hpp"
#include "exactrank/report.hpp"
#include "exactrank/verify.hpp"

namespace py = pybind11;
using namespace exactrank;

namespace {

py::object to_py(const BigInt& v) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(v.get_str().c_str(), nullptr, 10));
}

py::object to_py(const Rational& v) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_py(BigInt(v.get_num())), to_py(BigInt(v.get_den())));
}

/// Doubled rank sum as an int when integral, otherwise a Fraction.
py::object half_units(std::int64_t doubled) {
  if (doubled % 2 == 0) return py::int_(doubled / 2);
  return to_py(Rational(doubled, 2));
}

Rational from_py(const py::handle& h) {
  if (py::isinstance<py::float_>(h)) {
    throw InputError("weights must be exact (int, Fraction or string), not float");
  }
  return parse_rational(py::str(h).cast<std::string>());
}

RankMultiset ranks_from_py(const std::vector<py::object>& ranks) {
  std::vector<std::int64_t> doubled;
  for (const auto& r : ranks) doubled.push_back(parse_doubled(py::str(r).cast<std::string>()));
  return RankMultiset::from_doubled(std::move(doubled));
}

py::list pmf_rows(const ExactDist& d) {
  py::list rows;
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    rows.append(py::make_tuple(half_units(d.support[i]), to_py(d.counts[i]), to_py(d.probability(i))));
  }
  return rows;
}

py::list mixed_rows(const MixedDist& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    rows.append(py::make_tuple(half_units(m.support[i]), to_py(m.probs[i])));
  }
  return rows;
}

PatternWeights weights_from_py(int total, const py::object& weights) {
  if (py::isinstance<py::str>(weights) && weights.cast<std::string>() == "uniform") {
    return PatternWeights::uniform(total);
  }
  if (py::isinstance<py::int_>(weights)) return PatternWeights::one_hot(total, weights.cast<std::uint64_t>());
  std::vector<Rational> values;
  for (const auto& w : weights) values.push_back(from_py(w));
  return PatternWeights::explicit_weights(total, std::move(values));
}

Alternative parse_alternative(const std::string& s) {
  if (s == "less") return Alternative::less;
  if (s == "greater") return Alternative::greater;
  if (s == "two-sided") return Alternative::two_sided;
  throw InputError("unknown alternative '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact null distributions of the Wilcoxon rank-sum statistic";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());

  m.def(
      "qbinomial",
      [](std::int64_t n, std::int64_t k) {
        const IntPoly g = qbinomial(n, k);
        py::list out;
        for (const auto& c : g.coeffs()) out.append(to_py(c));
        return out;
      },
      py::arg("n"), py::arg("k"), "Coefficients of the Gaussian binomial [n, k] in q, lowest first.");

  m.def(
      "pmf_untied", [](int n1, int n2) { return pmf_rows(dist_no_ties(n1, n2)); }, py::arg("n1"),
      py::arg("n2"), "Rows (w, count, probability) for ranks 1..n1+n2.");

  m.def(
      "pmf_ranks",
      [](const std::vector<py::object>& ranks, int n1) { return pmf_rows(dist_from_ranks(ranks_from_py(ranks), n1)); },
      py::arg("ranks"), py::arg("n1"), "Rows (w, count, probability) for a midrank multiset.");

  m.def(
      "pmf_pattern",
      [](const std::string& bits, int n1) { return pmf_rows(dist_from_ranks(pattern_to_ranks(TiePattern::parse(bits)), n1)); },
      py::arg("pattern"), py::arg("n1"), "Rows (w, count, probability) for a tie pattern such as '1011'.");

  m.def(
      "brute_force",
      [](const std::vector<py::object>& ranks, int n1) { return pmf_rows(brute_force_dist(ranks_from_py(ranks), n1)); },
      py::arg("ranks"), py::arg("n1"), "Same rows by enumerating every subset.");

  m.def(
      "moments",
      [](const std::vector<py::object>& ranks, int n1) {
        const Moments mo = moments_closed_form(ranks_from_py(ranks), n1);
        py::dict d;
        d["mean"] = to_py(mo.mean);
        d["second_moment"] = to_py(mo.second_moment);
        d["variance"] = to_py(mo.variance);
        return d;
      },
      py::arg("ranks"), py::arg("n1"));

  m.def(
      "pattern_ranks",
      [](const std::string& bits) {
        const RankMultiset ranks = pattern_to_ranks(TiePattern::parse(bits));
        py::list out;
        for (auto d : ranks.doubled()) out.append(half_units(d));
        return out;
      },
      py::arg("pattern"));

  m.def(
      "mixture",
      [](int total, int n1, const py::object& weights, unsigned threads, int max_total, bool force) {
        MixtureOptions opts{max_total, force, threads == 0 ? 1U : threads};
        const PatternWeights w = weights_from_py(total, weights);
        MixedDist mixed;
        {
          py::gil_scoped_release release;
          mixed = mix_streaming(total, n1, w, opts);
        }
        return mixed_rows(mixed);
      },
      py::arg("total"), py::arg("n1"), py::arg("weights") = "uniform", py::arg("threads") = 1,
      py::arg("max_total") = 24, py::arg("force") = false,
      "Rows (w, probability) of the mixture over tie patterns.");

  m.def(
      "symbolic_mixture",
      [](int total, int n1, int max_total, bool force) {
        MixtureOptions opts{max_total, force, 1};
        const SymbolicMix sym = symbolic_mix(total, n1, opts);
        py::list rows;
        for (std::size_t i = 0; i < sym.support.size(); ++i) {
          py::dict terms;
          for (const auto& t : sym.forms[i]) terms[py::int_(t.label)] = to_py(t.coefficient);
          rows.append(py::make_tuple(half_units(sym.support[i]), terms, sym.render(i)));
        }
        return rows;
      },
      py::arg("total"), py::arg("n1"), py::arg("max_total") = 24, py::arg("force") = false,
      "Rows (w, {label: coefficient}, rendered form).");

  m.def(
      "rank_sum_test",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::string& alternative,
         const std::string& two_sided_mode, std::optional<double> tie_epsilon, const std::string& method,
         int max_total, bool force) {
        TestOptions opts;
        opts.alternative = parse_alternative(alternative);
        if (two_sided_mode == "minlike") {
          opts.two_sided_mode = TwoSidedMode::minlike;
        } else if (two_sided_mode != "twice-min") {
          throw InputError("unknown two-sided mode '" + two_sided_mode + "'");
        }
        if (method == "normal") {
          opts.method = Method::normal;
        } else if (method != "exact") {
          throw InputError("unknown method '" + method + "'");
        }
        opts.tie_epsilon = tie_epsilon;
        opts.max_total = max_total;
        opts.force = force;
        return report_to_json(run_test({"x", "y", x, y}, opts));
      },
      py::arg("x"), py::arg("y"), py::arg("alternative") = "two-sided", py::arg("two_sided_mode") = "twice-min",
      py::arg("tie_epsilon") = py::none(), py::arg("method") = "exact", py::arg("max_total") = 250,
      py::arg("force") = false, "JSON report of the exact test of x against y.");

  m.def(
      "normal_table",
      [](int n1, int n2, const std::string& alternative) {
        py::list rows;
        for (const auto& r : approximation_table(dist_no_ties(n1, n2), parse_alternative(alternative),
                                                 Correction::lattice_half_step)) {
          rows.append(py::make_tuple(half_units(r.w_obs), to_py(r.exact_p), r.normal_p, r.abs_error));
        }
        return rows;
      },
      py::arg("n1"), py::arg("n2"), py::arg("alternative") = "less",
      "Rows (w, exact p, normal p, |difference|) for untied ranks.");
}
