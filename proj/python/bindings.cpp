#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "condgof/cli.hpp"
#include "condgof/conditional.hpp"
#include "condgof/engine.hpp"
#include "condgof/errors.hpp"
#include "condgof/estimation.hpp"
#include "condgof/io.hpp"
#include "condgof/stats.hpp"

namespace py = pybind11;
using namespace condgof;

namespace {

std::vector<Statistic> statistics_from(const std::optional<std::vector<std::string>>& names,
                                       std::string_view fallback) {
  if (!names) return parse_statistic_list(fallback);
  std::vector<Statistic> out;
  for (const auto& n : *names) out.push_back(parse_statistic(n));
  return out;
}

py::dict study_dict(const StudyResult& r) {
  py::dict rates;
  py::dict errors;
  for (const auto& rate : r.rates) {
    rates[py::str(std::string(name(rate.statistic)))] = rate.rate;
    errors[py::str(std::string(name(rate.statistic)))] = rate.std_error;
  }
  py::dict d;
  d["alternative"] = r.alternative;
  d["n"] = r.n;
  d["alpha"] = r.alpha;
  d["M"] = r.outer;
  d["K"] = r.inner;
  d["seed"] = r.seed;
  d["degenerate"] = r.degenerate;
  d["rates"] = rates;
  d["std_errors"] = errors;
  return d;
}

StudySpec make_spec(std::int64_t n, double alpha, std::int64_t m, std::int64_t k, std::uint64_t seed,
                    const std::optional<std::vector<std::string>>& stats, unsigned workers) {
  StudySpec spec;
  spec.n = n;
  spec.alpha = alpha;
  spec.outer = m;
  spec.inner = k;
  spec.seed = seed;
  spec.statistics = statistics_from(stats, "study");
  spec.workers = workers;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_condgof, m) {
  m.doc() = "Exact conditional goodness-of-fit tests for the geometric distribution";

  auto base = py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);
  py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError", PyExc_ValueError);
  py::register_exception<InfeasibleTotalError>(m, "InfeasibleTotalError", PyExc_ValueError);
  (void)base;

  m.attr("DEFAULT_SEED") = cli::kDefaultSeed;
  m.attr("ALL_STATISTICS") = [] {
    std::vector<std::string> v;
    for (const auto s : kAllStatistics) v.emplace_back(name(s));
    return v;
  }();

  m.def("fixture_names", [] {
    std::vector<std::string> v;
    for (const auto n : fixtures::names()) v.emplace_back(n);
    return v;
  });
  m.def(
      "fixture", [](const std::string& n) {
        const Sample s = fixtures::load(n);
        return std::vector<std::int64_t>(s.values().begin(), s.values().end());
      },
      py::arg("name"), "Values of a bundled dataset.");
  m.def(
      "parse_dataset", [](const std::string& text) {
        const Sample s = parse_dataset(text);
        return std::vector<std::int64_t>(s.values().begin(), s.values().end());
      },
      py::arg("text"), "Raw integers or `value,count` rows.");

  m.def(
      "statistic", [](const std::string& stat, std::vector<std::int64_t> values) {
        return evaluate(parse_statistic(stat), Sample(std::move(values)));
      },
      py::arg("name"), py::arg("values"));

  m.def(
      "p_values",
      [](std::vector<std::int64_t> values, std::optional<std::vector<std::string>> stats, std::int64_t k,
         std::uint64_t seed) {
        const Sample s(std::move(values));
        const auto which = statistics_from(stats, "all");
        std::vector<TestResult> res;
        {
          py::gil_scoped_release release;
          RandomStream rng(seed, 0);
          res = conditional_p_values(s, which, k, rng);
        }
        py::dict out;
        for (const auto& r : res) {
          py::dict e;
          e["observed"] = r.observed;
          e["p_value"] = r.p_value;
          e["extreme"] = r.extreme_count;
          e["degenerate"] = r.degenerate;
          out[py::str(std::string(name(r.statistic)))] = e;
        }
        return out;
      },
      py::arg("values"), py::arg("statistics") = py::none(), py::arg("K") = 10000,
      py::arg("seed") = cli::kDefaultSeed,
      "Conditional Monte Carlo p-values keyed by statistic name. Same seed and K as the command line.");

  m.def(
      "sample_compositions",
      [](std::int64_t n, std::int64_t t, std::int64_t count, std::uint64_t seed) {
        RandomStream rng(seed, 0);
        const CompositionSpec spec(n, t);
        std::vector<Composition> rows;
        for (std::int64_t i = 0; i < count; ++i) rows.push_back(sample_conditional_geometric(spec, rng));
        return rows;
      },
      py::arg("n"), py::arg("t"), py::arg("count") = 1, py::arg("seed") = cli::kDefaultSeed,
      "Uniform compositions of t into n parts.");

  m.def(
      "fit", [](std::vector<std::int64_t> values, const std::string& family) {
        const Sample s(std::move(values));
        py::dict d;
        switch (cli::parse_family(family)) {
          case cli::Family::Geometric:
            d["p"] = fit_geometric(s).p;
            break;
          case cli::Family::BetaGeometric: {
            const auto r = fit_betageometric(s);
            d["pi"] = r.params.pi;
            d["theta"] = r.params.theta;
            d["loglik"] = r.loglik;
            d["boundary"] = r.boundary;
            break;
          }
          case cli::Family::DiscreteWeibull: {
            const auto r = fit_discrete_weibull(s);
            d["q"] = r.params.q;
            d["beta"] = r.params.beta;
            d["loglik"] = r.loglik;
            break;
          }
        }
        return d;
      },
      py::arg("values"), py::arg("family"), "Maximum likelihood fit: geometric, betageometric or dweibull.");

  m.def(
      "power_study",
      [](const std::string& alternative, std::int64_t n, double alpha, std::int64_t m, std::int64_t k,
         std::uint64_t seed, std::optional<std::vector<std::string>> stats, unsigned workers) {
        StudySpec spec = make_spec(n, alpha, m, k, seed, stats, workers);
        spec.alternative = parse_distribution(alternative);
        StudyResult r;
        {
          py::gil_scoped_release release;
          r = run_power_study(spec);
        }
        return study_dict(r);
      },
      py::arg("alternative"), py::arg("n"), py::arg("alpha") = 0.1, py::arg("M") = 1000, py::arg("K") = 1000,
      py::arg("seed") = cli::kDefaultSeed, py::arg("statistics") = py::none(), py::arg("workers") = 0);

  m.def(
      "type1_study",
      [](double p, std::int64_t n, double alpha, std::int64_t m, std::int64_t k, std::uint64_t seed,
         std::optional<std::vector<std::string>> stats, unsigned workers) {
        const StudySpec spec = make_spec(n, alpha, m, k, seed, stats, workers);
        StudyResult r;
        {
          py::gil_scoped_release release;
          r = run_type1_study(p, spec);
        }
        return study_dict(r);
      },
      py::arg("p"), py::arg("n"), py::arg("alpha") = 0.1, py::arg("M") = 1000, py::arg("K") = 1000,
      py::arg("seed") = cli::kDefaultSeed, py::arg("statistics") = py::none(), py::arg("workers") = 0);
}
