#include "condgof/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "condgof/conditional.hpp"
#include "condgof/engine.hpp"
#include "condgof/errors.hpp"
#include "condgof/estimation.hpp"
#include "condgof/io.hpp"
#include "condgof/random.hpp"

namespace condgof::cli {

namespace {

using nlohmann::json;

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "NA";
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

std::string sig6(double v) {
  if (std::isnan(v)) return "NA";
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

/// First `left_columns` columns left-aligned, the rest right-aligned.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows,
                 std::size_t left_columns = 1) {
  if (rows.empty()) return;
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      line += c < left_columns ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

struct FittedModel {
  Family family;
  Distribution dist;
  double loglik;
  std::vector<std::pair<std::string, double>> params;
  int iterations = 0;
};

double geometric_loglik(const Sample& s, double p) {
  return static_cast<double>(s.n()) * std::log(p) + static_cast<double>(s.total()) * std::log1p(-p);
}

FittedModel fit_family(const Sample& s, Family f) {
  switch (f) {
    case Family::Geometric: {
      const auto g = fit_geometric(s);
      return {f, g, geometric_loglik(s, g.p), {{"p", g.p}}, 0};
    }
    case Family::BetaGeometric: {
      const auto r = fit_betageometric(s);
      std::vector<std::pair<std::string, double>> params{{"pi", r.params.pi}, {"theta", r.params.theta}};
      if (r.params.theta > 0.0) {
        params.emplace_back("alpha", r.params.alpha());
        params.emplace_back("beta", r.params.beta());
      }
      return {f, r.params, r.loglik, std::move(params), r.iterations};
    }
    case Family::DiscreteWeibull: {
      const auto r = fit_discrete_weibull(s);
      return {f, r.params, r.loglik, {{"q", r.params.q}, {"beta", r.params.beta}}, r.iterations};
    }
  }
  throw DomainError("unknown family");
}

std::string frequency_label(const FrequencyRow& row) {
  return row.tail ? ">=" + std::to_string(row.value) : std::to_string(row.value);
}

void report_estimation_failure(std::ostream& err, Family f, const EstimationError& e) {
  err << "error: " << family_name(f) << " fit did not converge: " << e.what() << "\n  best iterate:";
  for (const double v : e.best_iterate()) err << ' ' << sig6(v);
  err << " (loglik " << sig6(e.best_loglik()) << ")\n";
}

/// Fits every family, reporting failures on `err`. Returns false if any failed.
bool fit_all(const Sample& s, const std::vector<Family>& families, std::vector<FittedModel>& fits,
             std::ostream& err) {
  bool ok = true;
  for (const Family f : families) {
    try {
      fits.push_back(fit_family(s, f));
    } catch (const EstimationError& e) {
      report_estimation_failure(err, f, e);
      ok = false;
    }
  }
  return ok;
}

std::vector<Distribution> distributions_of(const std::vector<FittedModel>& fits) {
  std::vector<Distribution> out;
  for (const auto& f : fits) out.push_back(f.dist);
  return out;
}

void print_frequency_table(std::ostream& out, OutputFormat format, const std::vector<FittedModel>& fits,
                           const std::vector<FrequencyRow>& rows, json* sink) {
  if (format == OutputFormat::Json) {
    json arr = json::array();
    for (const auto& row : rows) {
      json e{{"value", row.value}, {"tail", row.tail}, {"observed", row.observed}};
      for (std::size_t m = 0; m < fits.size(); ++m) e[std::string(family_name(fits[m].family))] = row.expected[m];
      arr.push_back(std::move(e));
    }
    (*sink)["frequencies"] = std::move(arr);
    return;
  }
  if (format == OutputFormat::Csv) {
    out << "value,observed";
    for (const auto& f : fits) out << ',' << family_name(f.family);
    out << '\n';
    for (const auto& row : rows) {
      out << frequency_label(row) << ',' << row.observed;
      for (const double e : row.expected) out << ',' << fixed(e, 1);
      out << '\n';
    }
    return;
  }
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"value", "observed"};
  for (const auto& f : fits) header.emplace_back(family_name(f.family));
  table.push_back(std::move(header));
  for (const auto& row : rows) {
    std::vector<std::string> cells{frequency_label(row), std::to_string(row.observed)};
    for (const double e : row.expected) cells.push_back(fixed(e, 1));
    table.push_back(std::move(cells));
  }
  print_table(out, table);
}

std::int64_t default_lump(const Sample& s) { return std::max<std::int64_t>(1, s.max_value()); }

void print_progress(std::ostream& err, std::int64_t done, std::int64_t total) {
  err << "\r" << done << '/' << total << (done == total ? "\n" : "") << std::flush;
}

int run_study(const StudySpec& spec, bool is_type1, double p, bool progress, const RunConfig& cfg,
              std::ostream& out, std::ostream& err) {
  ProgressCallback cb;
  if (progress) cb = [&err](std::int64_t done, std::int64_t total) { print_progress(err, done, total); };
  const StudyResult r = is_type1 ? run_type1_study(p, spec, cb) : run_power_study(spec, cb);
  if (r.degenerate > 0) {
    err << "warning: " << r.degenerate << " of " << r.outer
        << " datasets had t = 0 and were never rejected\n";
  }
  switch (cfg.format) {
    case OutputFormat::Csv:
      out << study_to_csv(r);
      break;
    case OutputFormat::Json:
      out << study_to_json(r) << '\n';
      break;
    case OutputFormat::Table: {
      out << (is_type1 ? "type I error" : "power") << ": " << r.alternative << ", n = " << r.n
          << ", alpha = " << r.alpha << ", M = " << r.outer << ", K = " << r.inner << ", seed = " << r.seed
          << '\n';
      std::vector<std::vector<std::string>> table;
      std::vector<std::string> header{""};
      std::vector<std::string> rate_row{"rate"};
      std::vector<std::string> se_row{"se"};
      for (const auto& rate : r.rates) {
        header.emplace_back(label(rate.statistic));
        rate_row.push_back(fixed(rate.rate, 3));
        se_row.push_back(fixed(rate.std_error, 3));
      }
      table.push_back(std::move(header));
      table.push_back(std::move(rate_row));
      table.push_back(std::move(se_row));
      print_table(out, table);
      break;
    }
  }
  return kSuccess;
}

StudySpec study_spec(const StudyOptions& opts, const RunConfig& cfg) {
  StudySpec spec;
  spec.n = opts.n;
  spec.alpha = opts.alpha;
  spec.outer = opts.outer;
  spec.inner = cfg.iterations;
  spec.statistics = cfg.statistics;
  spec.seed = cfg.seed;
  spec.workers = cfg.workers;
  return spec;
}

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::int64_t iterations = 10000;
  std::string stats;
  std::string format = "table";
  unsigned workers = 0;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_iterations = true) {
  cmd->add_option("--seed", f.seed, "Random seed (default: $CONDGOF_SEED, else a fixed value)");
  if (with_iterations) {
    cmd->add_option("--iterations,--K", f.iterations, "Conditional draws per p-value")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--stats", f.stats, "Comma-separated statistics, or 'all' / 'study'");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--workers", f.workers, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_flag("--strict", f.strict, "Treat degenerate data (t = 0 or n = 1) as an error");
}

RunConfig make_config(const CommonFlags& f, std::string_view default_stats) {
  RunConfig cfg;
  cfg.seed = resolve_seed(f.seed);
  cfg.iterations = f.iterations;
  cfg.statistics = parse_statistic_list(f.stats.empty() ? default_stats : f.stats);
  cfg.format = parse_format(f.format);
  cfg.workers = f.workers;
  cfg.strict = f.strict;
  return cfg;
}

std::vector<Family> parse_families(const std::vector<std::string>& names) {
  std::vector<Family> out;
  for (const auto& n : names) out.push_back(parse_family(n));
  return out;
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw DomainError("unknown format '" + std::string(text) + "' (expected table, csv or json)");
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  const char* env = std::getenv("CONDGOF_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  const std::string_view text(env);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("CONDGOF_SEED is not an unsigned integer: '" + std::string(text) + "'");
  }
  return value;
}

Family parse_family(std::string_view text) {
  if (text == "geometric" || text == "geom") return Family::Geometric;
  if (text == "betageometric" || text == "bg") return Family::BetaGeometric;
  if (text == "dweibull" || text == "weibull" || text == "dw") return Family::DiscreteWeibull;
  throw DomainError("unknown family '" + std::string(text) + "' (expected geometric, betageometric or dweibull)");
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Geometric: return "geometric";
    case Family::BetaGeometric: return "betageometric";
    case Family::DiscreteWeibull: return "dweibull";
  }
  return "?";
}

std::vector<FrequencyRow> expected_frequency_table(const Sample& s, const std::vector<Distribution>& fitted,
                                                   std::int64_t lump) {
  if (lump < 1) throw DomainError("lump threshold must be >= 1");
  const auto counts = s.counts();
  const double n = static_cast<double>(s.n());
  std::vector<FrequencyRow> rows;
  for (std::int64_t j = 0; j <= lump; ++j) {
    FrequencyRow row{j, j == lump, 0, {}};
    if (row.tail) {
      for (std::size_t k = static_cast<std::size_t>(lump); k < counts.size(); ++k) row.observed += counts[k];
    } else if (static_cast<std::size_t>(j) < counts.size()) {
      row.observed = counts[static_cast<std::size_t>(j)];
    }
    for (const auto& d : fitted) {
      row.expected.push_back(n * (row.tail ? survival(d, lump) : std::exp(log_pmf(d, j))));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Sample load_input(const std::optional<std::string>& fixture, const std::optional<std::string>& path,
                  std::istream& in) {
  if (fixture && path) throw DomainError("give either a fixture or an input file, not both");
  if (fixture) return fixtures::load(*fixture);
  if (!path || *path == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
  }
  return read_dataset(*path);
}

int cmd_test(const Sample& s, const RunConfig& cfg, const TestOptions& opts, std::ostream& out,
             std::ostream& err) {
  if (cfg.iterations < 1) throw DomainError("iterations must be >= 1");
  if (cfg.statistics.empty()) throw DomainError("no statistics requested");
  const bool degenerate = s.total() == 0 || s.n() == 1;
  if (degenerate) {
    err << "warning: " << (s.total() == 0 ? "t = 0" : "n = 1")
        << ": the conditional law is a point mass, every p-value is 1\n";
    if (cfg.strict) return kDegenerateData;
  }

  RandomStream rng(cfg.seed, 0);
  const auto results = conditional_p_values(s, cfg.statistics, cfg.iterations, rng);
  const double p_hat = static_cast<double>(s.n()) / static_cast<double>(s.total() + s.n());

  std::vector<FittedModel> fits;
  const bool fits_ok = fit_all(s, s.total() > 0 ? opts.fit : std::vector<Family>{}, fits, err);
  const auto rows = fits.empty() ? std::vector<FrequencyRow>{}
                                 : expected_frequency_table(s, distributions_of(fits), opts.lump.value_or(default_lump(s)));

  switch (cfg.format) {
    case OutputFormat::Json: {
      json j{{"n", s.n()}, {"t", s.total()}, {"p_hat", p_hat}, {"K", cfg.iterations}, {"seed", cfg.seed},
             {"degenerate", degenerate}};
      json tests = json::array();
      for (const auto& r : results) {
        tests.push_back({{"statistic", std::string(name(r.statistic))},
                         {"label", std::string(label(r.statistic))},
                         {"observed", number_or_null(r.observed)},
                         {"p_value", r.p_value},
                         {"extreme", r.extreme_count},
                         {"undefined", r.undefined_count}});
      }
      j["tests"] = std::move(tests);
      if (!fits.empty()) print_frequency_table(out, cfg.format, fits, rows, &j);
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "statistic,observed,p_value,extreme,replications\n";
      for (const auto& r : results) {
        out << name(r.statistic) << ',' << sig6(r.observed) << ',' << fixed(r.p_value, 3) << ','
            << r.extreme_count << ',' << r.replications << '\n';
      }
      if (!fits.empty()) {
        out << '\n';
        print_frequency_table(out, cfg.format, fits, rows, nullptr);
      }
      break;
    case OutputFormat::Table: {
      out << "n = " << s.n() << ", t = " << s.total() << ", p_hat = " << fixed(p_hat, 4)
          << ", K = " << cfg.iterations << ", seed = " << cfg.seed << '\n';
      std::vector<std::vector<std::string>> table{{"statistic", "observed", "p_cond"}};
      for (const auto& r : results) {
        table.push_back({std::string(label(r.statistic)), sig6(r.observed), fixed(r.p_value, 3)});
      }
      print_table(out, table);
      if (!fits.empty()) {
        out << '\n';
        print_frequency_table(out, cfg.format, fits, rows, nullptr);
      }
      break;
    }
  }
  return fits_ok ? kSuccess : kEstimationFailure;
}

int cmd_sample(const SampleOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  if (opts.count < 0) throw DomainError("count must be >= 0");
  RandomStream rng(cfg.seed, 0);
  std::vector<Composition> rows;
  rows.reserve(static_cast<std::size_t>(opts.count));
  const std::string& f = opts.family;
  if (f == "geometric" || f == "geom") {
    const CompositionSpec spec(opts.n, opts.t);
    for (std::int64_t i = 0; i < opts.count; ++i) rows.push_back(sample_conditional_geometric(spec, rng));
  } else if (f == "negbinomial" || f == "nb") {
    for (std::int64_t i = 0; i < opts.count; ++i) rows.push_back(sample_conditional_negbinomial(opts.sizes, opts.t, rng));
  } else if (f == "poisson" || f == "pois") {
    for (std::int64_t i = 0; i < opts.count; ++i) rows.push_back(sample_conditional_poisson(opts.weights, opts.t, rng));
  } else if (f == "binomial" || f == "bin") {
    for (std::int64_t i = 0; i < opts.count; ++i) rows.push_back(sample_conditional_binomial(opts.sizes, opts.t, rng));
  } else if (f == "powerseries") {
    const CompositionSpec spec(opts.n, opts.t);
    auto draws = sample_conditional_powerseries_mh(coefficients::parse(opts.coefficients), spec, opts.count, rng,
                                                   McmcOptions{opts.burn_in, opts.thin});
    rows = std::move(draws.states);
  } else {
    throw DomainError("unknown family '" + f + "' (expected geometric, negbinomial, poisson, binomial or powerseries)");
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return kSuccess;
}

int cmd_power(const StudyOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  StudySpec spec = study_spec(opts, cfg);
  spec.alternative = parse_distribution(opts.alternative);
  return run_study(spec, false, 0.0, opts.progress, cfg, out, err);
}

int cmd_type1(const StudyOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_study(study_spec(opts, cfg), true, opts.p, opts.progress, cfg, out, err);
}

int cmd_fit(const Sample& s, const FitOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (s.total() == 0) {
    err << "warning: t = 0: every model degenerates to a point mass at 0\n";
    return cfg.strict ? kDegenerateData : kSuccess;
  }
  std::vector<FittedModel> fits;
  const bool ok = fit_all(s, opts.families, fits, err);
  const auto rows = fits.empty() ? std::vector<FrequencyRow>{}
                                 : expected_frequency_table(s, distributions_of(fits), opts.lump.value_or(default_lump(s)));

  switch (cfg.format) {
    case OutputFormat::Json: {
      json j{{"n", s.n()}, {"t", s.total()}};
      json models = json::array();
      for (const auto& f : fits) {
        json params = json::object();
        for (const auto& [k, v] : f.params) params[k] = v;
        models.push_back({{"family", std::string(family_name(f.family))},
                          {"parameters", std::move(params)},
                          {"loglik", f.loglik},
                          {"iterations", f.iterations}});
      }
      j["fits"] = std::move(models);
      if (!fits.empty()) print_frequency_table(out, cfg.format, fits, rows, &j);
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "family,parameter,estimate\n";
      for (const auto& f : fits) {
        for (const auto& [k, v] : f.params) out << family_name(f.family) << ',' << k << ',' << sig6(v) << '\n';
        out << family_name(f.family) << ",loglik," << sig6(f.loglik) << '\n';
      }
      if (!fits.empty()) {
        out << '\n';
        print_frequency_table(out, cfg.format, fits, rows, nullptr);
      }
      break;
    case OutputFormat::Table: {
      out << "n = " << s.n() << ", t = " << s.total() << '\n';
      std::vector<std::vector<std::string>> table{{"family", "estimates", "loglik"}};
      for (const auto& f : fits) {
        std::string params;
        for (const auto& [k, v] : f.params) params += (params.empty() ? "" : ", ") + k + " = " + sig6(v);
        table.push_back({std::string(family_name(f.family)), params, sig6(f.loglik)});
      }
      print_table(out, table, 2);
      if (!fits.empty()) {
        out << '\n';
        print_frequency_table(out, cfg.format, fits, rows, nullptr);
      }
      break;
    }
  }
  return ok ? kSuccess : kEstimationFailure;
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact conditional goodness-of-fit tests for the geometric distribution"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "condgof 0.1.0");

  // test
  CommonFlags test_flags;
  std::optional<std::string> test_file;
  std::optional<std::string> test_fixture;
  std::vector<std::string> test_fit;
  std::optional<std::int64_t> test_lump;
  auto* test = app.add_subcommand("test", "Conditional p-values for a dataset");
  test->add_option("file", test_file, "Input file ('-' or omitted: standard input)");
  test->add_option("--fixture", test_fixture, "Use a bundled dataset instead of a file");
  test->add_option("--fit", test_fit, "Add expected frequencies for these models")->delimiter(',');
  test->add_option("--lump", test_lump, "Lump values >= this into one row of the frequency table");
  add_common(test, test_flags);

  // sample
  CommonFlags sample_flags;
  SampleOptions sample_opts;
  auto* sample = app.add_subcommand("sample", "Draw from the conditional law given the total, as CSV rows");
  sample->add_option("--family", sample_opts.family, "geometric, negbinomial, poisson, binomial or powerseries")
      ->capture_default_str();
  sample->add_option("--n", sample_opts.n, "Number of parts (geometric, powerseries)");
  sample->add_option("--t", sample_opts.t, "Total")->required();
  sample->add_option("--count", sample_opts.count, "Number of rows")->capture_default_str();
  sample->add_option("--sizes", sample_opts.sizes, "Size list (negbinomial r_i, binomial m_i)")->delimiter(',');
  sample->add_option("--weights", sample_opts.weights, "Weight list (poisson)")->delimiter(',');
  sample->add_option("--coefficients", sample_opts.coefficients,
                     "Power-series a(x): geometric, poisson, binomial:m, negbinomial:r")
      ->capture_default_str();
  sample->add_option("--burn-in", sample_opts.burn_in, "Metropolis-Hastings burn-in")->capture_default_str();
  sample->add_option("--thin", sample_opts.thin, "Metropolis-Hastings thinning")->capture_default_str();
  add_common(sample, sample_flags, false);

  // power / type1
  CommonFlags power_flags;
  power_flags.iterations = 1000;
  StudyOptions power_opts;
  auto* power = app.add_subcommand("power", "Rejection rates of the conditional tests under an alternative");
  power->add_option("--alt", power_opts.alternative,
                    "geom:p, pois:lambda, bin:m,p, nb:r,p, bg:alpha,beta, dweibull:q,beta")
      ->required();
  power->add_option("--n", power_opts.n, "Sample size")->capture_default_str();
  power->add_option("--alpha", power_opts.alpha, "Level")->capture_default_str();
  power->add_option("--M", power_opts.outer, "Datasets")->capture_default_str();
  power->add_flag("--progress", power_opts.progress, "Report progress on stderr");
  add_common(power, power_flags);

  CommonFlags type1_flags;
  type1_flags.iterations = 1000;
  StudyOptions type1_opts;
  auto* type1 = app.add_subcommand("type1", "Rejection rates under a geometric null");
  type1->add_option("--p", type1_opts.p, "Geometric success probability")->capture_default_str();
  type1->add_option("--n", type1_opts.n, "Sample size")->capture_default_str();
  type1->add_option("--alpha", type1_opts.alpha, "Level")->capture_default_str();
  type1->add_option("--M", type1_opts.outer, "Datasets")->capture_default_str();
  type1->add_flag("--progress", type1_opts.progress, "Report progress on stderr");
  add_common(type1, type1_flags);

  // fit
  CommonFlags fit_flags;
  std::optional<std::string> fit_file;
  std::optional<std::string> fit_fixture;
  std::vector<std::string> fit_family;
  std::optional<std::int64_t> fit_lump;
  auto* fit = app.add_subcommand("fit", "Maximum likelihood fits and expected frequencies");
  fit->add_option("file", fit_file, "Input file ('-' or omitted: standard input)");
  fit->add_option("--fixture", fit_fixture, "Use a bundled dataset instead of a file");
  fit->add_option("--family", fit_family, "geometric, betageometric, dweibull (default: all)")->delimiter(',');
  fit->add_option("--lump", fit_lump, "Lump values >= this into one row");
  add_common(fit, fit_flags, false);

  // fixtures
  std::optional<std::string> dump_name;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "List bundled datasets, or print one");
  fixtures_cmd->add_option("name", dump_name, "Dataset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kFailure;
  }

  try {
    if (test->parsed()) {
      const Sample s = load_input(test_fixture, test_file, in);
      TestOptions opts{parse_families(test_fit), test_lump};
      return cmd_test(s, make_config(test_flags, "all"), opts, out, err);
    }
    if (sample->parsed()) {
      return cmd_sample(sample_opts, make_config(sample_flags, "all"), out, err);
    }
    if (power->parsed()) {
      return cmd_power(power_opts, make_config(power_flags, "study"), out, err);
    }
    if (type1->parsed()) {
      return cmd_type1(type1_opts, make_config(type1_flags, "study"), out, err);
    }
    if (fit->parsed()) {
      const Sample s = load_input(fit_fixture, fit_file, in);
      FitOptions opts;
      if (!fit_family.empty()) opts.families = parse_families(fit_family);
      opts.lump = fit_lump;
      return cmd_fit(s, opts, make_config(fit_flags, "all"), out, err);
    }
    if (fixtures_cmd->parsed()) {
      if (dump_name) {
        out << fixtures::text(*dump_name);
      } else {
        for (const auto name : fixtures::names()) out << name << '\n';
      }
      return kSuccess;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const EstimationError& e) {
    err << "estimation failure: " << e.what() << '\n';
    return kEstimationFailure;
  } catch (const DegenerateSampleError& e) {
    err << "degenerate data: " << e.what() << '\n';
    return kDegenerateData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace condgof::cli
