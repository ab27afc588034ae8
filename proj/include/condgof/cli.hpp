#pragma once

// Command implementations behind the `condgof` executable. Each command
// writes its report to `out`, diagnostics to `err`, and returns an exit code.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "condgof/distributions.hpp"
#include "condgof/sample.hpp"
#include "condgof/stats.hpp"

namespace condgof::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kParseFailure = 2,
  kEstimationFailure = 3,
  kDegenerateData = 4,
};

enum class OutputFormat { Table, Csv, Json };

/// table, csv or json; throws DomainError otherwise.
OutputFormat parse_format(std::string_view text);

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::int64_t iterations = 10000;  ///< K
  std::vector<Statistic> statistics{kAllStatistics.begin(), kAllStatistics.end()};
  OutputFormat format = OutputFormat::Table;
  unsigned workers = 0;  ///< 0 = all available cores
  bool strict = false;   ///< degenerate data is an error (exit 4)
};

/// The explicit flag if given, else $CONDGOF_SEED, else kDefaultSeed.
/// Throws DomainError if the variable is set but not an unsigned integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/// Fitted model names for `fit` and `test --fit`.
enum class Family { Geometric, BetaGeometric, DiscreteWeibull };
Family parse_family(std::string_view text);
std::string_view family_name(Family f);

/// One row of an expected-frequency table. `value` is the row's value,
/// or the lump threshold when `tail` is set (row covers value and above).
struct FrequencyRow {
  std::int64_t value;
  bool tail;
  std::int64_t observed;
  std::vector<double> expected;  ///< one column per fitted model
};

/// Rows 0..lump-1 and a final ">= lump" row. Expected counts are n * pmf,
/// the tail row n * P(X >= lump). Lumping only affects presentation.
std::vector<FrequencyRow> expected_frequency_table(const Sample& s, const std::vector<Distribution>& fitted,
                                                   std::int64_t lump);

struct TestOptions {
  std::vector<Family> fit;          ///< add an expected-frequency table
  std::optional<std::int64_t> lump; ///< default: largest observation
};

int cmd_test(const Sample& s, const RunConfig& cfg, const TestOptions& opts, std::ostream& out,
             std::ostream& err);

struct SampleOptions {
  /// geometric, negbinomial, poisson, binomial, powerseries
  std::string family = "geometric";
  std::int64_t n = 0;                 ///< geometric / powerseries part count
  std::int64_t t = 0;
  std::int64_t count = 1;
  std::vector<std::int64_t> sizes;    ///< negbinomial r-list, binomial size-list
  std::vector<double> weights;        ///< poisson weight-list
  std::string coefficients = "poisson";  ///< powerseries a(x) name
  std::int64_t burn_in = 1000;
  std::int64_t thin = 1;
};

/// CSV rows x_1,...,x_n, one per composition.
int cmd_sample(const SampleOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct StudyOptions {
  std::string alternative = "geom:0.5";  ///< power only
  double p = 0.5;                        ///< type1 only
  std::int64_t n = 25;
  double alpha = 0.1;
  std::int64_t outer = 1000;  ///< M; K comes from RunConfig::iterations
  bool progress = false;
};

int cmd_power(const StudyOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_type1(const StudyOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct FitOptions {
  std::vector<Family> families{Family::Geometric, Family::BetaGeometric, Family::DiscreteWeibull};
  std::optional<std::int64_t> lump;
};

int cmd_fit(const Sample& s, const FitOptions& opts, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Text input for the commands that take data: a fixture name or a file path
/// ("-" or none reads `in`). Throws ParseError.
Sample load_input(const std::optional<std::string>& fixture, const std::optional<std::string>& path,
                  std::istream& in);

/// Full command line (argv[0] is the program name). Maps exceptions to exit
/// codes: ParseError 2, EstimationError 3, DegenerateSampleError 4, others 1.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace condgof::cli
