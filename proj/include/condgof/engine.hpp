#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condgof/distributions.hpp"
#include "condgof/random.hpp"
#include "condgof/sample.hpp"
#include "condgof/stats.hpp"

namespace condgof {

/// Monte Carlo conditional p-value of one statistic.
struct TestResult {
  Statistic statistic;
  double observed;
  double p_value;               ///< extreme_count / replications
  std::int64_t replications;    ///< K
  std::uint64_t seed;
  std::int64_t extreme_count;   ///< draws y with D(y) >= D(x)
  std::int64_t undefined_count; ///< draws where D(y) was undefined (never counted as extreme)
  bool degenerate;              ///< t = 0 or n = 1: conditional law is a point mass, p = 1
};

/// Algorithm: draw K uniform compositions of t into n parts and count those
/// whose statistic is at least the observed one. All statistics in `stats`
/// are scored on the same K draws. p = count / K with no smoothing, so
/// p = 0 is possible. Degenerate samples (t = 0 or n = 1) return p = 1
/// without drawing.
std::vector<TestResult> conditional_p_values(const Sample& s, std::span<const Statistic> stats,
                                             std::int64_t replications, RandomStream& rng);

TestResult conditional_p_value(const Sample& s, Statistic stat, std::int64_t replications, RandomStream& rng);

/// Reusable scratch for repeated p-value computations on the same thread.
class ConditionalTester {
 public:
  /// Writes one p-value per statistic into `p_values`. Returns false (and
  /// writes 1.0 everywhere) for a degenerate sample.
  bool p_values(const Sample& s, std::span<const Statistic> stats, std::int64_t replications,
                RandomStream& rng, std::span<double> p_values);

  /// Same, with full per-statistic detail.
  std::vector<TestResult> run(const Sample& s, std::span<const Statistic> stats, std::int64_t replications,
                              RandomStream& rng);

  /// Hash of the composition draws of the last run (order sensitive). Lets
  /// tests confirm that every statistic saw the same conditional draws.
  std::uint64_t last_draw_hash() const noexcept { return draw_hash_; }

 private:
  std::vector<std::int64_t> bars_;
  std::vector<std::int64_t> parts_;
  std::vector<std::int64_t> counts_;
  std::vector<double> observed_;
  std::vector<double> draw_values_;
  std::vector<std::int64_t> extreme_;
  std::vector<std::int64_t> undefined_;
  std::uint64_t draw_hash_ = 0;
};

// ---------------------------------------------------------------------------
// Power and type-I error studies

struct StudySpec {
  Distribution alternative = GeometricParams(0.5);
  std::int64_t n = 25;
  double alpha = 0.1;
  std::int64_t outer = 1000;  ///< M datasets
  std::int64_t inner = 1000;  ///< K conditional draws per dataset
  std::vector<Statistic> statistics{kStudyStatistics.begin(), kStudyStatistics.end()};
  std::uint64_t seed = 1;
  unsigned workers = 1;       ///< 0 = hardware concurrency
};

struct StatisticRate {
  Statistic statistic;
  std::int64_t rejections;
  double rate;       ///< rejections / M
  double std_error;  ///< sqrt(rate (1 - rate) / M)
};

struct StudyResult {
  std::string alternative;
  std::int64_t n = 0;
  double alpha = 0.0;
  std::int64_t outer = 0;
  std::int64_t inner = 0;
  std::uint64_t seed = 0;
  std::vector<Statistic> statistics;
  std::vector<StatisticRate> rates;  ///< at `alpha`
  std::int64_t degenerate = 0;       ///< datasets with t = 0 (never rejected)
  /// p_values[i * statistics.size() + s] for dataset i.
  std::vector<double> p_values;

  /// Rejection rates at another level, from the stored p-values.
  std::vector<StatisticRate> rates_at(double level) const;
};

/// Called after each finished dataset with (finished, total). Calls are
/// serialised; order of completion depends on scheduling, results do not.
using ProgressCallback = std::function<void(std::int64_t, std::int64_t)>;

/// Draws M datasets from `spec.alternative`; dataset i uses
/// RandomStream(seed, i) for both its data and its K conditional draws, so
/// the result is identical for any worker count.
StudyResult run_power_study(const StudySpec& spec, const ProgressCallback& progress = {});

/// Power study with Geom(p) as the generator.
StudyResult run_type1_study(double p, const StudySpec& spec, const ProgressCallback& progress = {});

std::string study_to_csv(const StudyResult& r);
std::string study_to_json(const StudyResult& r);

}  // namespace condgof
