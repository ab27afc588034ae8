#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condgof/sample.hpp"

namespace condgof {

/// Every statistic rejects the geometric null for large values.
enum class Statistic { W2, A2, KS, CR, SB, SB0, ThetaTilde, SwAbs, SWL, SWU };

inline constexpr std::array<Statistic, 10> kAllStatistics{
    Statistic::W2, Statistic::A2,         Statistic::KS,    Statistic::CR,  Statistic::SB,
    Statistic::SB0, Statistic::ThetaTilde, Statistic::SwAbs, Statistic::SWL, Statistic::SWU};

/// Columns of the power / type-I tables (SB and theta omitted, SB0 kept).
inline constexpr std::array<Statistic, 8> kStudyStatistics{
    Statistic::W2, Statistic::A2, Statistic::KS, Statistic::CR,
    Statistic::SB0, Statistic::SwAbs, Statistic::SWL, Statistic::SWU};

/// Stable machine name: w2, a2, ks, cr, sb, sb0, theta, sw_abs, swl, swu.
std::string_view name(Statistic s);
/// Display label: W2, A2, KS, CR, SB, SB0, theta, |SW|, SWL, SWU.
std::string_view label(Statistic s);
/// Throws DomainError on an unknown name.
Statistic parse_statistic(std::string_view text);
/// Comma-separated names, or `all` / `study`.
std::vector<Statistic> parse_statistic_list(std::string_view text);

/// Grouped counts against the fitted geometric, p_hat = n / (t + n).
///
/// Vectors are indexed by j = 0..size()-1 where size() = upper + 1 covers
/// both the largest observation and the probability cut-off.
struct GroupedSummary {
  std::int64_t n = 0;
  std::int64_t t = 0;
  double p_hat = 0.0;
  std::vector<std::int64_t> observed;      ///< o_j
  std::vector<std::int64_t> cum_observed;  ///< O_k
  std::vector<double> prob;                ///< p_hat_j = p_hat (1 - p_hat)^j
  std::vector<double> expected;            ///< e_j = n p_hat_j
  std::vector<double> cum_prob;            ///< H_k = sum_{j<=k} p_hat_j
  std::vector<double> z;                   ///< Z_k = O_k - n H_k

  std::int64_t upper_observed = 0;  ///< M0u: largest observed value
  std::int64_t upper_prob = 0;      ///< M1u: p_hat_j < 1e-3/n for all j beyond it
  std::int64_t upper = 0;           ///< Mu = max(M0u, M1u)
  std::int64_t lower_observed = 0;  ///< M0l: smallest observed value
  std::int64_t lower_prob = 0;      ///< M1l: first j with p_hat_j >= 1e-3/n
  std::int64_t lower = 0;           ///< Ml = min(M0l, M1l)
};

/// Throws DegenerateSampleError when t = 0.
GroupedSummary grouped_summary(const Sample& s);

/// (1/n) sum_{Ml..Mu} Z_i^2 p_hat_i
double w2(const GroupedSummary& g);
/// (1/n) sum_{Ml..Mu} Z_i^2 p_hat_i / (H_i (1 - H_i)); terms with 1 - H_i < 1e-12 skipped.
double a2(const GroupedSummary& g);
/// max_{0..M0u} |Z_k|
double ks(const GroupedSummary& g);

/// sum_i [x_i ln x_i - (x_i + 1) ln(x_i + 1)], with 0 ln 0 = 0.
double cr(const Sample& s);
/// m2 - m1 - 2 m1^2
double sb(const Sample& s);
double sb0(const Sample& s);
/// (m2 - m1 - 2 m1^2) / (2 m2 - m1^2 + m1 m2); UndefinedEstimateError on a zero denominator.
double theta_tilde_stat(const Sample& s);
/// sum_i [(1 - p_hat)(x_i + 1) ln(x_i + 1) - x_i ln x_i]; DegenerateSampleError when t = 0.
double sw(const Sample& s);
double sw_abs(const Sample& s);
double swl(const Sample& s);
double swu(const Sample& s);

/// Score for theta at 0 with pi known:
/// (pi sum x_i^2 - (2 - pi) sum x_i) / (2 (1 - pi)).
double score_known_param(const Sample& s, double pi);

/// One statistic on one sample (goes through StatisticEvaluator).
double evaluate(Statistic stat, const Sample& s);

/// Evaluates statistics on samples that share n and t, from their value
/// counts. Everything that depends only on (n, t) is tabulated once, so the
/// engine can score many conditional resamples cheaply. The free functions
/// above are thin wrappers around this class, which keeps observed and
/// resampled values bit-for-bit comparable.
class StatisticEvaluator {
 public:
  /// Requires n >= 1 and t >= 1.
  StatisticEvaluator(std::int64_t n, std::int64_t t);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t t() const noexcept { return t_; }
  double p_hat() const noexcept { return p_hat_; }
  std::int64_t upper_prob() const noexcept { return upper_prob_; }
  std::int64_t lower_prob() const noexcept { return lower_prob_; }

  /// `counts[j]` = o_j for j = 0..max_value; must have at least
  /// table_size() entries (zeros beyond max_value).
  void evaluate(std::span<const std::int64_t> counts, std::int64_t min_value, std::int64_t max_value,
                std::span<const Statistic> which, std::span<double> out) const;

  /// Size of the counts buffer evaluate() reads.
  std::size_t table_size() const noexcept { return prob_.size(); }

  std::span<const double> prob() const noexcept { return prob_; }
  std::span<const double> cum_prob() const noexcept { return cum_prob_; }

 private:
  struct Sums;
  Sums accumulate(std::span<const std::int64_t> counts, std::int64_t min_value, std::int64_t max_value,
                  bool need_edf) const;

  std::int64_t n_;
  std::int64_t t_;
  double p_hat_;
  std::int64_t upper_prob_;
  std::int64_t lower_prob_;
  std::vector<double> prob_;
  std::vector<double> cum_prob_;
  std::vector<double> xlogx_;  ///< j ln j for j = 0..table_size()
};

}  // namespace condgof
