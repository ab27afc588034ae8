#include "condgof/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "condgof/errors.hpp"

namespace condgof {

namespace {

constexpr double kTailCut = 1e-3;        // probability cut-off is kTailCut / n
constexpr double kAndersonGuard = 1e-12;  // skip A2 terms with 1 - H below this

struct StatInfo {
  Statistic id;
  std::string_view name;
  std::string_view label;
};

constexpr std::array<StatInfo, 10> kInfo{{
    {Statistic::W2, "w2", "W2"},
    {Statistic::A2, "a2", "A2"},
    {Statistic::KS, "ks", "KS"},
    {Statistic::CR, "cr", "CR"},
    {Statistic::SB, "sb", "SB"},
    {Statistic::SB0, "sb0", "SB0"},
    {Statistic::ThetaTilde, "theta", "theta"},
    {Statistic::SwAbs, "sw_abs", "|SW|"},
    {Statistic::SWL, "swl", "SWL"},
    {Statistic::SWU, "swu", "SWU"},
}};

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

StatisticEvaluator evaluator_for(const Sample& s) {
  if (s.empty()) throw DomainError("empty sample");
  if (s.total() == 0) throw DegenerateSampleError("sample total t = 0: every observation is zero");
  return StatisticEvaluator(s.n(), s.total());
}

double evaluate_with(const StatisticEvaluator& ev, Statistic stat, const Sample& s) {
  std::vector<std::int64_t> counts(std::max<std::size_t>(ev.table_size(), static_cast<std::size_t>(s.max_value()) + 1), 0);
  for (const auto v : s.values()) ++counts[static_cast<std::size_t>(v)];
  double out = 0.0;
  ev.evaluate(counts, s.min_value(), s.max_value(), std::span<const Statistic>(&stat, 1), std::span<double>(&out, 1));
  return out;
}

}  // namespace

std::string_view name(Statistic s) { return kInfo[static_cast<std::size_t>(s)].name; }
std::string_view label(Statistic s) { return kInfo[static_cast<std::size_t>(s)].label; }

Statistic parse_statistic(std::string_view text) {
  for (const auto& info : kInfo) {
    if (info.name == text || info.label == text) return info.id;
  }
  if (text == "theta_tilde") return Statistic::ThetaTilde;
  if (text == "abs_sw" || text == "sw") return Statistic::SwAbs;
  throw DomainError("unknown statistic '" + std::string(text) + "'");
}

std::vector<Statistic> parse_statistic_list(std::string_view text) {
  if (text == "all") return {kAllStatistics.begin(), kAllStatistics.end()};
  if (text == "study") return {kStudyStatistics.begin(), kStudyStatistics.end()};
  std::vector<Statistic> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (!item.empty()) {
      const Statistic s = parse_statistic(item);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw DomainError("empty statistic list");
  return out;
}

// ---------------------------------------------------------------------------

StatisticEvaluator::StatisticEvaluator(std::int64_t n, std::int64_t t) : n_(n), t_(t) {
  if (n < 1) throw DomainError("statistics need n >= 1");
  if (t < 1) throw DegenerateSampleError("statistics need t >= 1");
  const double nd = static_cast<double>(n);
  p_hat_ = nd / (static_cast<double>(t) + nd);
  const double log_q = std::log1p(-p_hat_);
  const double cut = kTailCut / nd;

  // p_hat_j is decreasing: M1u is one below the first j with p_hat_j < cut.
  std::int64_t first_small = 0;
  while (p_hat_ * std::exp(static_cast<double>(first_small) * log_q) >= cut) ++first_small;
  upper_prob_ = std::max<std::int64_t>(0, first_small - 1);
  // With p_hat_j decreasing, the first j where p_hat_j >= cut is 0 whenever one exists.
  lower_prob_ = 0;

  const std::size_t size = static_cast<std::size_t>(std::max(t, upper_prob_)) + 1;
  prob_.resize(size);
  cum_prob_.resize(size);
  xlogx_.resize(size + 1);
  for (std::size_t j = 0; j < size; ++j) {
    const double jd = static_cast<double>(j);
    prob_[j] = p_hat_ * std::exp(jd * log_q);
    cum_prob_[j] = -std::expm1((jd + 1.0) * log_q);
  }
  for (std::size_t j = 0; j <= size; ++j) xlogx_[j] = xlogx(static_cast<double>(j));
}

struct StatisticEvaluator::Sums {
  std::int64_t sum_sq = 0;
  double cr = 0.0;
  double sw_up = 0.0;    // sum o_j (j+1) ln(j+1)
  double sw_down = 0.0;  // sum o_j j ln j
  double w2 = 0.0;
  double a2 = 0.0;
  double ks = 0.0;
};

StatisticEvaluator::Sums StatisticEvaluator::accumulate(std::span<const std::int64_t> counts,
                                                        std::int64_t min_value, std::int64_t max_value,
                                                        bool need_edf) const {
  Sums s;
  for (std::int64_t j = min_value; j <= max_value; ++j) {
    const auto o = counts[static_cast<std::size_t>(j)];
    if (o == 0) continue;
    const double od = static_cast<double>(o);
    const auto ju = static_cast<std::size_t>(j);
    s.sum_sq += o * j * j;
    s.cr += od * (xlogx_[ju] - xlogx_[ju + 1]);
    s.sw_up += od * xlogx_[ju + 1];
    s.sw_down += od * xlogx_[ju];
  }
  if (!need_edf) return s;

  const double nd = static_cast<double>(n_);
  const std::int64_t upper = std::max(max_value, upper_prob_);
  const std::int64_t lower = std::min(min_value, lower_prob_);
  std::int64_t cum = 0;
  for (std::int64_t k = 0; k <= upper; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (k <= max_value) cum += counts[ku];
    const double h = cum_prob_[ku];
    const double z = static_cast<double>(cum) - nd * h;
    if (k <= max_value) s.ks = std::max(s.ks, std::abs(z));
    if (k >= lower) {
      const double zp = z * z * prob_[ku];
      s.w2 += zp;
      const double tail = 1.0 - h;
      if (tail >= kAndersonGuard) s.a2 += zp / (h * tail);
    }
  }
  s.w2 /= nd;
  s.a2 /= nd;
  return s;
}

void StatisticEvaluator::evaluate(std::span<const std::int64_t> counts, std::int64_t min_value,
                                  std::int64_t max_value, std::span<const Statistic> which,
                                  std::span<double> out) const {
  bool need_edf = false;
  for (const auto s : which) {
    need_edf = need_edf || s == Statistic::W2 || s == Statistic::A2 || s == Statistic::KS;
  }
  const Sums sums = accumulate(counts, min_value, max_value, need_edf);
  const double nd = static_cast<double>(n_);
  const double m1 = static_cast<double>(t_) / nd;
  const double m2 = static_cast<double>(sums.sum_sq) / nd;
  const double sb_value = m2 - m1 - 2.0 * m1 * m1;
  const double sw_value = (1.0 - p_hat_) * sums.sw_up - sums.sw_down;
  for (std::size_t i = 0; i < which.size(); ++i) {
    double v = 0.0;
    switch (which[i]) {
      case Statistic::W2: v = sums.w2; break;
      case Statistic::A2: v = sums.a2; break;
      case Statistic::KS: v = sums.ks; break;
      case Statistic::CR: v = sums.cr; break;
      case Statistic::SB: v = sb_value; break;
      case Statistic::SB0: v = std::max(0.0, sb_value); break;
      case Statistic::ThetaTilde: {
        const double denom = 2.0 * m2 - m1 * m1 + m1 * m2;
        v = denom != 0.0 ? sb_value / denom : std::numeric_limits<double>::quiet_NaN();
        break;
      }
      case Statistic::SwAbs: v = std::abs(sw_value); break;
      case Statistic::SWL: v = -sw_value; break;
      case Statistic::SWU: v = sw_value; break;
    }
    out[i] = v;
  }
}

// ---------------------------------------------------------------------------

GroupedSummary grouped_summary(const Sample& s) {
  const StatisticEvaluator ev = evaluator_for(s);
  GroupedSummary g;
  g.n = s.n();
  g.t = s.total();
  g.p_hat = ev.p_hat();
  g.upper_observed = s.max_value();
  g.upper_prob = ev.upper_prob();
  g.upper = std::max(g.upper_observed, g.upper_prob);
  g.lower_observed = s.min_value();
  g.lower_prob = ev.lower_prob();
  g.lower = std::min(g.lower_observed, g.lower_prob);

  const auto size = static_cast<std::size_t>(g.upper) + 1;
  g.observed.assign(size, 0);
  for (const auto v : s.values()) ++g.observed[static_cast<std::size_t>(v)];
  g.cum_observed.resize(size);
  g.prob.resize(size);
  g.expected.resize(size);
  g.cum_prob.resize(size);
  g.z.resize(size);
  const double nd = static_cast<double>(g.n);
  std::int64_t cum = 0;
  for (std::size_t j = 0; j < size; ++j) {
    cum += g.observed[j];
    g.cum_observed[j] = cum;
    g.prob[j] = ev.prob()[j];
    g.expected[j] = nd * g.prob[j];
    g.cum_prob[j] = ev.cum_prob()[j];
    g.z[j] = static_cast<double>(cum) - nd * g.cum_prob[j];
  }
  return g;
}

double w2(const GroupedSummary& g) {
  double acc = 0.0;
  for (auto k = g.lower; k <= g.upper; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    acc += g.z[ku] * g.z[ku] * g.prob[ku];
  }
  return acc / static_cast<double>(g.n);
}

double a2(const GroupedSummary& g) {
  double acc = 0.0;
  for (auto k = g.lower; k <= g.upper; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double h = g.cum_prob[ku];
    if (1.0 - h < kAndersonGuard) continue;
    acc += g.z[ku] * g.z[ku] * g.prob[ku] / (h * (1.0 - h));
  }
  return acc / static_cast<double>(g.n);
}

double ks(const GroupedSummary& g) {
  double m = 0.0;
  for (std::int64_t k = 0; k <= g.upper_observed; ++k) m = std::max(m, std::abs(g.z[static_cast<std::size_t>(k)]));
  return m;
}

double cr(const Sample& s) {
  // Defined for t = 0 as well (every term vanishes), so no evaluator here.
  const auto o = s.counts();
  double acc = 0.0;
  for (std::size_t j = 0; j < o.size(); ++j) {
    if (o[j] == 0) continue;
    const double jd = static_cast<double>(j);
    acc += static_cast<double>(o[j]) * (xlogx(jd) - xlogx(jd + 1.0));
  }
  return acc;
}

double sb(const Sample& s) {
  if (s.empty()) throw DomainError("empty sample");
  const double m1 = s.m1();
  return s.m2() - m1 - 2.0 * m1 * m1;
}

double sb0(const Sample& s) { return std::max(0.0, sb(s)); }

double theta_tilde_stat(const Sample& s) {
  if (s.empty()) throw DomainError("empty sample");
  const double m1 = s.m1();
  const double m2 = s.m2();
  const double denom = 2.0 * m2 - m1 * m1 + m1 * m2;
  if (denom == 0.0) throw UndefinedEstimateError("theta statistic: zero denominator");
  return (m2 - m1 - 2.0 * m1 * m1) / denom;
}

double sw(const Sample& s) { return evaluate(Statistic::SWU, s); }
double sw_abs(const Sample& s) { return std::abs(sw(s)); }
double swl(const Sample& s) { return -sw(s); }
double swu(const Sample& s) { return sw(s); }

double score_known_param(const Sample& s, double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw DomainError("score: pi must lie in (0, 1)");
  const double sum = static_cast<double>(s.total());
  const double sum_sq = static_cast<double>(s.sum_squares());
  return (pi * sum_sq - (2.0 - pi) * sum) / (2.0 * (1.0 - pi));
}

double evaluate(Statistic stat, const Sample& s) {
  return evaluate_with(evaluator_for(s), stat, s);
}

}  // namespace condgof
