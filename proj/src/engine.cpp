#include "condgof/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "condgof/conditional.hpp"

namespace condgof {

namespace {

bool is_degenerate(const Sample& s) { return s.total() == 0 || s.n() == 1; }

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

std::vector<TestResult> ConditionalTester::run(const Sample& s, std::span<const Statistic> stats,
                                               std::int64_t replications, RandomStream& rng) {
  if (s.empty()) throw DomainError("empty sample");
  if (replications < 1) throw DomainError("need at least one replication");
  const std::size_t m = stats.size();
  std::vector<TestResult> out(m);
  draw_hash_ = 0;

  if (is_degenerate(s)) {
    for (std::size_t i = 0; i < m; ++i) {
      // At t = 0 every statistic but theta is identically 0 (p_hat = 1, all Z_k = 0).
      double observed = 0.0;
      if (s.total() > 0) {
        observed = evaluate(stats[i], s);
      } else if (stats[i] == Statistic::ThetaTilde) {
        observed = std::numeric_limits<double>::quiet_NaN();
      }
      out[i] = {stats[i], observed, 1.0, replications, rng.seed(), replications, 0, true};
    }
    return out;
  }

  const std::int64_t n = s.n();
  const std::int64_t t = s.total();
  const StatisticEvaluator ev(n, t);
  const CompositionSpec spec(n, t);
  bars_.assign(static_cast<std::size_t>(n - 1), 0);
  parts_.assign(static_cast<std::size_t>(n), 0);
  counts_.assign(ev.table_size(), 0);
  observed_.assign(m, 0.0);
  draw_values_.assign(m, 0.0);
  extreme_.assign(m, 0);
  undefined_.assign(m, 0);

  for (const auto v : s.values()) ++counts_[static_cast<std::size_t>(v)];
  ev.evaluate(counts_, s.min_value(), s.max_value(), stats, observed_);
  for (const auto v : s.values()) counts_[static_cast<std::size_t>(v)] = 0;

  for (std::int64_t r = 0; r < replications; ++r) {
    sample_conditional_geometric_into(spec, rng, bars_, parts_);
    std::int64_t lo = t;
    std::int64_t hi = 0;
    std::uint64_t h = 0;
    for (const auto v : parts_) {
      ++counts_[static_cast<std::size_t>(v)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      h = mix_hash(h, static_cast<std::uint64_t>(v));
    }
    draw_hash_ = mix_hash(draw_hash_, h);
    ev.evaluate(counts_, lo, hi, stats, draw_values_);
    for (const auto v : parts_) counts_[static_cast<std::size_t>(v)] = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = draw_values_[i];
      if (std::isnan(d)) {
        ++undefined_[i];
      } else if (d >= observed_[i]) {
        ++extreme_[i];
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    out[i] = {stats[i],
              observed_[i],
              static_cast<double>(extreme_[i]) / static_cast<double>(replications),
              replications,
              rng.seed(),
              extreme_[i],
              undefined_[i],
              false};
  }
  return out;
}

bool ConditionalTester::p_values(const Sample& s, std::span<const Statistic> stats, std::int64_t replications,
                                 RandomStream& rng, std::span<double> p_values) {
  const auto results = run(s, stats, replications, rng);
  for (std::size_t i = 0; i < results.size(); ++i) p_values[i] = results[i].p_value;
  return results.empty() || !results.front().degenerate;
}

std::vector<TestResult> conditional_p_values(const Sample& s, std::span<const Statistic> stats,
                                             std::int64_t replications, RandomStream& rng) {
  ConditionalTester tester;
  return tester.run(s, stats, replications, rng);
}

TestResult conditional_p_value(const Sample& s, Statistic stat, std::int64_t replications, RandomStream& rng) {
  return conditional_p_values(s, std::span<const Statistic>(&stat, 1), replications, rng).front();
}

// ---------------------------------------------------------------------------

std::vector<StatisticRate> StudyResult::rates_at(double level) const {
  const std::size_t m = statistics.size();
  std::vector<StatisticRate> out;
  out.reserve(m);
  for (std::size_t s = 0; s < m; ++s) {
    std::int64_t rejections = 0;
    for (std::int64_t i = 0; i < outer; ++i) {
      if (p_values[static_cast<std::size_t>(i) * m + s] <= level) ++rejections;
    }
    const double rate = outer ? static_cast<double>(rejections) / static_cast<double>(outer) : 0.0;
    const double se = outer ? std::sqrt(rate * (1.0 - rate) / static_cast<double>(outer)) : 0.0;
    out.push_back({statistics[s], rejections, rate, se});
  }
  return out;
}

StudyResult run_power_study(const StudySpec& spec, const ProgressCallback& progress) {
  if (spec.n < 1) throw DomainError("study: n must be >= 1");
  if (spec.outer < 1 || spec.inner < 1) throw DomainError("study: M and K must be >= 1");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw DomainError("study: alpha must lie in (0, 1)");
  if (spec.statistics.empty()) throw DomainError("study: no statistics requested");

  StudyResult result;
  result.alternative = describe(spec.alternative);
  result.n = spec.n;
  result.alpha = spec.alpha;
  result.outer = spec.outer;
  result.inner = spec.inner;
  result.seed = spec.seed;
  result.statistics = spec.statistics;
  const std::size_t m = spec.statistics.size();
  result.p_values.assign(static_cast<std::size_t>(spec.outer) * m, 1.0);
  std::vector<char> degenerate(static_cast<std::size_t>(spec.outer), 0);

  std::atomic<std::int64_t> next{0};
  std::int64_t finished = 0;
  std::mutex progress_mutex;
  std::exception_ptr failure;

  auto worker = [&]() {
    ConditionalTester tester;
    try {
      for (std::int64_t i = next.fetch_add(1); i < spec.outer; i = next.fetch_add(1)) {
        RandomStream rng(spec.seed, static_cast<std::uint64_t>(i));
        const Sample data = sample(spec.alternative, static_cast<std::size_t>(spec.n), rng);
        std::span<double> row(result.p_values.data() + static_cast<std::size_t>(i) * m, m);
        tester.p_values(data, spec.statistics, spec.inner, rng, row);
        degenerate[static_cast<std::size_t>(i)] = data.total() == 0;
        if (progress) {
          std::lock_guard lock(progress_mutex);
          progress(++finished, spec.outer);
        }
      }
    } catch (...) {
      std::lock_guard lock(progress_mutex);
      if (!failure) failure = std::current_exception();
      next.store(spec.outer);
    }
  };

  unsigned workers = spec.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.workers;
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, spec.outer));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.degenerate = std::count(degenerate.begin(), degenerate.end(), 1);
  result.rates = result.rates_at(spec.alpha);
  return result;
}

StudyResult run_type1_study(double p, const StudySpec& spec, const ProgressCallback& progress) {
  StudySpec null_spec = spec;
  null_spec.alternative = GeometricParams(p);
  return run_power_study(null_spec, progress);
}

std::string study_to_csv(const StudyResult& r) {
  std::ostringstream os;
  os << "alternative,n,alpha,M,K,seed,statistic,rejections,rate,std_error,degenerate\n";
  os << std::setprecision(6);
  for (const auto& rate : r.rates) {
    os << '"' << r.alternative << "\"," << r.n << ',' << r.alpha << ',' << r.outer << ',' << r.inner << ','
       << r.seed << ',' << name(rate.statistic) << ',' << rate.rejections << ',' << std::fixed
       << std::setprecision(3) << rate.rate << ',' << std::setprecision(4) << rate.std_error
       << std::defaultfloat << std::setprecision(6) << ',' << r.degenerate << '\n';
  }
  return os.str();
}

std::string study_to_json(const StudyResult& r) {
  nlohmann::json j;
  j["alternative"] = r.alternative;
  j["n"] = r.n;
  j["alpha"] = r.alpha;
  j["M"] = r.outer;
  j["K"] = r.inner;
  j["seed"] = r.seed;
  j["degenerate"] = r.degenerate;
  auto& rates = j["rates"] = nlohmann::json::array();
  for (const auto& rate : r.rates) {
    rates.push_back({{"statistic", std::string(name(rate.statistic))},
                     {"label", std::string(label(rate.statistic))},
                     {"rejections", rate.rejections},
                     {"rate", rate.rate},
                     {"std_error", rate.std_error}});
  }
  return j.dump(2);
}

}  // namespace condgof
