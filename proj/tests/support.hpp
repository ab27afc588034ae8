#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace testsupport {

/// Upper tail P(chi2_df >= x).
inline double chi_square_sf(double x, double df) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

/// Pearson statistic of observed counts against expected probabilities.
inline double pearson(const std::vector<double>& observed, const std::vector<double>& probs, double total) {
  double x2 = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * probs[i];
    x2 += (observed[i] - e) * (observed[i] - e) / e;
  }
  return x2;
}

/// Every composition of t into n non-negative parts, lexicographic.
inline std::vector<std::vector<std::int64_t>> all_compositions(std::int64_t n, std::int64_t t) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(n), 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i + 1 == cur.size()) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      cur[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, t);
  return out;
}

/// Exact binomial coefficient as double (small arguments only).
inline double choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Goodness-of-fit p-value of `draws` (state -> hits) against `probs` (state -> probability).
template <typename State>
double chi_square_p(const std::map<State, double>& hits, const std::map<State, double>& probs, double total) {
  std::vector<double> o;
  std::vector<double> p;
  for (const auto& [state, prob] : probs) {
    const auto it = hits.find(state);
    o.push_back(it == hits.end() ? 0.0 : it->second);
    p.push_back(prob);
  }
  return chi_square_sf(pearson(o, p, total), static_cast<double>(p.size() - 1));
}

}  // namespace testsupport
