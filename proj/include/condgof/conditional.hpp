#pragma once

// Sampling from the conditional law of a sample given its sum.
//
// Under a geometric null the conditional law is uniform on the compositions
// of t into n non-negative parts. A composition is encoded by the positions
// k_1 < ... < k_{n-1} of n - 1 bars among t + n - 1 slots (the other t slots
// are stars); the parts are the star runs between consecutive bars.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "condgof/distributions.hpp"
#include "condgof/errors.hpp"
#include "condgof/random.hpp"

namespace condgof {

/// n parts summing to t.
struct CompositionSpec {
  std::int64_t n;
  std::int64_t t;
  CompositionSpec(std::int64_t n, std::int64_t t);

  /// t + n - 1, the number of slots.
  std::int64_t slots() const noexcept { return t + n - 1; }
};

/// Parts x_1..x_n, each >= 0, summing to t.
using Composition = std::vector<std::int64_t>;
/// Strictly increasing k_1..k_{n-1} in {1, ..., t + n - 1}.
using BarPositions = std::vector<std::int64_t>;

/// x_1 = k_1 - 1, x_i = k_i - k_{i-1} - 1, x_n = t - (k_{n-1} - (n - 1)).
/// Throws MalformedInputError if `bars` is not a valid bar set for `spec`.
Composition bars_to_composition(std::span<const std::int64_t> bars, const CompositionSpec& spec);

/// k_j = x_1 + ... + x_j + j. Throws MalformedInputError on a negative part.
BarPositions composition_to_bars(std::span<const std::int64_t> parts);

/// Unchecked bars -> parts; `parts.size()` must be n.
inline void bars_to_parts(std::span<const std::int64_t> bars, std::int64_t t,
                          std::span<std::int64_t> parts) noexcept {
  const std::size_t n = parts.size();
  std::int64_t prev = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    parts[i] = bars[i] - prev - 1;
    prev = bars[i];
  }
  parts[n - 1] = t + static_cast<std::int64_t>(n) - 1 - prev;
}

/// Uniform draw of n - 1 bar positions out of t + n - 1 slots.
///
/// Scans slots from t + n - 1 down to 1. With N bars placed and V slots
/// skipped so far, the current slot becomes a bar with probability
/// (n - 1 - N) / (t + n - 1 - N - V). Once the remaining slots equal the
/// remaining bars the rest are bars with probability one and no further
/// uniforms are read. Reads at most t + n - 1 uniforms. Every bar set has
/// probability 1 / C(t + n - 1, n - 1).
///
/// `bars.size()` must be n - 1; filled in increasing order.
template <UniformSource R>
void draw_bars_uniform_into(const CompositionSpec& spec, R& rng, std::span<std::int64_t> bars) {
  assert(static_cast<std::int64_t>(bars.size()) == spec.n - 1);
  std::int64_t remaining_bars = spec.n - 1;
  std::int64_t slot = spec.slots();
  while (remaining_bars > 0) {
    // slot == number of unvisited slots == t + n - 1 - N - V
    if (slot == remaining_bars) {
      for (; remaining_bars > 0; --remaining_bars, --slot) {
        bars[static_cast<std::size_t>(remaining_bars - 1)] = slot;
      }
      break;
    }
    const double u = rng.uniform();
    if (u * static_cast<double>(slot) < static_cast<double>(remaining_bars)) {
      bars[static_cast<std::size_t>(remaining_bars - 1)] = slot;
      --remaining_bars;
    }
    --slot;
  }
}

template <UniformSource R>
BarPositions draw_bars_uniform(const CompositionSpec& spec, R& rng) {
  BarPositions bars(static_cast<std::size_t>(spec.n - 1));
  draw_bars_uniform_into(spec, rng, std::span<std::int64_t>(bars));
  return bars;
}

/// Uniform composition of t into n parts (the geometric conditional law).
/// `bars_scratch.size()` must be n - 1 and `parts.size()` n.
template <UniformSource R>
void sample_conditional_geometric_into(const CompositionSpec& spec, R& rng,
                                       std::span<std::int64_t> bars_scratch,
                                       std::span<std::int64_t> parts) {
  if (spec.n == 1) {
    parts[0] = spec.t;
    return;
  }
  draw_bars_uniform_into(spec, rng, bars_scratch);
  bars_to_parts(bars_scratch, spec.t, parts);
}

template <UniformSource R>
Composition sample_conditional_geometric(const CompositionSpec& spec, R& rng) {
  Composition parts(static_cast<std::size_t>(spec.n));
  BarPositions bars(static_cast<std::size_t>(spec.n - 1));
  sample_conditional_geometric_into(spec, rng, std::span<std::int64_t>(bars), std::span<std::int64_t>(parts));
  return parts;
}

/// Independent NB(r_i, p) given their sum t: a uniform composition of t into
/// R = sum r_i parts, aggregated over consecutive blocks of r_i parts. Read
/// directly off the bars: y_i = k_{c_i} - k_{c_{i-1}} - r_i with
/// c_i = r_1 + ... + r_i, k_0 = 0 and k_R = t + R.
template <UniformSource R>
Composition sample_conditional_negbinomial(std::span<const std::int64_t> sizes, std::int64_t t, R& rng) {
  if (sizes.empty()) throw DomainError("negative binomial: need at least one size");
  std::int64_t total_parts = 0;
  for (const auto r : sizes) {
    if (r < 1) throw DomainError("negative binomial: every r_i must be >= 1");
    total_parts += r;
  }
  const CompositionSpec spec(total_parts, t);
  Composition y(sizes.size());
  if (sizes.size() == 1) {
    y[0] = t;
    return y;
  }
  const BarPositions bars = draw_bars_uniform(spec, rng);
  auto bar = [&](std::int64_t c) { return c == 0 ? 0 : (c == total_parts ? t + total_parts : bars[c - 1]); };
  std::int64_t c_prev = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::int64_t c = c_prev + sizes[i];
    y[i] = bar(c) - bar(c_prev) - sizes[i];
    c_prev = c;
  }
  return y;
}

/// Independent Pois(a_i lambda) given their sum t: Multinomial(t; a_i / sum a).
/// Drawn cell by cell with conditional binomials.
template <typename R>
  requires std::uniform_random_bit_generator<R>
Composition sample_conditional_poisson(std::span<const double> weights, std::int64_t t, R& rng) {
  if (weights.empty()) throw DomainError("poisson: need at least one weight");
  if (t < 0) throw DomainError("total must be non-negative");
  double remaining_weight = 0.0;
  for (const double a : weights) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("poisson: weights must be positive");
    remaining_weight += a;
  }
  Composition x(weights.size(), 0);
  std::int64_t left = t;
  for (std::size_t i = 0; i + 1 < weights.size() && left > 0; ++i) {
    const double prob = std::min(1.0, weights[i] / remaining_weight);
    x[i] = std::binomial_distribution<std::int64_t>(left, prob)(rng);
    left -= x[i];
    remaining_weight -= weights[i];
  }
  x.back() += left;
  return x;
}

/// Hypergeometric draw: successes among `draws` taken without replacement
/// from `population` items of which `successes` are marked. Inversion from
/// the lower end of the support.
template <UniformSource R>
std::int64_t draw_hypergeometric(std::int64_t population, std::int64_t successes, std::int64_t draws, R& rng) {
  const std::int64_t lo = std::max<std::int64_t>(0, draws - (population - successes));
  const std::int64_t hi = std::min(successes, draws);
  if (lo == hi) return lo;
  const auto d = [](std::int64_t v) { return static_cast<double>(v); };
  double prob = std::exp(log_choose(d(successes), d(lo)) +
                         log_choose(d(population - successes), d(draws - lo)) -
                         log_choose(d(population), d(draws)));
  double u = rng.uniform();
  std::int64_t x = lo;
  while (x < hi) {
    if (u < prob) return x;
    u -= prob;
    prob *= d(successes - x) * d(draws - x) / (d(x + 1) * d(population - successes - draws + x + 1));
    ++x;
  }
  return hi;
}

/// Independent Bin(m_i, p) given their sum t: multivariate hypergeometric,
/// x_i ~ Hypergeometric(sum_{j>=i} m_j, m_i, t - sum_{j<i} x_j).
template <UniformSource R>
Composition sample_conditional_binomial(std::span<const std::int64_t> sizes, std::int64_t t, R& rng) {
  if (sizes.empty()) throw DomainError("binomial: need at least one size");
  if (t < 0) throw DomainError("total must be non-negative");
  std::int64_t population = 0;
  for (const auto m : sizes) {
    if (m < 1) throw DomainError("binomial: every size must be >= 1");
    population += m;
  }
  if (t > population) {
    throw InfeasibleTotalError("binomial: total " + std::to_string(t) + " exceeds sum of sizes " +
                               std::to_string(population));
  }
  Composition x(sizes.size(), 0);
  std::int64_t left = t;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    x[i] = draw_hypergeometric(population, sizes[i], left, rng);
    left -= x[i];
    population -= sizes[i];
  }
  x.back() = left;
  return x;
}

// ---------------------------------------------------------------------------
// Power-series nulls: P(x | sum = t) proportional to prod a(x_i).

/// Independence Metropolis-Hastings chain on the compositions of t into n
/// parts. Proposals are uniform compositions; a proposal y replacing x is
/// accepted with probability min(1, prod a(y_i) / prod a(x_i)).
class PowerSeriesChain {
 public:
  /// Tabulates log a(x) for x = 0..t. Throws SupportError if a(x) = 0 for
  /// some x the proposal can reach (every x <= t when n >= 2, x = t when n = 1).
  PowerSeriesChain(const LogCoefficient& log_a, const CompositionSpec& spec);

  /// Draws the starting state from the proposal.
  template <UniformSource R>
  void initialize(R& rng) {
    sample_conditional_geometric_into(spec_, rng, bars_, state_);
    log_weight_ = log_weight(state_);
    initialized_ = true;
  }

  /// One MH transition; returns whether the proposal was accepted.
  template <UniformSource R>
  bool step(R& rng) {
    if (!initialized_) initialize(rng);
    sample_conditional_geometric_into(spec_, rng, bars_, proposal_);
    const double proposed = log_weight(proposal_);
    ++proposals_;
    const double log_ratio = proposed - log_weight_;
    if (log_ratio < 0.0 && !(std::log(detail::open_unit(rng.uniform())) < log_ratio)) return false;
    state_.swap(proposal_);
    log_weight_ = proposed;
    ++accepted_;
    return true;
  }

  std::span<const std::int64_t> state() const noexcept { return state_; }
  std::uint64_t proposals() const noexcept { return proposals_; }
  std::uint64_t accepted() const noexcept { return accepted_; }
  double acceptance_rate() const noexcept {
    return proposals_ ? static_cast<double>(accepted_) / static_cast<double>(proposals_) : 0.0;
  }

 private:
  double log_weight(std::span<const std::int64_t> x) const {
    double s = 0.0;
    for (const auto v : x) s += log_a_[static_cast<std::size_t>(v)];
    return s;
  }

  CompositionSpec spec_;
  std::vector<double> log_a_;
  std::vector<std::int64_t> bars_;
  std::vector<std::int64_t> state_;
  std::vector<std::int64_t> proposal_;
  double log_weight_ = 0.0;
  bool initialized_ = false;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepted_ = 0;
};

struct McmcOptions {
  std::int64_t burn_in = 1000;
  std::int64_t thin = 1;
};

struct McmcDraws {
  std::vector<Composition> states;
  std::uint64_t proposals;
  std::uint64_t accepted;
};

/// `count` states kept after `burn_in` transitions, one every `thin` transitions.
template <UniformSource R>
McmcDraws sample_conditional_powerseries_mh(const LogCoefficient& log_a, const CompositionSpec& spec,
                                            std::int64_t count, R& rng, McmcOptions opts = {}) {
  if (opts.burn_in < 0 || opts.thin < 1 || count < 0) throw DomainError("mcmc: invalid burn-in/thin/count");
  PowerSeriesChain chain(log_a, spec);
  chain.initialize(rng);
  for (std::int64_t i = 0; i < opts.burn_in; ++i) chain.step(rng);
  McmcDraws out{{}, 0, 0};
  out.states.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    for (std::int64_t j = 0; j < opts.thin; ++j) chain.step(rng);
    out.states.emplace_back(chain.state().begin(), chain.state().end());
  }
  out.proposals = chain.proposals();
  out.accepted = chain.accepted();
  return out;
}

}  // namespace condgof
