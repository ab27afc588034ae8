#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "condgof/conditional.hpp"
#include "support.hpp"

using namespace condgof;
using testsupport::all_compositions;
using testsupport::choose;

namespace {

using State = std::vector<std::int64_t>;

/// RandomStream that counts uniforms.
struct CountingSource {
  RandomStream inner;
  std::int64_t calls = 0;
  double uniform() {
    ++calls;
    return inner.uniform();
  }
};

/// Uniform is the only source the sampler reads; a constant exercises the
/// boundaries of the acceptance test.
struct ConstantSource {
  double value;
  double uniform() const { return value; }
};

std::map<State, double> uniform_probs(std::int64_t n, std::int64_t t) {
  std::map<State, double> probs;
  const auto all = all_compositions(n, t);
  for (const auto& c : all) probs[c] = 1.0 / static_cast<double>(all.size());
  return probs;
}

/// P(y | sum = t) proportional to prod w(i, y_i).
template <typename W>
std::map<State, double> conditional_probs(std::int64_t n, std::int64_t t, W weight) {
  std::map<State, double> probs;
  double z = 0.0;
  for (const auto& c : all_compositions(n, t)) {
    double w = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) w *= weight(i, c[i]);
    if (w > 0.0) {
      probs[c] = w;
      z += w;
    }
  }
  for (auto& [s, p] : probs) p /= z;
  return probs;
}

}  // namespace

TEST_CASE("bijection: every bar set maps to a distinct composition and back") {
  for (std::int64_t n = 1; n <= 5; ++n) {
    for (std::int64_t t = 0; t <= 8; ++t) {
      const CompositionSpec spec(n, t);
      const auto comps = all_compositions(n, t);
      CHECK(static_cast<double>(comps.size()) == choose(t + n - 1, n - 1));
      std::set<State> images;
      for (const auto& c : comps) {
        const BarPositions bars = composition_to_bars(c);
        REQUIRE(bars.size() == static_cast<std::size_t>(n - 1));
        for (std::size_t j = 0; j < bars.size(); ++j) {
          CHECK(bars[j] >= 1);
          CHECK(bars[j] <= spec.slots());
          if (j > 0) CHECK(bars[j] > bars[j - 1]);
        }
        const Composition back = bars_to_composition(bars, spec);
        CHECK(back == c);
        images.insert(bars);
      }
      CHECK(images.size() == comps.size());
    }
  }
}

TEST_CASE("bar decoding follows the stars-and-bars layout") {
  const CompositionSpec spec(4, 5);  // 8 slots, 3 bars
  const BarPositions bars{2, 3, 7};  // * | | * * * | *
  CHECK(bars_to_composition(bars, spec) == Composition{1, 0, 3, 1});
  CHECK(composition_to_bars(Composition{1, 0, 3, 1}) == bars);
}

TEST_CASE("malformed bar sets are rejected") {
  const CompositionSpec spec(3, 4);
  CHECK_THROWS_AS(bars_to_composition(BarPositions{2}, spec), MalformedInputError);
  CHECK_THROWS_AS(bars_to_composition(BarPositions{3, 3}, spec), MalformedInputError);
  CHECK_THROWS_AS(bars_to_composition(BarPositions{0, 3}, spec), MalformedInputError);
  CHECK_THROWS_AS(bars_to_composition(BarPositions{2, 7}, spec), MalformedInputError);
  CHECK_THROWS_AS(composition_to_bars(Composition{1, -1}), MalformedInputError);
  CHECK_THROWS_AS(CompositionSpec(0, 3), DomainError);
  CHECK_THROWS_AS(CompositionSpec(2, -1), DomainError);
}

TEST_CASE("bar draw reads at most t + n - 1 uniforms and stops early once forced") {
  CountingSource src{RandomStream(1, 0)};
  for (int rep = 0; rep < 200; ++rep) {
    src.calls = 0;
    const auto bars = draw_bars_uniform(CompositionSpec(6, 9), src);
    CHECK(src.calls <= 14);
    CHECK(std::is_sorted(bars.begin(), bars.end()));
  }
  // u close to 1 rejects every optional slot: bars land in the lowest slots
  // and are placed without reading further uniforms.
  ConstantSource high{0.999999};
  CHECK(draw_bars_uniform(CompositionSpec(4, 5), high) == BarPositions{1, 2, 3});
  ConstantSource zero{0.0};
  CHECK(draw_bars_uniform(CompositionSpec(4, 5), zero) == BarPositions{6, 7, 8});
  CHECK(draw_bars_uniform(CompositionSpec(1, 5), zero).empty());
}

TEST_CASE("conditional geometric draws are uniform on compositions") {
  RandomStream rng(2024, 1);
  for (const auto [n, t] : {std::pair<std::int64_t, std::int64_t>{3, 4}, {4, 3}, {2, 6}, {5, 2}}) {
    const CompositionSpec spec(n, t);
    const auto probs = uniform_probs(n, t);
    std::map<State, double> hits;
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
      const auto c = sample_conditional_geometric(spec, rng);
      REQUIRE(std::accumulate(c.begin(), c.end(), std::int64_t{0}) == t);
      hits[c] += 1.0;
    }
    INFO("n = ", n, ", t = ", t);
    CHECK(hits.size() == probs.size());
    CHECK(testsupport::chi_square_p(hits, probs, draws) > 1e-3);
  }
}

TEST_CASE("negative binomial with unit sizes matches the geometric sampler") {
  RandomStream rng(31, 0);
  const std::vector<std::int64_t> sizes{1, 1, 1};
  const auto probs = uniform_probs(3, 5);
  std::map<State, double> hits;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) hits[sample_conditional_negbinomial(sizes, 5, rng)] += 1.0;
  CHECK(testsupport::chi_square_p(hits, probs, draws) > 1e-3);
}

TEST_CASE("negative binomial sampler follows the exact conditional law") {
  // P(y | t) proportional to prod C(y_i + r_i - 1, y_i)
  RandomStream rng(32, 0);
  const std::vector<std::int64_t> sizes{2, 1, 3};
  const std::int64_t t = 5;
  const auto probs = conditional_probs(3, t, [&](std::size_t i, std::int64_t y) {
    return choose(y + sizes[i] - 1, y);
  });
  std::map<State, double> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto y = sample_conditional_negbinomial(sizes, t, rng);
    REQUIRE(std::accumulate(y.begin(), y.end(), std::int64_t{0}) == t);
    hits[y] += 1.0;
  }
  CHECK(testsupport::chi_square_p(hits, probs, draws) > 1e-3);
}

TEST_CASE("Poisson conditional is multinomial with weight-proportional cells") {
  RandomStream rng(33, 0);
  const std::vector<double> w{1.0, 2.0, 0.5};
  const std::int64_t t = 4;
  const auto probs = conditional_probs(3, t, [&](std::size_t i, std::int64_t y) {
    return std::pow(w[i], static_cast<double>(y)) / std::tgamma(static_cast<double>(y) + 1.0);
  });
  std::map<State, double> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) hits[sample_conditional_poisson(w, t, rng)] += 1.0;
  CHECK(testsupport::chi_square_p(hits, probs, draws) > 1e-3);
  for (const auto& [state, p] : probs) {
    CHECK(std::exp(multinomial_log_pmf(state, w)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("binomial conditional is multivariate hypergeometric") {
  RandomStream rng(34, 0);
  const std::vector<std::int64_t> m{3, 2, 4};
  const std::int64_t t = 5;
  const auto probs = conditional_probs(3, t, [&](std::size_t i, std::int64_t y) { return choose(m[i], y); });
  std::map<State, double> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto y = sample_conditional_binomial(m, t, rng);
    for (std::size_t j = 0; j < y.size(); ++j) REQUIRE(y[j] <= m[j]);
    hits[y] += 1.0;
  }
  CHECK(testsupport::chi_square_p(hits, probs, draws) > 1e-3);
  CHECK_THROWS_AS(sample_conditional_binomial(m, 10, rng), InfeasibleTotalError);
  CHECK(sample_conditional_binomial(m, 9, rng) == Composition{3, 2, 4});
}

TEST_CASE("hypergeometric draws have the exact law") {
  RandomStream rng(35, 0);
  // population 10 with 4 successes, 5 draws
  std::map<std::int64_t, double> probs;
  for (std::int64_t k = 0; k <= 4; ++k) probs[k] = choose(4, k) * choose(6, 5 - k) / choose(10, 5);
  std::map<std::int64_t, double> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) hits[draw_hypergeometric(10, 4, 5, rng)] += 1.0;
  CHECK(testsupport::chi_square_p(hits, probs, draws) > 1e-3);
}

TEST_CASE("Metropolis-Hastings sampler with binomial coefficients matches the hypergeometric") {
  RandomStream rng(36, 0);
  const std::int64_t size = 4;  // a(y) > 0 for every reachable y <= t
  const CompositionSpec spec(3, 4);
  const auto probs = conditional_probs(3, 4, [&](std::size_t, std::int64_t y) { return choose(size, y); });
  const auto draws = sample_conditional_powerseries_mh(coefficients::binomial(size), spec, 60000, rng,
                                                       McmcOptions{1000, 2});
  std::map<State, double> hits;
  for (const auto& s : draws.states) hits[s] += 1.0;
  CHECK(testsupport::chi_square_p(hits, probs, static_cast<double>(draws.states.size())) > 1e-3);
}

TEST_CASE("Metropolis-Hastings with geometric coefficients accepts everything") {
  RandomStream rng(37, 0);
  const auto draws = sample_conditional_powerseries_mh(coefficients::geometric(), CompositionSpec(4, 6), 500, rng);
  CHECK(draws.accepted == draws.proposals);
  CHECK(draws.states.size() == 500);
}

TEST_CASE("chain rejects coefficient sets with holes the proposal can reach") {
  CHECK_THROWS_AS(PowerSeriesChain(coefficients::binomial(2), CompositionSpec(3, 4)), SupportError);
  CHECK_NOTHROW(PowerSeriesChain(coefficients::binomial(2), CompositionSpec(1, 2)));
  CHECK_THROWS_AS(PowerSeriesChain(coefficients::binomial(2), CompositionSpec(1, 3)), SupportError);
}

TEST_CASE("sampler is deterministic for a fixed stream") {
  RandomStream a(99, 4);
  RandomStream b(99, 4);
  const CompositionSpec spec(10, 30);
  for (int i = 0; i < 50; ++i) CHECK(sample_conditional_geometric(spec, a) == sample_conditional_geometric(spec, b));
}
