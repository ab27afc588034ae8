#include <doctest.h>

#include <atomic>
#include <cmath>
#include <json.hpp>

#include "condgof/engine.hpp"
#include "condgof/errors.hpp"
#include "condgof/io.hpp"
#include "support.hpp"

using namespace condgof;

TEST_CASE("Monte Carlo p-value converges to the exact conditional p-value") {
  // Exact value by enumerating all compositions, each with probability 1/C(t+n-1, n-1).
  const Sample x({0, 0, 1, 5, 2});
  const std::vector<Statistic> stats{Statistic::W2, Statistic::CR, Statistic::SB0, Statistic::SWU};
  const auto observed_of = [&](const Sample& s) {
    std::vector<double> v;
    for (const auto st : stats) v.push_back(evaluate(st, s));
    return v;
  };
  const auto obs = observed_of(x);
  const auto all = testsupport::all_compositions(x.n(), x.total());
  std::vector<double> exact(stats.size(), 0.0);
  for (const auto& c : all) {
    const auto v = observed_of(Sample(c));
    for (std::size_t i = 0; i < stats.size(); ++i) exact[i] += v[i] >= obs[i] ? 1.0 : 0.0;
  }
  for (auto& e : exact) e /= static_cast<double>(all.size());

  RandomStream rng(8, 0);
  const std::int64_t k = 40000;
  const auto res = conditional_p_values(x, stats, k, rng);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    INFO(name(stats[i]), ": exact ", exact[i], ", estimate ", res[i].p_value);
    const double se = std::sqrt(exact[i] * (1 - exact[i]) / static_cast<double>(k));
    CHECK(std::abs(res[i].p_value - exact[i]) <= 4.0 * se + 1e-12);
    CHECK(res[i].observed == doctest::Approx(obs[i]));
    CHECK(res[i].extreme_count == std::llround(res[i].p_value * static_cast<double>(k)));
  }
}

TEST_CASE("all statistics are scored on the same conditional draws") {
  const Sample x = fixtures::load("dweibull_n50");
  ConditionalTester a;
  ConditionalTester b;
  RandomStream ra(3, 0);
  RandomStream rb(3, 0);
  const std::vector<Statistic> one{Statistic::SWL};
  const std::vector<Statistic> all(kAllStatistics.begin(), kAllStatistics.end());
  const auto single = a.run(x, one, 500, ra);
  const auto many = b.run(x, all, 500, rb);
  CHECK(a.last_draw_hash() == b.last_draw_hash());
  CHECK(a.last_draw_hash() != 0);
  // and the per-statistic results do not depend on what else was requested
  CHECK(single[0].p_value == many[8].p_value);
  CHECK(many[8].statistic == Statistic::SWL);
}

TEST_CASE("p-values are reproducible for a fixed seed") {
  const Sample x = fixtures::load("betageo_n100");
  const std::vector<Statistic> stats(kAllStatistics.begin(), kAllStatistics.end());
  RandomStream r1(10, 0);
  RandomStream r2(10, 0);
  const auto a = conditional_p_values(x, stats, 1000, r1);
  const auto b = conditional_p_values(x, stats, 1000, r2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].p_value == b[i].p_value);
}

TEST_CASE("degenerate samples give p = 1 without drawing") {
  const std::vector<Statistic> stats{Statistic::W2, Statistic::CR};
  RandomStream rng(1, 0);
  const auto zero = conditional_p_values(Sample({0, 0, 0, 0}), stats, 100, rng);
  for (const auto& r : zero) {
    CHECK(r.degenerate);
    CHECK(r.p_value == 1.0);
  }
  CHECK(zero[0].observed == 0.0);
  CHECK(zero[1].observed == 0.0);
  const auto theta = conditional_p_value(Sample({0, 0}), Statistic::ThetaTilde, 10, rng);
  CHECK(std::isnan(theta.observed));
  const auto single = conditional_p_values(Sample({7}), stats, 100, rng);
  CHECK(single[0].degenerate);
  CHECK(single[0].p_value == 1.0);
  CHECK_THROWS_AS(conditional_p_values(Sample(), stats, 100, rng), DomainError);
  CHECK_THROWS_AS(conditional_p_values(Sample({1, 2}), stats, 0, rng), DomainError);
}

TEST_CASE("most concentrated sample: p is the share of equally concentrated compositions") {
  // CR is maximal exactly on the 3 permutations of (6, 0, 0) among C(8, 2) = 28 compositions.
  const Sample x({6, 0, 0});
  RandomStream rng(2, 0);
  const std::int64_t k = 20000;
  const auto r = conditional_p_value(x, Statistic::CR, k, rng);
  const double exact = 3.0 / 28.0;
  CHECK(std::abs(r.p_value - exact) < 4.0 * std::sqrt(exact * (1 - exact) / static_cast<double>(k)));
  // the least concentrated sample is never extreme in that direction
  const auto flat = conditional_p_value(Sample({2, 2, 2}), Statistic::CR, 2000, rng);
  CHECK(flat.p_value == 1.0);
}

TEST_CASE("study results do not depend on the worker count") {
  StudySpec spec;
  spec.alternative = BetaGeometricParams::from_alpha_beta(2.0, 2.0);
  spec.n = 15;
  spec.outer = 60;
  spec.inner = 200;
  spec.seed = 4;
  spec.workers = 1;
  const auto serial = run_power_study(spec);
  spec.workers = 3;
  std::atomic<std::int64_t> calls{0};
  std::int64_t last_total = 0;
  const auto parallel = run_power_study(spec, [&](std::int64_t, std::int64_t total) {
    ++calls;
    last_total = total;
  });
  CHECK(serial.p_values == parallel.p_values);
  CHECK(calls == 60);
  CHECK(last_total == 60);
  for (std::size_t i = 0; i < serial.rates.size(); ++i) CHECK(serial.rates[i].rate == parallel.rates[i].rate);
}

TEST_CASE("study rates are rejection frequencies") {
  StudySpec spec;
  spec.alternative = GeometricParams(0.5);
  spec.n = 5;
  spec.outer = 200;
  spec.inner = 100;
  spec.alpha = 0.1;
  const auto r = run_type1_study(0.5, spec);
  CHECK(r.alternative == "Geom(0.5)");
  REQUIRE(r.p_values.size() == 200 * r.statistics.size());
  for (std::size_t s = 0; s < r.statistics.size(); ++s) {
    std::int64_t rej = 0;
    for (std::size_t i = 0; i < 200; ++i) rej += r.p_values[i * r.statistics.size() + s] <= 0.1;
    CHECK(r.rates[s].rejections == rej);
    CHECK(r.rates[s].rate == doctest::Approx(rej / 200.0));
    CHECK(r.rates[s].std_error == doctest::Approx(std::sqrt(r.rates[s].rate * (1 - r.rates[s].rate) / 200.0)));
  }
  CHECK(r.degenerate > 0);  // n = 5 at p = 0.5 gives t = 0 with probability 1/32
  const auto at_one = r.rates_at(1.0);
  for (const auto& rate : at_one) CHECK(rate.rate == 1.0);
}

TEST_CASE("study serialisation") {
  StudySpec spec;
  spec.alternative = PoissonParams(1.0);
  spec.n = 10;
  spec.outer = 20;
  spec.inner = 50;
  spec.statistics = {Statistic::W2, Statistic::SWU};
  const auto r = run_power_study(spec);
  const auto j = nlohmann::json::parse(study_to_json(r));
  CHECK(j["alternative"] == "Pois(1)");
  CHECK(j["M"] == 20);
  CHECK(j["rates"].size() == 2);
  CHECK(j["rates"][1]["statistic"] == "swu");
  const std::string csv = study_to_csv(r);
  CHECK(csv.rfind("alternative,n,alpha,M,K,seed,statistic", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("study validation and error propagation") {
  StudySpec spec;
  spec.outer = 0;
  CHECK_THROWS_AS(run_power_study(spec), DomainError);
  spec.outer = 10;
  spec.alpha = 1.5;
  CHECK_THROWS_AS(run_power_study(spec), DomainError);
  spec.alpha = 0.1;
  spec.statistics.clear();
  CHECK_THROWS_AS(run_power_study(spec), DomainError);
}
