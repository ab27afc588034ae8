#include <doctest.h>

#include <cmath>

#include "condgof/errors.hpp"
#include "condgof/estimation.hpp"
#include "condgof/io.hpp"
#include "condgof/stats.hpp"

using namespace condgof;

namespace {

template <typename F>
double central_difference(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Direct evaluation of the beta-function form of the log-likelihood.
double bg_loglik_reference(const Sample& s, double pi, double theta) {
  const double a = pi / theta;
  const double b = (1.0 - pi) / theta;
  const auto lbeta = [](double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); };
  double acc = 0.0;
  for (const auto x : s.values()) acc += lbeta(a + 1.0, b + static_cast<double>(x)) - lbeta(a, b);
  return acc;
}

}  // namespace

TEST_CASE("geometric fit is n / (t + n)") {
  const Sample s({0, 1, 2, 5});
  CHECK(fit_geometric(s).p == doctest::Approx(4.0 / 12.0));
  CHECK_THROWS_AS(fit_geometric(Sample({0, 0, 0})), DegenerateSampleError);
}

TEST_CASE("beta-geometric log-likelihood matches the beta-function form") {
  const Sample s = fixtures::load("betageo_n100");
  for (const auto [pi, theta] : {std::pair{0.4, 0.125}, std::pair{0.3, 0.5}, std::pair{0.7, 0.02}}) {
    CHECK(betageometric_loglik(s, pi, theta) == doctest::Approx(bg_loglik_reference(s, pi, theta)).epsilon(1e-10));
  }
}

TEST_CASE("beta-geometric log-likelihood at theta = 0 is the geometric one") {
  const Sample s = fixtures::load("betageo_n100");
  const double p = 0.35;
  const double geo = static_cast<double>(s.n()) * std::log(p) + static_cast<double>(s.total()) * std::log1p(-p);
  CHECK(betageometric_loglik(s, p, 0.0) == doctest::Approx(geo).epsilon(1e-12));
}

TEST_CASE("beta-geometric gradient matches finite differences") {
  const Sample s = fixtures::load("inspection");
  for (const auto [pi, theta] : {std::pair{0.2, 0.05}, std::pair{0.5, 0.3}, std::pair{0.15, 1.5}}) {
    const auto g = betageometric_gradient(s, pi, theta);
    const double d_theta = central_difference([&](double v) { return betageometric_loglik(s, pi, v); }, theta, 1e-6);
    const double d_pi = central_difference([&](double v) { return betageometric_loglik(s, v, theta); }, pi, 1e-6);
    CHECK(g[0] == doctest::Approx(d_theta).epsilon(1e-5));
    CHECK(g[1] == doctest::Approx(d_pi).epsilon(1e-5));
  }
}

TEST_CASE("score at theta = 0 is the theta-derivative of the log-likelihood") {
  const Sample s = fixtures::load("betageo_n100");
  const double pi = 0.3;
  CHECK(betageometric_gradient(s, pi, 0.0)[0] == doctest::Approx(score_known_param(s, pi)).epsilon(1e-10));
}

TEST_CASE("beta-geometric MLE on the simulated example") {
  const auto fit = fit_betageometric(fixtures::load("betageo_n100"));
  CHECK_FALSE(fit.boundary);
  CHECK(std::abs(fit.params.pi - 0.4274) < 0.005);
  CHECK(std::abs(fit.params.theta - 0.1166) < 0.005);
  const auto g = betageometric_gradient(fixtures::load("betageo_n100"), fit.params.pi, fit.params.theta);
  CHECK(std::hypot(g[0], g[1]) < 1e-5);
}

TEST_CASE("beta-geometric MLE falls back to the boundary when SB <= 0") {
  const Sample s = fixtures::load("dweibull_n50");
  REQUIRE(sb(s) <= 0.0);
  const auto fit = fit_betageometric(s);
  CHECK(fit.boundary);
  CHECK(fit.params.theta == 0.0);
  CHECK(fit.params.pi == doctest::Approx(fit_geometric(s).p));
}

TEST_CASE("moment estimates") {
  const Sample s = fixtures::load("betageo_n100");
  const double m1 = s.m1();
  const double m2 = s.m2();
  const auto mo = moment_estimate_betageometric(s);
  const double alpha = 2.0 * (m2 - m1 * m1) / (m2 - m1 - 2.0 * m1 * m1);
  CHECK(mo.alpha == doctest::Approx(alpha));
  CHECK(mo.beta == doctest::Approx(m1 * (alpha - 1.0)));
  CHECK(mo.theta == doctest::Approx(theta_tilde_stat(s)));
  // theta equals 1 / (alpha + beta) whenever SB != 0
  CHECK(mo.theta == doctest::Approx(1.0 / (mo.alpha + mo.beta)));
}

TEST_CASE("discrete Weibull log-likelihood reduces to the geometric one at beta = 1") {
  const Sample s = fixtures::load("dweibull_n50");
  const double q = 0.6;
  const double geo = static_cast<double>(s.n()) * std::log(1.0 - q) + static_cast<double>(s.total()) * std::log(q);
  CHECK(discrete_weibull_loglik(s, q, 1.0) == doctest::Approx(geo).epsilon(1e-12));
}

TEST_CASE("discrete Weibull MLE on the simulated example") {
  const Sample s = fixtures::load("dweibull_n50");
  const auto fit = fit_discrete_weibull(s);
  CHECK(std::abs(fit.params.q - 0.7239) < 0.01);
  CHECK(std::abs(fit.params.beta - 1.267) < 0.01);
  // stationary point
  const double dq = central_difference([&](double v) { return discrete_weibull_loglik(s, v, fit.params.beta); },
                                       fit.params.q, 1e-6);
  const double db = central_difference([&](double v) { return discrete_weibull_loglik(s, fit.params.q, v); },
                                       fit.params.beta, 1e-6);
  CHECK(std::abs(dq) < 1e-4);
  CHECK(std::abs(db) < 1e-4);
  CHECK(fit.loglik == doctest::Approx(discrete_weibull_loglik(s, fit.params.q, fit.params.beta)));
}

TEST_CASE("fits on the inspection data") {
  const Sample s = fixtures::load("inspection");
  const auto bg = fit_betageometric(s);
  CHECK(std::abs(bg.params.pi - 0.1772) < 0.01);
  CHECK(std::abs(bg.params.theta - 0.0502) < 0.01);
  const auto dw = fit_discrete_weibull(s);
  CHECK(std::abs(dw.params.q - 0.784) < 0.01);
  CHECK(std::abs(dw.params.beta - 0.794) < 0.01);
  // the discrete Weibull improves on the geometric
  const auto p = fit_geometric(s).p;
  CHECK(dw.loglik > discrete_weibull_loglik(s, 1.0 - p, 1.0));
}

TEST_CASE("discrete Weibull fit surfaces non-convergence with the best iterate") {
  // All mass at one point: the likelihood increases without bound as beta grows.
  const Sample s({1, 1, 1, 1, 1, 1});
  try {
    const auto fit = fit_discrete_weibull(s);
    FAIL("expected EstimationError, got q = " << fit.params.q << ", beta = " << fit.params.beta);
  } catch (const EstimationError& e) {
    CHECK(e.best_iterate().size() == 2);
    CHECK(std::isfinite(e.best_loglik()));
  }
}
