#include "condgof/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "optimize.hpp"

namespace condgof {

namespace {

constexpr double kGradTol = 1e-8;
constexpr int kMaxIter = 500;

void require_positive_total(const Sample& s) {
  if (s.empty()) throw DomainError("empty sample");
  if (s.total() == 0) throw DegenerateSampleError("sample total t = 0: every observation is zero");
}

/// Tail counts: gt[j] = #{x_i > j}, ge[j] = #{x_i >= j} for j = 0..max.
struct TailCounts {
  std::vector<double> gt;
  std::vector<double> ge;
};

TailCounts tail_counts(const Sample& s) {
  const auto o = s.counts();
  TailCounts tc{std::vector<double>(o.size(), 0.0), std::vector<double>(o.size(), 0.0)};
  double above = 0.0;
  for (std::size_t j = o.size(); j-- > 0;) {
    tc.gt[j] = above;
    above += static_cast<double>(o[j]);
    tc.ge[j] = above;
  }
  return tc;
}

double bg_loglik(const TailCounts& tc, double n, double pi, double theta) {
  double ll = n * std::log(pi);
  for (std::size_t j = 0; j < tc.gt.size(); ++j) {
    const double jd = static_cast<double>(j);
    if (tc.gt[j] > 0) ll += tc.gt[j] * std::log1p(-pi + jd * theta);
    if (j > 0 && tc.ge[j] > 0) ll -= tc.ge[j] * std::log1p(jd * theta);
  }
  return ll;
}

std::array<double, 2> bg_gradient(const TailCounts& tc, double n, double pi, double theta) {
  double d_theta = 0.0;
  double d_pi = n / pi;
  for (std::size_t j = 0; j < tc.gt.size(); ++j) {
    const double jd = static_cast<double>(j);
    const double a = 1.0 - pi + jd * theta;
    d_theta += tc.gt[j] * jd / a - tc.ge[j] * jd / (1.0 + jd * theta);
    d_pi -= tc.gt[j] / a;
  }
  return {d_theta, d_pi};
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

/// Per-value discrete Weibull term and its partials in (log q, beta).
struct DwTerm {
  double value;
  double d_logq;
  double d_beta;
};

DwTerm dw_term(double x, double lq, double beta) {
  const double a = std::pow(x, beta);
  const double b = std::pow(x + 1.0, beta);
  const double da = x > 0.0 ? a * std::log(x) : 0.0;
  const double db = b * std::log(x + 1.0);
  const double diff = b - a;
  const double e = std::exp(diff * lq);     // q^{b-a}
  const double one_minus = -std::expm1(diff * lq);
  const double ratio = e / one_minus;
  return {a * lq + std::log(one_minus), a - diff * ratio, da * lq - lq * (db - da) * ratio};
}

}  // namespace

GeometricParams fit_geometric(const Sample& s) {
  require_positive_total(s);
  return GeometricParams(static_cast<double>(s.n()) / static_cast<double>(s.total() + s.n()));
}

double betageometric_loglik(const Sample& s, double pi, double theta) {
  return bg_loglik(tail_counts(s), static_cast<double>(s.n()), pi, theta);
}

std::array<double, 2> betageometric_gradient(const Sample& s, double pi, double theta) {
  return bg_gradient(tail_counts(s), static_cast<double>(s.n()), pi, theta);
}

BetaGeometricMoments moment_estimate_betageometric(const Sample& s) {
  if (s.empty()) throw DomainError("empty sample");
  const double m1 = s.m1();
  const double m2 = s.m2();
  const double sb = m2 - m1 - 2.0 * m1 * m1;
  const double denom = 2.0 * m2 - m1 * m1 + m1 * m2;
  if (denom == 0.0) throw UndefinedEstimateError("moment estimate of theta: zero denominator");
  BetaGeometricMoments out{std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN(), sb / denom};
  if (sb != 0.0) {
    out.alpha = 2.0 * (m2 - m1 * m1) / sb;
    out.beta = m1 * (out.alpha - 1.0);
  }
  return out;
}

BetaGeometricFit fit_betageometric(const Sample& s) {
  const double p_hat = fit_geometric(s).p;
  const double n = static_cast<double>(s.n());
  const double m1 = s.m1();
  const double sb = s.m2() - m1 - 2.0 * m1 * m1;
  const TailCounts tc = tail_counts(s);
  if (sb <= 0.0) {
    return {BetaGeometricParams(p_hat, 0.0), bg_loglik(tc, n, p_hat, 0.0), 0, true};
  }
  const double theta0 = std::clamp(moment_estimate_betageometric(s).theta, 1e-4, 10.0);

  // Minimise -loglik over (u, w) = (logit pi, log theta).
  const detail::Objective2 objective = [&](const detail::Vec2& z, detail::Vec2& grad) {
    const double pi = logistic(z[0]);
    const double theta = std::exp(z[1]);
    if (!(pi > 0.0 && pi < 1.0) || !(theta > 0.0) || !std::isfinite(theta)) {
      return std::numeric_limits<double>::infinity();
    }
    const auto g = bg_gradient(tc, n, pi, theta);
    grad = {-g[1] * pi * (1.0 - pi), -g[0] * theta};
    return -bg_loglik(tc, n, pi, theta);
  };
  const auto r = detail::minimize(objective, {logit(p_hat), std::log(theta0)}, kGradTol, kMaxIter);
  const double pi = logistic(r.x[0]);
  const double theta = std::exp(r.x[1]);
  if (!r.converged) {
    throw EstimationError("beta-geometric MLE did not converge", {pi, theta}, -r.f);
  }
  return {BetaGeometricParams(pi, theta), -r.f, r.iterations, false};
}

double discrete_weibull_loglik(const Sample& s, double q, double beta) {
  const auto o = s.counts();
  const double lq = std::log(q);
  double ll = 0.0;
  for (std::size_t j = 0; j < o.size(); ++j) {
    if (o[j] > 0) ll += static_cast<double>(o[j]) * dw_term(static_cast<double>(j), lq, beta).value;
  }
  return ll;
}

DiscreteWeibullFit fit_discrete_weibull(const Sample& s) {
  const double p_hat = fit_geometric(s).p;
  const auto o = s.counts();

  // Minimise -loglik over (u, v) = (logit q, log beta).
  const detail::Objective2 objective = [&](const detail::Vec2& z, detail::Vec2& grad) {
    const double q = logistic(z[0]);
    const double beta = std::exp(z[1]);
    if (!(q > 0.0 && q < 1.0) || !(beta > 0.0) || !std::isfinite(beta)) {
      return std::numeric_limits<double>::infinity();
    }
    const double lq = -std::log1p(std::exp(-z[0]));
    double ll = 0.0;
    double d_lq = 0.0;
    double d_beta = 0.0;
    for (std::size_t j = 0; j < o.size(); ++j) {
      if (o[j] == 0) continue;
      const double c = static_cast<double>(o[j]);
      const auto term = dw_term(static_cast<double>(j), lq, beta);
      ll += c * term.value;
      d_lq += c * term.d_logq;
      d_beta += c * term.d_beta;
    }
    // d(log q)/du = 1 - q, d(beta)/dv = beta
    grad = {-d_lq * (1.0 - q), -d_beta * beta};
    return -ll;
  };
  const auto r = detail::minimize(objective, {logit(1.0 - p_hat), 0.0}, kGradTol, kMaxIter);
  const double q = logistic(r.x[0]);
  const double beta = std::exp(r.x[1]);
  if (!r.converged) {
    throw EstimationError("discrete Weibull MLE did not converge", {q, beta}, -r.f);
  }
  return {DiscreteWeibullParams(q, beta), -r.f, r.iterations};
}

}  // namespace condgof
