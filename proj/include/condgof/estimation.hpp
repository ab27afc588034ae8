#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "condgof/distributions.hpp"
#include "condgof/sample.hpp"

namespace condgof {

/// p = n / (t + n). Throws DegenerateSampleError when t = 0.
GeometricParams fit_geometric(const Sample& s);

struct BetaGeometricFit {
  BetaGeometricParams params;
  double loglik;
  int iterations;
  /// True when the boundary (p_hat, 0) was reported without optimising.
  bool boundary;
};

struct DiscreteWeibullFit {
  DiscreteWeibullParams params;
  double loglik;
  int iterations;
};

/// Beta-geometric log-likelihood
///   n log pi + sum_i sum_{j<x_i} log(1 - pi + j theta) - sum_i sum_{j<=x_i} log(1 + j theta).
double betageometric_loglik(const Sample& s, double pi, double theta);

/// (d/dtheta, d/dpi) of betageometric_loglik in closed form.
std::array<double, 2> betageometric_gradient(const Sample& s, double pi, double theta);

/// MLE over 0 < pi < 1, theta >= 0.
///
/// If SB = m2 - m1 - 2 m1^2 <= 0 the boundary point (p_hat, 0) is returned
/// directly. Otherwise a quasi-Newton search runs on (logit pi, log theta)
/// from (p_hat, clamp(theta_tilde, 1e-4, 10)). Throws EstimationError when
/// the gradient norm does not drop below 1e-8 within 500 iterations.
BetaGeometricFit fit_betageometric(const Sample& s);

struct BetaGeometricMoments {
  double alpha;
  double beta;
  double theta;
};

/// Method-of-moments estimates
///   alpha = 2 (m2 - m1^2) / (m2 - m1 - 2 m1^2),  beta = m1 (alpha - 1),
///   theta = (m2 - m1 - 2 m1^2) / (2 m2 - m1^2 + m1 m2).
/// alpha and beta are NaN when SB = 0 (theta is then 0). Throws
/// UndefinedEstimateError when the theta denominator vanishes.
BetaGeometricMoments moment_estimate_betageometric(const Sample& s);

/// sum_i log(q^{x_i^beta} - q^{(x_i+1)^beta}).
double discrete_weibull_loglik(const Sample& s, double q, double beta);

/// MLE over (0,1) x (0, inf), started from (1 - p_hat, 1) in (logit q, log beta).
DiscreteWeibullFit fit_discrete_weibull(const Sample& s);

}  // namespace condgof
