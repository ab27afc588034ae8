#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "condgof/errors.hpp"
#include "condgof/random.hpp"
#include "condgof/sample.hpp"

namespace condgof {

// Parameter types. Constructors validate and throw DomainError.

/// P(X = x) = p (1 - p)^x.
struct GeometricParams {
  double p;
  explicit GeometricParams(double p);
};

struct PoissonParams {
  double lambda;
  explicit PoissonParams(double lambda);
};

/// Bin(size, p) on {0..size}.
struct BinomialParams {
  std::int64_t size;
  double p;
  BinomialParams(std::int64_t size, double p);
};

/// P(X = x) = C(x + r - 1, x) (1 - p)^x p^r.
struct NegBinomialParams {
  std::int64_t r;
  double p;
  NegBinomialParams(std::int64_t r, double p);
};

/// Beta-geometric in the (pi, theta) parameterisation:
///   pi = alpha / (alpha + beta),  theta = 1 / (alpha + beta).
/// theta = 0 is the geometric distribution with p = pi.
struct BetaGeometricParams {
  double pi;
  double theta;
  BetaGeometricParams(double pi, double theta);

  /// From the Beta(alpha, beta) mixing parameters.
  static BetaGeometricParams from_alpha_beta(double alpha, double beta);
  /// Only meaningful for theta > 0.
  double alpha() const noexcept { return pi / theta; }
  double beta() const noexcept { return (1.0 - pi) / theta; }
};

/// Type I discrete Weibull: P(X = x) = q^{x^beta} - q^{(x+1)^beta}.
struct DiscreteWeibullParams {
  double q;
  double beta;
  DiscreteWeibullParams(double q, double beta);
};

using Distribution = std::variant<GeometricParams, PoissonParams, BinomialParams, NegBinomialParams,
                                  BetaGeometricParams, DiscreteWeibullParams>;

double log_pmf(const GeometricParams& d, std::int64_t x);
double log_pmf(const PoissonParams& d, std::int64_t x);
double log_pmf(const BinomialParams& d, std::int64_t x);
double log_pmf(const NegBinomialParams& d, std::int64_t x);
double log_pmf(const BetaGeometricParams& d, std::int64_t x);
double log_pmf(const DiscreteWeibullParams& d, std::int64_t x);
double log_pmf(const Distribution& d, std::int64_t x);

template <typename D>
double pmf(const D& d, std::int64_t x) {
  return std::exp(log_pmf(d, x));
}

/// P(X >= x).
double survival(const Distribution& d, std::int64_t x);

double mean(const Distribution& d);

/// Discrete hazard P(X = x | X >= x) = 1 - q^{(x+1)^beta - x^beta}.
double hazard_discrete_weibull(const DiscreteWeibullParams& d, std::int64_t x);

/// Parses `geom:p`, `pois:lambda`, `bin:m,p`, `nb:r,p`, `bg:alpha,beta`,
/// `dweibull:q,beta`. Throws DomainError on unknown names or bad numbers.
Distribution parse_distribution(std::string_view text);
std::string describe(const Distribution& d);

// ---------------------------------------------------------------------------
// Unconditional sampling

namespace detail {
inline double open_unit(double u) { return 1.0 - u; }  // [0,1) -> (0,1]
}  // namespace detail

/// Inverse CDF: x = floor(log(1 - u) / log(1 - p)); u = 0 gives 0.
template <UniformSource R>
std::int64_t draw(const GeometricParams& d, R& rng) {
  const double u = rng.uniform();
  if (u <= 0.0) return 0;
  return static_cast<std::int64_t>(std::floor(std::log1p(-u) / std::log1p(-d.p)));
}

/// Survival inversion: P(X >= x) = q^{x^beta}.
template <UniformSource R>
std::int64_t draw(const DiscreteWeibullParams& d, R& rng) {
  const double v = detail::open_unit(rng.uniform());
  const double y = std::pow(std::log(v) / std::log(d.q), 1.0 / d.beta);
  const double x = std::ceil(y) - 1.0;
  return x < 0.0 ? 0 : static_cast<std::int64_t>(x);
}

template <typename R>
std::int64_t draw(const PoissonParams& d, R& rng) {
  return std::poisson_distribution<std::int64_t>(d.lambda)(rng);
}

template <typename R>
std::int64_t draw(const BinomialParams& d, R& rng) {
  return std::binomial_distribution<std::int64_t>(d.size, d.p)(rng);
}

template <typename R>
std::int64_t draw(const NegBinomialParams& d, R& rng) {
  return std::negative_binomial_distribution<std::int64_t>(d.r, d.p)(rng);
}

/// Geometric with p ~ Beta(alpha, beta); theta = 0 degenerates to Geom(pi).
template <typename R>
std::int64_t draw(const BetaGeometricParams& d, R& rng) {
  double p = d.pi;
  if (d.theta > 0.0) {
    const double ga = std::gamma_distribution<double>(d.alpha(), 1.0)(rng);
    const double gb = std::gamma_distribution<double>(d.beta(), 1.0)(rng);
    p = ga / (ga + gb);
    if (!(p > 0.0)) p = std::numeric_limits<double>::min();
    if (p >= 1.0) return 0;
  }
  const double u = rng.uniform();
  if (u <= 0.0) return 0;
  const double x = std::floor(std::log1p(-u) / std::log1p(-p));
  return x > 9.0e15 ? static_cast<std::int64_t>(9.0e15) : static_cast<std::int64_t>(x);
}

template <typename D, typename R>
std::vector<std::int64_t> draw_values(const D& d, std::size_t n, R& rng) {
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = draw(d, rng);
  return out;
}

/// n i.i.d. draws.
template <typename R>
Sample sample(const Distribution& d, std::size_t n, R& rng) {
  if (n == 0) throw DomainError("sample size must be at least 1");
  return Sample(std::visit([&](const auto& dist) { return draw_values(dist, n, rng); }, d));
}

// ---------------------------------------------------------------------------
// Power-series families: P(X = x) = a(x) theta^x / eta(theta)

/// log a(x); -infinity encodes a(x) = 0.
using LogCoefficient = std::function<double(std::int64_t)>;

struct PowerSeriesSpec {
  LogCoefficient log_a;
  double theta;
  PowerSeriesSpec(LogCoefficient log_a, double theta);

  /// log eta(theta), summed until the tail is negligible. The caller asserts
  /// that the series converges for this theta.
  double log_normalizer() const;
  double log_pmf(std::int64_t x) const;
};

namespace coefficients {
LogCoefficient geometric();                     ///< a(x) = 1
LogCoefficient poisson();                       ///< a(x) = 1 / x!
LogCoefficient binomial(std::int64_t size);     ///< a(x) = C(size, x)
LogCoefficient negbinomial(std::int64_t r);     ///< a(x) = C(x + r - 1, x)
/// `geometric`, `poisson`, `binomial:m`, `negbinomial:r`.
LogCoefficient parse(std::string_view name);
}  // namespace coefficients

/// log C(n, k) via lgamma; -infinity outside 0 <= k <= n.
double log_choose(double n, double k);

/// log of the multinomial pmf of `counts` with cell probabilities proportional to `weights`.
double multinomial_log_pmf(std::span<const std::int64_t> counts, std::span<const double> weights);

}  // namespace condgof
