#include "condgof/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace condgof {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool open_unit_interval(double p) { return p > 0.0 && p < 1.0; }

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw DomainError("invalid number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

std::vector<double> parse_numbers(std::string_view s, std::string_view what) {
  std::vector<double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::int64_t as_count(double v, std::string_view what) {
  if (v != std::floor(v) || v < 0 || v > 1e15) {
    throw DomainError(std::string(what) + " needs a non-negative integer, got " + std::to_string(v));
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

GeometricParams::GeometricParams(double p_) : p(p_) {
  if (!open_unit_interval(p)) throw DomainError("geometric: p must lie in (0, 1)");
}

PoissonParams::PoissonParams(double lambda_) : lambda(lambda_) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("poisson: lambda must be > 0");
}

BinomialParams::BinomialParams(std::int64_t size_, double p_) : size(size_), p(p_) {
  if (size < 1) throw DomainError("binomial: size must be >= 1");
  if (!open_unit_interval(p)) throw DomainError("binomial: p must lie in (0, 1)");
}

NegBinomialParams::NegBinomialParams(std::int64_t r_, double p_) : r(r_), p(p_) {
  if (r < 1) throw DomainError("negative binomial: r must be >= 1");
  if (!open_unit_interval(p)) throw DomainError("negative binomial: p must lie in (0, 1)");
}

BetaGeometricParams::BetaGeometricParams(double pi_, double theta_) : pi(pi_), theta(theta_) {
  if (!open_unit_interval(pi)) throw DomainError("beta-geometric: pi must lie in (0, 1)");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("beta-geometric: theta must be >= 0");
}

BetaGeometricParams BetaGeometricParams::from_alpha_beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("beta-geometric: alpha and beta must be > 0");
  return {alpha / (alpha + beta), 1.0 / (alpha + beta)};
}

DiscreteWeibullParams::DiscreteWeibullParams(double q_, double beta_) : q(q_), beta(beta_) {
  if (!open_unit_interval(q)) throw DomainError("discrete Weibull: q must lie in (0, 1)");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("discrete Weibull: beta must be > 0");
}

double log_choose(double n, double k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double log_pmf(const GeometricParams& d, std::int64_t x) {
  if (x < 0) return kNegInf;
  return std::log(d.p) + static_cast<double>(x) * std::log1p(-d.p);
}

double log_pmf(const PoissonParams& d, std::int64_t x) {
  if (x < 0) return kNegInf;
  const double xd = static_cast<double>(x);
  return xd * std::log(d.lambda) - d.lambda - std::lgamma(xd + 1);
}

double log_pmf(const BinomialParams& d, std::int64_t x) {
  if (x < 0 || x > d.size) return kNegInf;
  const double xd = static_cast<double>(x);
  const double m = static_cast<double>(d.size);
  return log_choose(m, xd) + xd * std::log(d.p) + (m - xd) * std::log1p(-d.p);
}

double log_pmf(const NegBinomialParams& d, std::int64_t x) {
  if (x < 0) return kNegInf;
  const double xd = static_cast<double>(x);
  const double r = static_cast<double>(d.r);
  return log_choose(xd + r - 1, xd) + xd * std::log1p(-d.p) + r * std::log(d.p);
}

double log_pmf(const BetaGeometricParams& d, std::int64_t x) {
  if (x < 0) return kNegInf;
  // pi * prod_{j<x} (1 - pi + j theta) / prod_{j<=x} (1 + j theta)
  double acc = std::log(d.pi);
  for (std::int64_t j = 0; j < x; ++j) {
    acc += std::log1p(-d.pi + static_cast<double>(j) * d.theta);
  }
  for (std::int64_t j = 1; j <= x; ++j) {
    acc -= std::log1p(static_cast<double>(j) * d.theta);
  }
  return acc;
}

double log_pmf(const DiscreteWeibullParams& d, std::int64_t x) {
  if (x < 0) return kNegInf;
  const double lq = std::log(d.q);
  const double a = std::pow(static_cast<double>(x), d.beta);
  const double b = std::pow(static_cast<double>(x + 1), d.beta);
  // q^a - q^b = q^a (1 - q^{b-a})
  return a * lq + std::log(-std::expm1((b - a) * lq));
}

double log_pmf(const Distribution& d, std::int64_t x) {
  return std::visit([x](const auto& dist) { return log_pmf(dist, x); }, d);
}

double survival(const Distribution& d, std::int64_t x) {
  if (x <= 0) return 1.0;
  if (const auto* g = std::get_if<GeometricParams>(&d)) {
    return std::exp(static_cast<double>(x) * std::log1p(-g->p));
  }
  if (const auto* w = std::get_if<DiscreteWeibullParams>(&d)) {
    return std::exp(std::pow(static_cast<double>(x), w->beta) * std::log(w->q));
  }
  if (const auto* bg = std::get_if<BetaGeometricParams>(&d); bg && bg->theta > 0.0) {
    // E[(1-p)^x] under Beta(alpha, beta) = B(alpha, beta + x) / B(alpha, beta)
    const double a = bg->alpha();
    const double b = bg->beta();
    const double xd = static_cast<double>(x);
    return std::exp(std::lgamma(b + xd) - std::lgamma(a + b + xd) + std::lgamma(a + b) - std::lgamma(b));
  }
  double cdf = 0.0;
  for (std::int64_t j = 0; j < x; ++j) cdf += std::exp(log_pmf(d, j));
  return std::max(0.0, 1.0 - cdf);
}

double mean(const Distribution& d) {
  struct Visitor {
    double operator()(const GeometricParams& g) const { return (1.0 - g.p) / g.p; }
    double operator()(const PoissonParams& p) const { return p.lambda; }
    double operator()(const BinomialParams& b) const { return static_cast<double>(b.size) * b.p; }
    double operator()(const NegBinomialParams& nb) const {
      return static_cast<double>(nb.r) * (1.0 - nb.p) / nb.p;
    }
    double operator()(const BetaGeometricParams& bg) const {
      if (bg.theta == 0.0) return (1.0 - bg.pi) / bg.pi;
      const double a = bg.alpha();
      return a > 1.0 ? bg.beta() / (a - 1.0) : std::numeric_limits<double>::infinity();
    }
    double operator()(const DiscreteWeibullParams& w) const {
      double s = 0.0;
      for (std::int64_t x = 1;; ++x) {
        const double term = std::exp(std::pow(static_cast<double>(x), w.beta) * std::log(w.q));
        s += term;
        if (term < 1e-17 * s || x > 10'000'000) break;
      }
      return s;
    }
  };
  return std::visit(Visitor{}, d);
}

double hazard_discrete_weibull(const DiscreteWeibullParams& d, std::int64_t x) {
  const double a = std::pow(static_cast<double>(x), d.beta);
  const double b = std::pow(static_cast<double>(x + 1), d.beta);
  return -std::expm1((b - a) * std::log(d.q));
}

Distribution parse_distribution(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::vector<double>{}
                                                    : parse_numbers(text.substr(colon + 1), text);
  auto expect = [&](std::size_t k) {
    if (args.size() != k) {
      throw DomainError("distribution '" + std::string(name) + "' takes " + std::to_string(k) +
                        " parameter(s)");
    }
  };
  if (name == "geom" || name == "geometric") {
    expect(1);
    return GeometricParams(args[0]);
  }
  if (name == "pois" || name == "poisson") {
    expect(1);
    return PoissonParams(args[0]);
  }
  if (name == "bin" || name == "binomial") {
    expect(2);
    return BinomialParams(as_count(args[0], "bin size"), args[1]);
  }
  if (name == "nb" || name == "negbinomial") {
    expect(2);
    return NegBinomialParams(as_count(args[0], "nb r"), args[1]);
  }
  if (name == "bg" || name == "betageometric") {
    expect(2);
    return BetaGeometricParams::from_alpha_beta(args[0], args[1]);
  }
  if (name == "dweibull" || name == "weibull") {
    expect(2);
    return DiscreteWeibullParams(args[0], args[1]);
  }
  throw DomainError("unknown distribution '" + std::string(name) + "'");
}

std::string describe(const Distribution& d) {
  struct Visitor {
    std::ostringstream& os;
    void operator()(const GeometricParams& g) const { os << "Geom(" << g.p << ")"; }
    void operator()(const PoissonParams& p) const { os << "Pois(" << p.lambda << ")"; }
    void operator()(const BinomialParams& b) const { os << "Bin(" << b.size << ", " << b.p << ")"; }
    void operator()(const NegBinomialParams& nb) const { os << "NB(" << nb.r << ", " << nb.p << ")"; }
    void operator()(const BetaGeometricParams& bg) const {
      if (bg.theta > 0.0) {
        os << "BG(" << bg.alpha() << ", " << bg.beta() << ")";
      } else {
        os << "BG(pi=" << bg.pi << ", theta=0)";
      }
    }
    void operator()(const DiscreteWeibullParams& w) const { os << "W(" << w.q << ", " << w.beta << ")"; }
  };
  std::ostringstream os;
  std::visit(Visitor{os}, d);
  return os.str();
}

// ---------------------------------------------------------------------------

PowerSeriesSpec::PowerSeriesSpec(LogCoefficient log_a_, double theta_)
    : log_a(std::move(log_a_)), theta(theta_) {
  if (!log_a) throw DomainError("power series: coefficient function is empty");
  if (!(theta > 0.0)) throw DomainError("power series: theta must be > 0");
}

double PowerSeriesSpec::log_normalizer() const {
  const double lt = std::log(theta);
  double total = kNegInf;
  double prev = kNegInf;
  for (std::int64_t y = 0; y < 10'000'000; ++y) {
    const double la = log_a(y);
    const double term = la == kNegInf ? kNegInf : la + static_cast<double>(y) * lt;
    total = log_sum_exp(total, term);
    if (y > 0 && term <= prev && term < total - 40.0) break;
    prev = term;
  }
  return total;
}

double PowerSeriesSpec::log_pmf(std::int64_t x) const {
  if (x < 0) return kNegInf;
  const double la = log_a(x);
  if (la == kNegInf) return kNegInf;
  return la + static_cast<double>(x) * std::log(theta) - log_normalizer();
}

namespace coefficients {

LogCoefficient geometric() {
  return [](std::int64_t x) { return x < 0 ? kNegInf : 0.0; };
}

LogCoefficient poisson() {
  return [](std::int64_t x) { return x < 0 ? kNegInf : -std::lgamma(static_cast<double>(x) + 1); };
}

LogCoefficient binomial(std::int64_t size) {
  if (size < 1) throw DomainError("binomial coefficients: size must be >= 1");
  return [size](std::int64_t x) { return log_choose(static_cast<double>(size), static_cast<double>(x)); };
}

LogCoefficient negbinomial(std::int64_t r) {
  if (r < 1) throw DomainError("negative binomial coefficients: r must be >= 1");
  return [r](std::int64_t x) {
    const double xd = static_cast<double>(x);
    return x < 0 ? kNegInf : log_choose(xd + static_cast<double>(r) - 1, xd);
  };
}

LogCoefficient parse(std::string_view name) {
  const auto colon = name.find(':');
  const auto base = name.substr(0, colon);
  auto arg = [&]() -> std::int64_t {
    if (colon == std::string_view::npos) {
      throw DomainError("coefficient family '" + std::string(base) + "' needs a parameter");
    }
    return as_count(parse_number(name.substr(colon + 1), name), name);
  };
  if (base == "geometric") return geometric();
  if (base == "poisson") return poisson();
  if (base == "binomial") return binomial(arg());
  if (base == "negbinomial") return negbinomial(arg());
  throw DomainError("unknown coefficient family '" + std::string(name) + "'");
}

}  // namespace coefficients

double multinomial_log_pmf(std::span<const std::int64_t> counts, std::span<const double> weights) {
  if (counts.size() != weights.size()) throw DomainError("multinomial: size mismatch");
  double wsum = 0.0;
  for (const double w : weights) wsum += w;
  double t = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double c = static_cast<double>(counts[i]);
    t += c;
    if (c > 0) acc += c * std::log(weights[i] / wsum) - std::lgamma(c + 1);
  }
  return acc + std::lgamma(t + 1);
}

}  // namespace condgof
