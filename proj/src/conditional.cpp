#include "condgof/conditional.hpp"

#include <limits>
#include <string>

namespace condgof {

CompositionSpec::CompositionSpec(std::int64_t n_, std::int64_t t_) : n(n_), t(t_) {
  if (n < 1) throw DomainError("composition: need at least one part");
  if (t < 0) throw DomainError("composition: total must be non-negative");
}

Composition bars_to_composition(std::span<const std::int64_t> bars, const CompositionSpec& spec) {
  if (static_cast<std::int64_t>(bars.size()) != spec.n - 1) {
    throw MalformedInputError("expected " + std::to_string(spec.n - 1) + " bar positions, got " +
                              std::to_string(bars.size()));
  }
  std::int64_t prev = 0;
  for (const auto k : bars) {
    if (k <= prev || k >= spec.t + spec.n) {
      throw MalformedInputError("bar positions must be strictly increasing within 1.." +
                                std::to_string(spec.slots()));
    }
    prev = k;
  }
  Composition parts(static_cast<std::size_t>(spec.n));
  bars_to_parts(bars, spec.t, parts);
  return parts;
}

BarPositions composition_to_bars(std::span<const std::int64_t> parts) {
  if (parts.empty()) throw MalformedInputError("composition needs at least one part");
  BarPositions bars(parts.size() - 1);
  std::int64_t running = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (parts[j] < 0) throw MalformedInputError("composition parts must be non-negative");
    running += parts[j];
    if (j + 1 < parts.size()) bars[j] = running + static_cast<std::int64_t>(j) + 1;
  }
  return bars;
}

PowerSeriesChain::PowerSeriesChain(const LogCoefficient& log_a, const CompositionSpec& spec)
    : spec_(spec),
      log_a_(static_cast<std::size_t>(spec.t) + 1),
      bars_(static_cast<std::size_t>(spec.n - 1)),
      state_(static_cast<std::size_t>(spec.n)),
      proposal_(static_cast<std::size_t>(spec.n)) {
  if (!log_a) throw DomainError("mcmc: coefficient function is empty");
  for (std::int64_t x = 0; x <= spec.t; ++x) {
    const double la = log_a(x);
    log_a_[static_cast<std::size_t>(x)] = la;
    const bool reachable = spec.n >= 2 || x == spec.t;
    if (reachable && !(la > -std::numeric_limits<double>::infinity())) {
      throw SupportError("power-series coefficient a(" + std::to_string(x) +
                         ") is zero at a reachable state");
    }
  }
}

}  // namespace condgof
