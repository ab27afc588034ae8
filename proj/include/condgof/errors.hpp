#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace condgof {

/// Parameter outside the domain of a distribution or routine.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sample with t = 0: the conditional law is a point mass.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally invalid bars or composition.
class MalformedInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested total cannot be reached (binomial family with t > sum of sizes).
class InfeasibleTotalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Power-series coefficient vanished at a state the chain can propose.
class SupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form estimate or statistic with a vanishing denominator.
class UndefinedEstimateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Optimizer did not converge; carries the best iterate it found.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(const std::string& what, std::vector<double> best, double best_loglik)
      : std::runtime_error(what), best_(std::move(best)), best_loglik_(best_loglik) {}

  const std::vector<double>& best_iterate() const noexcept { return best_; }
  double best_loglik() const noexcept { return best_loglik_; }

 private:
  std::vector<double> best_;
  double best_loglik_;
};

/// Dataset text could not be parsed. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace condgof
