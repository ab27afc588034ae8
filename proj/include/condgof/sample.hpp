#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace condgof {

/// Ordered non-negative integer observations with their running moments.
class Sample {
 public:
  Sample() = default;
  /// Throws DomainError on a negative value.
  explicit Sample(std::vector<std::int64_t> values);

  /// Builds a sample from (value, count) rows, values emitted in row order.
  static Sample from_frequencies(std::span<const std::pair<std::int64_t, std::int64_t>> rows);

  std::span<const std::int64_t> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(values_.size()); }
  std::int64_t total() const noexcept { return total_; }
  /// Sum of squares; exact for any realistic sample.
  std::int64_t sum_squares() const noexcept { return sum_sq_; }
  std::int64_t max_value() const noexcept { return max_; }
  std::int64_t min_value() const noexcept { return min_; }

  double m1() const noexcept;
  double m2() const noexcept;

  /// Observed counts o_j for j = 0..max_value().
  std::vector<std::int64_t> counts() const;

 private:
  std::vector<std::int64_t> values_;
  std::int64_t total_ = 0;
  std::int64_t sum_sq_ = 0;
  std::int64_t max_ = 0;
  std::int64_t min_ = 0;
};

}  // namespace condgof
