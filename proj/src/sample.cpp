#include "condgof/sample.hpp"

#include <algorithm>

#include "condgof/errors.hpp"

namespace condgof {

Sample::Sample(std::vector<std::int64_t> values) : values_(std::move(values)) {
  if (values_.empty()) return;
  min_ = values_.front();
  for (const auto v : values_) {
    if (v < 0) throw DomainError("sample values must be non-negative integers");
    total_ += v;
    sum_sq_ += v * v;
    max_ = std::max(max_, v);
    min_ = std::min(min_, v);
  }
}

Sample Sample::from_frequencies(std::span<const std::pair<std::int64_t, std::int64_t>> rows) {
  std::vector<std::int64_t> values;
  for (const auto& [value, count] : rows) {
    if (count < 0) throw DomainError("frequency counts must be non-negative");
    values.insert(values.end(), static_cast<std::size_t>(count), value);
  }
  return Sample(std::move(values));
}

double Sample::m1() const noexcept {
  return empty() ? 0.0 : static_cast<double>(total_) / static_cast<double>(n());
}

double Sample::m2() const noexcept {
  return empty() ? 0.0 : static_cast<double>(sum_sq_) / static_cast<double>(n());
}

std::vector<std::int64_t> Sample::counts() const {
  std::vector<std::int64_t> o(empty() ? 0 : static_cast<std::size_t>(max_) + 1, 0);
  for (const auto v : values_) ++o[static_cast<std::size_t>(v)];
  return o;
}

}  // namespace condgof
