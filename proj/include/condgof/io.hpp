#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "condgof/sample.hpp"

namespace condgof {

/// Parses a dataset. Two layouts are accepted:
///   - raw: non-negative integers separated by whitespace or newlines;
///   - frequency: one `value,count` row per line, optional header row.
/// Text after `#` is a comment. Throws ParseError (with the 1-based line
/// number) on malformed rows and when no observation is present.
Sample parse_dataset(std::string_view text);

Sample read_dataset(const std::filesystem::path& path);

/// `value,count` rows for every value with a positive count.
std::string to_frequency_csv(const Sample& s);

namespace fixtures {

/// betageo_n100, dweibull_n50, inspection.
std::vector<std::string_view> names();
/// Bundled text in frequency layout; throws DomainError on an unknown name.
std::string_view text(std::string_view name);
Sample load(std::string_view name);

}  // namespace fixtures

}  // namespace condgof
