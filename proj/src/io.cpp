#include "condgof/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "condgof/errors.hpp"

namespace condgof {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Line {
  std::size_t number;
  std::string_view body;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty() || number == 0) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) lines.push_back({number, line});
    if (text.empty()) break;
  }
  return lines;
}

Sample parse_frequencies(const std::vector<Line>& lines) {
  std::vector<std::pair<std::int64_t, std::int64_t>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [number, body] = lines[i];
    const auto comma = body.find(',');
    if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected 'value,count'", number);
    }
    std::int64_t value = 0;
    std::int64_t count = 0;
    const bool ok = parse_int(body.substr(0, comma), value) && parse_int(body.substr(comma + 1), count);
    if (!ok) {
      if (i == 0) continue;  // header row
      throw ParseError("non-integer field in '" + std::string(body) + "'", number);
    }
    if (value < 0) throw ParseError("negative value", number);
    if (count < 0) throw ParseError("negative count", number);
    rows.emplace_back(value, count);
  }
  Sample s = Sample::from_frequencies(rows);
  if (s.empty()) throw ParseError("no row with a positive count", 0);
  return s;
}

Sample parse_raw(const std::vector<Line>& lines) {
  std::vector<std::int64_t> values;
  for (const auto& [number, body] : lines) {
    std::size_t pos = 0;
    while (pos < body.size()) {
      const auto start = body.find_first_not_of(" \t\r", pos);
      if (start == std::string_view::npos) break;
      auto stop = body.find_first_of(" \t\r", start);
      if (stop == std::string_view::npos) stop = body.size();
      const auto token = body.substr(start, stop - start);
      std::int64_t v = 0;
      if (!parse_int(token, v)) throw ParseError("not an integer: '" + std::string(token) + "'", number);
      if (v < 0) throw ParseError("negative value " + std::string(token), number);
      values.push_back(v);
      pos = stop;
    }
  }
  return Sample(std::move(values));
}

// Counts of observations in the examples used throughout the docs and tests.
constexpr std::string_view kBetaGeo = R"(# 100 draws from a beta-geometric with pi = 0.4, theta = 0.125
value,count
0,42
1,24
2,11
3,8
4,4
5,4
6,0
7,1
8,0
9,2
10,2
11,0
12,0
13,0
14,0
15,1
16,1
)";

constexpr std::string_view kDWeibull = R"(# 50 draws from a type I discrete Weibull with q = 0.8, beta = 1.4
value,count
0,13
1,14
2,10
3,8
4,1
5,1
6,0
7,2
8,1
)";

// Inspections between discovered defects, minus one. Only nine of the ten
// values >= 5 survive in the source listing (6, 8, 10, 12, 13, 16, 17, 25, 28).
// The tenth is reconstructed as 13: the reported geometric fit p = 0.1378
// with n = 28 gives t = n (1 - p) / p = 175, and 175 - 27 - 135 = 13.
constexpr std::string_view kInspection = R"(# defect inspection data, n = 28, t = 175
value,count
0,6
1,4
2,3
3,3
4,2
6,1
8,1
10,1
12,1
13,2
16,1
17,1
25,1
28,1
)";

struct Fixture {
  std::string_view name;
  std::string_view text;
};

constexpr std::array<Fixture, 3> kFixtures{{
    {"betageo_n100", kBetaGeo},
    {"dweibull_n50", kDWeibull},
    {"inspection", kInspection},
}};

}  // namespace

Sample parse_dataset(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("no observations in input", 0);
  bool frequency = false;
  for (const auto& l : lines) frequency = frequency || l.body.find(',') != std::string_view::npos;
  Sample s = frequency ? parse_frequencies(lines) : parse_raw(lines);
  if (s.empty()) throw ParseError("no observations in input", 0);
  return s;
}

Sample read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string to_frequency_csv(const Sample& s) {
  std::ostringstream os;
  os << "value,count\n";
  const auto counts = s.counts();
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] > 0) os << j << ',' << counts[j] << '\n';
  }
  return os.str();
}

namespace fixtures {

std::vector<std::string_view> names() {
  std::vector<std::string_view> out;
  for (const auto& f : kFixtures) out.push_back(f.name);
  return out;
}

std::string_view text(std::string_view name) {
  for (const auto& f : kFixtures) {
    if (f.name == name) return f.text;
  }
  throw DomainError("unknown fixture '" + std::string(name) + "'");
}

Sample load(std::string_view name) { return parse_dataset(text(name)); }

}  // namespace fixtures

}  // namespace condgof
