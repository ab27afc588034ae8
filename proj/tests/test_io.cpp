#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "condgof/errors.hpp"
#include "condgof/io.hpp"

using namespace condgof;

namespace {

std::size_t error_line(std::string_view text) {
  try {
    parse_dataset(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_CASE("raw integers separated by any whitespace") {
  const Sample s = parse_dataset("3 0  1\n\t4\n\n2 # trailing comment\n");
  CHECK(s.values().size() == 5);
  CHECK(s.n() == 5);
  CHECK(s.total() == 10);
  CHECK(s.max_value() == 4);
}

TEST_CASE("frequency rows with and without a header") {
  const Sample a = parse_dataset("value,count\n0,3\n2,1\n5,0\n");
  const Sample b = parse_dataset("0,3\n2,1\n");
  CHECK(a.n() == 4);
  CHECK(a.total() == 2);
  CHECK(a.counts() == b.counts());
  CHECK(parse_dataset("0, 2\r\n1 ,1\r\n").n() == 3);
}

TEST_CASE("malformed input reports the offending line") {
  CHECK(error_line("1 2\n3 x\n") == 2);
  CHECK(error_line("1 2\n-3\n") == 2);
  CHECK(error_line("value,count\n0,1\n1,-2\n") == 3);
  CHECK(error_line("0,1\n1,2,3\n") == 2);
  CHECK(error_line("0,1\nfoo,bar\n") == 2);
  CHECK(error_line("0,1\n7\n") == 2);
  CHECK(error_line("1.5 2\n") == 1);
  CHECK_THROWS_WITH_AS(parse_dataset("1 2\n3 x\n"), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("empty input is a parse error") {
  CHECK_THROWS_AS(parse_dataset(""), ParseError);
  CHECK_THROWS_AS(parse_dataset("  \n# only a comment\n"), ParseError);
  CHECK_THROWS_AS(parse_dataset("value,count\n"), ParseError);
  CHECK_THROWS_AS(parse_dataset("value,count\n3,0\n"), ParseError);
}

TEST_CASE("raw input re-emitted as frequencies round-trips") {
  const Sample raw = parse_dataset("5 0 0 2 9 2 2 0 1");
  const std::string freq = to_frequency_csv(raw);
  CHECK(freq == "value,count\n0,3\n1,1\n2,3\n5,1\n9,1\n");
  const Sample back = parse_dataset(freq);
  CHECK(back.n() == raw.n());
  CHECK(back.total() == raw.total());
  CHECK(back.counts() == raw.counts());
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "condgof_io_test.csv";
  {
    std::ofstream out(path);
    out << "value,count\n0,2\n3,1\n";
  }
  CHECK(read_dataset(path).total() == 3);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_dataset(path), ParseError);
}

TEST_CASE("bundled datasets") {
  CHECK(fixtures::names().size() == 3);

  const Sample a = fixtures::load("betageo_n100");
  CHECK(a.n() == 100);
  CHECK(a.total() == 182);
  const std::vector<std::int64_t> oa{42, 24, 11, 8, 4, 4, 0, 1, 0, 2, 2, 0, 0, 0, 0, 1, 1};
  CHECK(a.counts() == oa);

  const Sample b = fixtures::load("dweibull_n50");
  CHECK(b.n() == 50);
  CHECK(b.total() == 89);
  const std::vector<std::int64_t> ob{13, 14, 10, 8, 1, 1, 0, 2, 1};
  CHECK(b.counts() == ob);

  const Sample c = fixtures::load("inspection");
  CHECK(c.n() == 28);
  CHECK(c.total() == 175);
  const auto oc = c.counts();
  CHECK(std::vector<std::int64_t>(oc.begin(), oc.begin() + 5) == std::vector<std::int64_t>{6, 4, 3, 3, 2});
  std::vector<std::int64_t> large;
  for (const auto v : c.values()) {
    if (v >= 5) large.push_back(v);
  }
  std::sort(large.begin(), large.end());
  CHECK(large == std::vector<std::int64_t>{6, 8, 10, 12, 13, 13, 16, 17, 25, 28});

  CHECK_THROWS_AS(fixtures::text("nope"), DomainError);
}
