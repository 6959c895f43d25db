#include <doctest.h>

#include "common/error.hpp"
#include "common/text.hpp"
#include "common/timestamp.hpp"

using namespace archive_lens;

TEST_CASE("timestamps accept both granularities") {
  auto t = parse_utc_timestamp("2012-01-12T10:27:57Z");
  REQUIRE(t);
  CHECK(format_utc_timestamp(*t) == "2012-01-12T10:27:57Z");
  auto d = parse_utc_timestamp("2012-01-12");
  REQUIRE(d);
  CHECK(format_utc_timestamp(*d) == "2012-01-12T00:00:00Z");
  CHECK(*d < *t);
}

TEST_CASE("malformed timestamps are rejected") {
  for (const char* bad : {"", "2012", "2012-13-01", "2012-02-30", "2012-01-12T10:27:57", "2012-01-12 10:27:57Z",
                          "1404 - 1482", "2012-01-12T25:00:00Z"})
    CHECK_FALSE(parse_utc_timestamp(bad).has_value());
}

TEST_CASE("text helpers") {
  CHECK(text::trim("  a b \n") == "a b");
  CHECK(text::iequals("Driver", "dRIVER"));
  CHECK(text::split("a::b", ':') == std::vector<std::string>{"a", "", "b"});
  CHECK(text::split_whitespace("  x  y\tz ") == std::vector<std::string>{"x", "y", "z"});
  auto ls = text::lines("a\r\nb\n\nc");
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "a");
  CHECK(ls[2].empty());
  CHECK(ls[3] == "c");
}

TEST_CASE("error carries code and detail") {
  Error e(ErrorCode::OrphanParentError, "orphan", "D99000");
  CHECK(e.code() == ErrorCode::OrphanParentError);
  CHECK(e.detail() == "D99000");
  CHECK(error_code_name(ErrorCode::EmptyTree) == "EmptyTree");
}
