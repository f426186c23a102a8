#include <doctest.h>

#include "hfo/time.hpp"

using namespace hfo;
using namespace std::chrono;

TEST_CASE("iso timestamps convert to epoch seconds") {
  const auto t = parse_iso("2020-10-01T15:30:00Z");
  REQUIRE(t);
  CHECK(to_epoch(*t) == 1601566200);
  CHECK(format_iso(*t) == "2020-10-01T15:30:00Z");
  CHECK(format_plain(*t) == "2020-10-01 15:30:00");
}

TEST_CASE("parse_iso rejects layout deviations") {
  for (const char* bad : {"", "2020-10-01 15:30:00", "2020-10-01T15:30:00", "2020-13-01T00:00:00Z",
                          "2020-02-30T00:00:00Z", "2020-10-01T24:00:00Z", "2020-1-01T00:00:00Z",
                          "2020-10-01T15:30:00Zx", "abcd-10-01T15:30:00Z"})
    CHECK_MESSAGE(!parse_iso(bad), bad);
}

TEST_CASE("iso round trip over a range of instants") {
  for (long long s = 0; s < 4'000'000'000LL; s += 7'919'993) {
    const auto t = from_epoch(s);
    CHECK(parse_iso(format_iso(t)) == t);
  }
}

TEST_CASE("calendar helpers") {
  const auto t = *parse_iso("2020-05-31T23:59:59Z");
  CHECK(month_of(t) == 2020y / May);
  CHECK(format_month(month_of(t)) == "2020-05");
  CHECK(format_day(day_of(t)) == "2020-05-31");
  CHECK(month_of(t + seconds{1}) == 2020y / June);
  CHECK(parse_month("2021-12") == 2021y / December);
  CHECK(!parse_month("2021-13"));
}
