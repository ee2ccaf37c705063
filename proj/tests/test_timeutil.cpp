#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "newsrank/error.hpp"
#include "newsrank/timeutil.hpp"

using namespace newsrank;

TEST_CASE("iso8601 round trip") {
    const char* samples[] = {"2014-05-01T00:00:00Z", "1970-01-01T00:00:00Z",
                             "2015-01-01T23:59:59Z", "2016-02-29T12:30:00Z"};
    for (const char* s : samples) CHECK(format_iso8601(parse_iso8601(s)) == s);
    CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_iso8601("1970-01-02T00:00:00Z") == 86400);
}

TEST_CASE("iso8601 rejects junk") {
    CHECK_THROWS_AS(parse_iso8601("2014-05-01 00:00:00"), ValidationError);
    CHECK_THROWS_AS(parse_iso8601("2014-05-01T00:00:00"), ValidationError);
    CHECK_THROWS_AS(parse_iso8601("2014-13-01T00:00:00Z"), ValidationError);
    CHECK_THROWS_AS(parse_iso8601("2015-02-29T00:00:00Z"), ValidationError);
    CHECK_THROWS_AS(parse_iso8601("not a timestamp"), ValidationError);
}

TEST_CASE("slice index") {
    const Timestamp pub = parse_iso8601("2014-05-01T00:00:00Z");
    CHECK(slice_index(pub, pub) == 1);
    CHECK(slice_index(pub, pub + 1) == 1);
    CHECK(slice_index(pub, pub + kSecondsPerSlice) == 1);
    CHECK(slice_index(pub, pub + kSecondsPerSlice + 1) == 2);
    CHECK(slice_index(pub, pub + kTwoDays) == 96);
    CHECK(slice_index(pub, pub + kTwoDays + 3600) == 98);  // uncapped here
}
