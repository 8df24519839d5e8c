#include <gtest/gtest.h>

#include "spm/timestamp.hpp"

using spm::format_timestamp;
using spm::parse_time_field;
using spm::parse_timestamp;
using spm::Timestamp;

TEST(Timestamp, SlashFormRoundTrips) {
    const auto t = parse_timestamp("2024/08/15/17:40:50");
    EXPECT_EQ(format_timestamp(t), "2024/08/15/17:40:50");
    EXPECT_EQ(t.micros % 1000000, 0);
}

TEST(Timestamp, IsoFormMatchesSlashForm) {
    EXPECT_EQ(parse_timestamp("2024-08-15T17:40:50"), parse_timestamp("2024/08/15/17:40:50"));
    EXPECT_EQ(parse_timestamp("2024-08-15T17:40:50Z"), parse_timestamp("2024/08/15/17:40:50"));
}

TEST(Timestamp, FractionalSecondsKeepMicros) {
    const auto t = parse_timestamp("2024/08/15/17:40:50.25");
    EXPECT_EQ(format_timestamp(t), "2024/08/15/17:40:50.25");
    EXPECT_DOUBLE_EQ(spm::seconds_between(t, parse_timestamp("2024/08/15/17:40:50")), 0.25);
}

TEST(Timestamp, KnownEpochOffset) {
    EXPECT_EQ(parse_timestamp("1970/01/01/00:00:01").micros, 1000000);
    EXPECT_EQ(parse_timestamp("2000/03/01/00:00:00").micros, 951868800LL * 1000000);
}

TEST(Timestamp, DayRollover) {
    const auto a = parse_timestamp("2024/02/28/23:59:59");
    const auto b = parse_timestamp("2024/02/29/00:00:09");
    EXPECT_DOUBLE_EQ(spm::seconds_between(b, a), 10.0);
}

TEST(Timestamp, RejectsMalformed) {
    for (const char* bad : {"", "2024/08/15", "2024/13/01/00:00:00", "2024/02/30/00:00:00", "2024/08/15/25:00:00",
                            "2024/08/15/17:40:50x", "yesterday"}) {
        EXPECT_THROW(parse_timestamp(bad), spm::ParseError) << bad;
    }
}

TEST(Timestamp, TimeFieldAcceptsDecimalSeconds) {
    EXPECT_EQ(parse_time_field("12.5"), Timestamp::from_seconds(12.5));
    EXPECT_EQ(parse_time_field("2024/08/15/17:40:50"), parse_timestamp("2024/08/15/17:40:50"));
    EXPECT_THROW(parse_time_field("12.5s"), spm::ParseError);
}

TEST(Timestamp, NegativeTimesFormatBeforeEpoch) {
    EXPECT_EQ(format_timestamp(Timestamp{-500000}), "1969/12/31/23:59:59.5");
}
