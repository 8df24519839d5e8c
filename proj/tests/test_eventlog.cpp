#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "fixtures.hpp"

using namespace spm;
using spm::testing::at;
using spm::testing::single;

// ---------------------------------------------------------------------------
// Parsing and serialization

TEST(ParseLog, FullFormSingleEntity) {
    const auto p = parse_log("EL1: {s1, (E1,v1), 2024/08/15/17:40:50}");
    EXPECT_TRUE(p.warnings.empty());
    EXPECT_EQ(p.log.label, "EL1");
    ASSERT_EQ(p.log.records.size(), 1u);
    const auto& r = p.log.records[0];
    ASSERT_EQ(r.groups.size(), 1u);
    EXPECT_EQ(r.groups[0].location_id, "s1");
    ASSERT_EQ(r.groups[0].entities.size(), 1u);
    EXPECT_EQ(r.groups[0].entities[0], (EntityRef{"E1", "v1"}));
    EXPECT_EQ(r.timestamp, parse_timestamp("2024/08/15/17:40:50"));
}

TEST(ParseLog, OneLocationTwoEntities) {
    const auto p = parse_log("{s1, (E1,v1), (E3,h1), 2024/08/15/18:12:20}");
    ASSERT_EQ(p.log.records.size(), 1u);
    const auto& g = p.log.records[0].groups;
    ASSERT_EQ(g.size(), 1u);
    ASSERT_EQ(g[0].entities.size(), 2u);
    EXPECT_EQ(g[0].entities[1], (EntityRef{"E3", "h1"}));
    EXPECT_EQ(p.log.records[0].event_count(), 2u);
}

TEST(ParseLog, MathDelimitersIgnored) {
    const auto p = parse_log("EL1: {$s1, (E1,v1)$, 2024/08/15/17:40:50}");
    EXPECT_EQ(p.log.records.at(0).groups.at(0).location_id, "s1");
}

TEST(ParseLog, SimultaneousLocations) {
    const auto p = parse_log("EL1: {s1, (E1,v1); s2, (E2,v2), 2024/08/15/18:12:20}");
    const auto& g = p.log.records.at(0).groups;
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[1].location_id, "s2");
    EXPECT_EQ(g[1].entities.at(0), (EntityRef{"E2", "v2"}));
}

TEST(ParseLog, AbbreviatedForm) {
    const auto p = parse_log("{v1_s1, 2024/08/15/17:40:50}");
    const auto& g = p.log.records.at(0).groups;
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].location_id, "s1");
    EXPECT_EQ(g[0].entities.at(0).id, "v1_s1");
    EXPECT_EQ(g[0].entities.at(0).property, "v1");
    // Canonical output is the full form.
    EXPECT_EQ(serialize_log(p.log), "{s1, (v1_s1,v1), 2024/08/15/17:40:50}\n");
}

TEST(ParseLog, CommentsAndBlankLinesSkipped) {
    const auto p = parse_log("# header\n\nEL2: {k1, (W1,RP), 2024/08/15/10:00:00}\n  \n");
    EXPECT_EQ(p.log.records.size(), 1u);
    EXPECT_EQ(p.log.label, "EL2");
}

TEST(ParseLog, DecreasingTimestampIsWarningAndOrderKept) {
    const auto p = parse_log("{s1, (E1,v1), 2024/08/15/10:00:10}\n{s2, (E1,v1), 2024/08/15/10:00:05}\n");
    ASSERT_EQ(p.warnings.size(), 1u);
    EXPECT_NE(p.warnings[0].find("line 2"), std::string::npos);
    EXPECT_EQ(p.log.records.at(1).groups.at(0).location_id, "s2");
}

TEST(ParseLog, MalformedRecordsReportLine) {
    const std::vector<std::string> bad{
        "{s1, (E1,v1)}",                                  // no timestamp field
        "{s1, (E1,v1), 2024/08/15}",                      // bad timestamp
        "s1, (E1,v1), 2024/08/15/10:00:00",               // no braces
        "{s1, (E1), 2024/08/15/10:00:00}",                // entity without property
        "{s1, (E1,v1, 2024/08/15/10:00:00}",              // unbalanced
        "{s1, (E1,v1); s1, (E2,v2), 2024/08/15/10:00:00}",  // repeated location
        "{s1, 2024/08/15/10:00:00}",                      // neither form
        "{, 2024/08/15/10:00:00}",                        // empty
        "EL 1: {s1, (E1,v1), 2024/08/15/10:00:00}",       // bad label
    };
    for (const auto& b : bad) {
        const std::string text = "{s0, (E0,v0), 2024/08/15/09:00:00}\n" + b + "\n";
        try {
            parse_log(text);
            ADD_FAILURE() << "accepted: " << b;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), 2u) << b << " -> " << e.what();
        }
    }
}

TEST(ParseLog, MixedLabelsRejected) {
    EXPECT_THROW(parse_log("EL1: {s1, (E1,v1), 2024/08/15/10:00:00}\nEL2: {s1, (E1,v1), 2024/08/15/10:00:01}\n"),
                 ParseError);
}

TEST(SerializeLog, CanonicalText) {
    EventLog log{"EL1", {}};
    log.records.push_back({{{"s1", {{"E1", "v1"}, {"E3", "h1"}}}, {"s2", {{"E2", "v2"}}}},
                           parse_timestamp("2024/08/15/18:12:20")});
    EXPECT_EQ(serialize_log(log), "EL1: {s1, (E1,v1), (E3,h1); s2, (E2,v2), 2024/08/15/18:12:20}\n");
}

TEST(SerializeLog, RoundTripCases) {
    for (const std::string text : {"EL1: {s1, (E1,v1), 2024/08/15/17:40:50}\n",
                                   "{s1, (E1,v1), (E3,h1), 2024/08/15/18:12:20}\n",
                                   "EL3: {s1, (E1,v1); s2, (E2,v2), 2024/08/15/18:12:20.5}\n"}) {
        const auto log = parse_log(text).log;
        EXPECT_EQ(serialize_log(log), text);
        EXPECT_EQ(parse_log(serialize_log(log)).log, log);
    }
}

namespace {

EventLog random_log(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> groups(1, 3), ents(1, 3), id(1, 30), step(0, 90);
    EventLog log{rng() % 2 ? "EL7" : "", {}};
    Timestamp t = spm::testing::at(0);
    const int n = 1 + static_cast<int>(rng() % 25);
    for (int i = 0; i < n; ++i) {
        t.micros += static_cast<std::int64_t>(step(rng)) * 500000;
        EventRecord r{{}, t};
        const int ng = groups(rng);
        for (int g = 0; g < ng; ++g) {
            LocationGroup lg{fmt::format("s{}{}", g, id(rng)), {}};
            const int ne = ents(rng);
            for (int e = 0; e < ne; ++e) lg.entities.push_back({fmt::format("E{}", id(rng)), fmt::format("p{}", id(rng) % 4)});
            r.groups.push_back(std::move(lg));
        }
        log.records.push_back(std::move(r));
    }
    return log;
}

}  // namespace

TEST(SerializeLogProperty, ModelAndTextRoundTrip) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto log = random_log(rng);
        const auto text = serialize_log(log);
        const auto back = parse_log(text);
        ASSERT_EQ(back.log, log) << text;
        ASSERT_TRUE(back.warnings.empty());
        ASSERT_EQ(serialize_log(back.log), text);
        ASSERT_EQ(parse_log_jsonl(serialize_log_jsonl(log)).log, log);
    }
}

TEST(JsonLines, SchemaShape) {
    const auto log = parse_log("EL1: {s1, (E1,v1), 2024/08/15/17:40:50}").log;
    const auto j = nlohmann::json::parse(serialize_log_jsonl(log));
    EXPECT_EQ(j.at("label"), "EL1");
    EXPECT_EQ(j.at("ts"), "2024/08/15/17:40:50");
    EXPECT_EQ(j.at("locations").at(0).at("id"), "s1");
    EXPECT_EQ(j.at("locations").at(0).at("entities").at(0).at("prop"), "v1");
}

TEST(JsonLines, ErrorsCarryLine) {
    try {
        parse_log_jsonl("{\"locations\":[{\"id\":\"s1\",\"entities\":[{\"id\":\"E\",\"prop\":\"v\"}]}],\"ts\":\"2024/08/15/10:00:00\"}\n{oops\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_log_jsonl("{\"locations\":[],\"ts\":\"2024/08/15/10:00:00\"}"), ParseError);
}

TEST(OccurrenceLog, GroupsSimultaneousStarts) {
    const std::vector<Occurrence> occ{{"s1", "worker-left", "2", at(5), "cam1"},
                                      {"s2", "big-AGV", "", at(5), "cam1"},
                                      {"s1", "worker-right", "1", at(5), "cam2"},
                                      {"s3", "worker-left", "2", at(9), "cam1"}};
    const auto log = occurrences_to_log(occ, "EL1");
    ASSERT_EQ(log.records.size(), 2u);
    ASSERT_EQ(log.records[0].groups.size(), 2u);
    EXPECT_EQ(log.records[0].event_count(), 3u);
    // Untracked entities take the class as id.
    EXPECT_EQ(log.records[0].groups[1].entities.at(0), (EntityRef{"big-AGV", "big-AGV"}));
    const auto back = log_to_occurrences(log);
    EXPECT_EQ(back.size(), occ.size());
}

// ---------------------------------------------------------------------------
// Cycles

namespace {

EventLog anchored_log(const std::vector<std::pair<double, std::string>>& events) {
    EventLog log{"EL", {}};
    for (const auto& [t, loc] : events) log.records.push_back(single(loc, "W1", "RP", at(t)));
    return log;
}

}  // namespace

TEST(SegmentCycles, AnchorToAnchorTimes) {
    const auto log = anchored_log({{0, "k1"}, {60, "s11"}, {510, "k1"}, {600, "s12"}, {700, "s13"}});
    const auto cycles = segment_cycles(log, CycleAnchor{std::string("k1")});
    ASSERT_EQ(cycles.size(), 2u);
    EXPECT_DOUBLE_EQ(cycles[0].cycle_time, 510.0);
    EXPECT_EQ(cycles[0].log.records.size(), 2u);
    EXPECT_EQ(cycles[0].index, 1u);
    EXPECT_EQ(cycles[0].log.label, "EL1");
    // Final cycle: span of its own records.
    EXPECT_DOUBLE_EQ(cycles[1].cycle_time, 190.0);
    EXPECT_EQ(cycles[1].first_record, 2u);
}

TEST(SegmentCycles, PropertyLocationLabelsMatch) {
    const auto log = anchored_log({{0, "k1"}, {10, "s11"}, {20, "k1"}});
    EXPECT_EQ(segment_cycles(log, CycleAnchor{std::string("RP_k1")}).size(), 2u);
    EXPECT_EQ(segment_cycles(log, CycleAnchor{std::string("RP_s1.")}).size(), 1u);
}

TEST(SegmentCycles, SingleRecordGivesZeroTime) {
    const auto log = anchored_log({{0, "k1"}});
    const auto cycles = segment_cycles(log, CycleAnchor{std::string("k1")});
    ASSERT_EQ(cycles.size(), 1u);
    EXPECT_DOUBLE_EQ(cycles[0].cycle_time, 0.0);
}

TEST(SegmentCycles, BoundariesAtEveryRecord) {
    const auto log = anchored_log({{0, "a"}, {5, "b"}, {12, "c"}});
    std::vector<Timestamp> b;
    for (const auto& r : log.records) b.push_back(r.timestamp);
    const auto cycles = segment_cycles(log, CycleAnchor{b});
    ASSERT_EQ(cycles.size(), 3u);
    EXPECT_DOUBLE_EQ(cycles[0].cycle_time, 5.0);
    EXPECT_DOUBLE_EQ(cycles[1].cycle_time, 7.0);
    EXPECT_DOUBLE_EQ(cycles[2].cycle_time, 0.0);
    for (const auto& c : cycles) EXPECT_EQ(c.log.records.size(), 1u);
}

TEST(SegmentCycles, RecordsBeforeFirstAnchorDropped) {
    const auto log = anchored_log({{0, "s1"}, {5, "k1"}, {9, "s2"}});
    const auto cycles = segment_cycles(log, CycleAnchor{std::string("k1")});
    ASSERT_EQ(cycles.size(), 1u);
    EXPECT_EQ(cycles[0].log.records.size(), 2u);
}

TEST(SegmentCycles, NoMatchListsLabels) {
    const auto log = anchored_log({{0, "s1"}, {5, "s2"}});
    try {
        segment_cycles(log, CycleAnchor{std::string("k9")});
        FAIL();
    } catch (const DomainError& e) {
        const std::string w = e.what();
        EXPECT_NE(w.find("s1"), std::string::npos);
        EXPECT_NE(w.find("RP_s2"), std::string::npos);
    }
}

TEST(SegmentCycles, BadBoundariesRejected) {
    const auto log = anchored_log({{0, "a"}, {5, "b"}});
    EXPECT_THROW(segment_cycles(log, CycleAnchor{std::vector<Timestamp>{at(5), at(0)}}), DomainError);
    EXPECT_THROW(segment_cycles(log, CycleAnchor{std::vector<Timestamp>{}}), DomainError);
    EXPECT_THROW(segment_cycles(log, CycleAnchor{std::vector<Timestamp>{at(0), at(1), at(5)}}), DomainError);
    EXPECT_THROW(segment_cycles(log, CycleAnchor{std::string("(")}), DomainError);
}

TEST(SegmentCyclesProperty, CoverageAndTranslationInvariance) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> gap(1, 120), pick(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, std::string>> ev;
        double t = 0;
        const int n = 2 + trial % 30;
        for (int i = 0; i < n; ++i) {
            t += gap(rng);
            ev.emplace_back(t, pick(rng) == 0 ? "k1" : "s1");
        }
        ev.front().second = "s1";
        ev[1].second = "k1";
        const auto log = anchored_log(ev);
        const auto cycles = segment_cycles(log, CycleAnchor{std::string("k1")});
        std::size_t total = 0;
        for (const auto& c : cycles) {
            ASSERT_FALSE(c.log.records.empty());
            ASSERT_GE(c.cycle_time, 0.0);
            total += c.log.records.size();
        }
        ASSERT_EQ(total, log.records.size() - cycles.front().first_record);

        auto shifted = log;
        for (auto& r : shifted.records) r.timestamp.micros += 86400LL * 1000000 * 37 + 123456;
        const auto sc = segment_cycles(shifted, CycleAnchor{std::string("k1")});
        ASSERT_EQ(sc.size(), cycles.size());
        for (std::size_t i = 0; i < sc.size(); ++i) ASSERT_DOUBLE_EQ(sc[i].cycle_time, cycles[i].cycle_time);
    }
}

// ---------------------------------------------------------------------------
// Gantt

TEST(Gantt, LanesAndTicksByLocation) {
    EventLog log{"EL1", {}};
    log.records.push_back(single("s1", "E1", "v1", at(0)));
    log.records.push_back(single("s2", "E2", "h1", at(10)));
    log.records.push_back(single("s1", "E2", "h1", at(20)));
    const auto chart = gantt(log, LaneKey::location);
    EXPECT_EQ(chart.lanes, (std::vector<std::string>{"s1", "s2"}));
    EXPECT_EQ(chart.ticks, 3u);
    const std::regex tick("<line class=\"event\"");
    EXPECT_EQ(std::distance(std::sregex_iterator(chart.svg.begin(), chart.svg.end(), tick), std::sregex_iterator()), 3);
    EXPECT_NE(chart.svg.find("<svg"), std::string::npos);
    EXPECT_NE(chart.svg.find("time since start"), std::string::npos);
    EXPECT_EQ(chart.svg.find("<rect class=\"bar"), std::string::npos);
}

TEST(Gantt, EntityLanesUseProperty) {
    const auto log = parse_log(
                         "EL1: {s1, (E1,v1), 2024/08/15/17:40:50}\n"
                         "EL1: {s2, (E1,v1), (E3,h1), 2024/08/15/17:41:10}\n"
                         "EL1: {s1, (E3,h1), 2024/08/15/17:42:00}\n")
                         .log;
    const auto by_entity = gantt(log, LaneKey::entity);
    const auto by_location = gantt(log, LaneKey::location);
    EXPECT_EQ(by_entity.lanes, (std::vector<std::string>{"h1", "v1"}));
    EXPECT_EQ(by_entity.ticks, by_location.ticks);
    EXPECT_EQ(by_entity.ticks, 4u);
    EXPECT_NE(by_entity.lanes, by_location.lanes);
}

TEST(Gantt, DeterministicAndEscaped) {
    EventLog log{"a<b", {}};
    log.records.push_back(single("s&1", "E1", "v1", at(0)));
    const auto a = gantt(log, LaneKey::location);
    EXPECT_EQ(a.svg, gantt(log, LaneKey::location).svg);
    EXPECT_NE(a.svg.find("s&amp;1"), std::string::npos);
    EXPECT_EQ(a.svg.find("a<b"), std::string::npos);
}

TEST(Gantt, EmptyLogRejected) { EXPECT_THROW(gantt(EventLog{}, LaneKey::location), DomainError); }

// ---------------------------------------------------------------------------
// Precision

namespace {

Occurrence ev(std::string loc, double t, std::string cls = "worker-right") {
    return {std::move(loc), std::move(cls), "1", at(t), {}};
}

}  // namespace

TEST(Precision, IdentityIsOne) {
    const std::vector<Occurrence> s{ev("s1", 0), ev("s2", 5), ev("s1", 9)};
    EXPECT_DOUBLE_EQ(precision(s, s, 0.0), 1.0);
}

TEST(Precision, FourOfFive) {
    const std::vector<Occurrence> truth{ev("s1", 0), ev("s2", 10), ev("s3", 20), ev("s4", 30)};
    const std::vector<Occurrence> det{ev("s1", 1), ev("s2", 11), ev("s3", 19), ev("s4", 31), ev("s5", 40)};
    EXPECT_DOUBLE_EQ(precision(det, truth, 2.0), 0.8);
}

TEST(Precision, EmptyDetectedIsOne) {
    const std::vector<Occurrence> truth{ev("s1", 0)};
    EXPECT_DOUBLE_EQ(precision({}, truth, 2.0), 1.0);
}

TEST(Precision, OneToOneAndKeyed) {
    const std::vector<Occurrence> truth{ev("s1", 0)};
    const std::vector<Occurrence> det{ev("s1", 0), ev("s1", 1)};
    EXPECT_DOUBLE_EQ(precision(det, truth, 5.0), 0.5);
    const std::vector<Occurrence> other_class{ev("s1", 0, "big-AGV")};
    EXPECT_DOUBLE_EQ(precision(other_class, truth, 5.0), 0.0);
}

TEST(Precision, NegativeWindowRejected) {
    EXPECT_THROW(precision({}, {}, -0.1), DomainError);
}

TEST(PrecisionProperty, BoundedAndMonotoneInWindow) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> t(0, 200);
    std::uniform_int_distribution<int> loc(0, 3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Occurrence> truth, det;
        for (int i = 0; i < 15; ++i) truth.push_back(ev(fmt::format("s{}", loc(rng)), t(rng)));
        for (int i = 0; i < 15; ++i) det.push_back(ev(fmt::format("s{}", loc(rng)), t(rng)));
        double prev = -1.0;
        for (double w : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 1000.0}) {
            const double p = precision(det, truth, w);
            ASSERT_GE(p, 0.0);
            ASSERT_LE(p, 1.0);
            ASSERT_GE(p, prev) << "window " << w;
            prev = p;
        }
    }
}
