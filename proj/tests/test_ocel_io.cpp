#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "oclpm/execution.hpp"
#include "oclpm/ocel_io.hpp"
#include "oracles.hpp"

using namespace oclpm;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "ocel:global-log": {"ocel:object-types": ["order"], "ocel:attribute-names": []},
  "ocel:events": {
    "e1": {"ocel:activity": "Place order", "ocel:timestamp": "2020-01-01T10:00:00Z",
           "ocel:omap": ["o1"], "ocel:vmap": {"amount": 3}}
  },
  "ocel:objects": {"o1": {"ocel:type": "order", "ocel:ovmap": {}}}
})";

std::string with_event(const std::string& event_json) {
    return R"({"ocel:events": {"e1": )" + event_json +
           R"(}, "ocel:objects": {"o1": {"ocel:type": "order", "ocel:ovmap": {}}}})";
}

Timestamp ts(int y, unsigned mo, unsigned d, int h, int mi, int s, int ms = 0) {
    using namespace std::chrono;
    return sys_days{year{y} / month{mo} / day{d}} + hours{h} + minutes{mi} + seconds{s} +
           milliseconds{ms};
}

}  // namespace

TEST(Timestamp, AcceptedForms) {
    EXPECT_EQ(parse_timestamp("2020-01-01T10:00:00Z"), ts(2020, 1, 1, 10, 0, 0));
    EXPECT_EQ(parse_timestamp("2020-01-01 10:00:00"), ts(2020, 1, 1, 10, 0, 0));
    EXPECT_EQ(parse_timestamp("2020-01-01T10:00"), ts(2020, 1, 1, 10, 0, 0));
    EXPECT_EQ(parse_timestamp("2020-01-01T10:00:00.123456Z"), ts(2020, 1, 1, 10, 0, 0, 123));
    EXPECT_EQ(parse_timestamp("2020-01-01T10:00:00.5"), ts(2020, 1, 1, 10, 0, 0, 500));
    EXPECT_EQ(parse_timestamp("2020-01-01T10:00:00+02:00"), ts(2020, 1, 1, 8, 0, 0));
    EXPECT_EQ(parse_timestamp("2020-01-01T01:00:00-0130"), ts(2020, 1, 1, 2, 30, 0));
    EXPECT_EQ(parse_timestamp("2020-03-01"), ts(2020, 3, 1, 0, 0, 0));
}

TEST(Timestamp, RejectedForms) {
    for (const char* bad : {"", "yesterday", "2020-13-01T00:00:00", "2020-02-30T00:00:00",
                            "2020-01-01T25:00:00", "2020-01-01T10:00:00+", "2020-01-01T10:00:00Zjunk",
                            "20-01-01", "2020-01-01T10"})
        EXPECT_FALSE(parse_timestamp(bad).has_value()) << bad;
}

TEST(Timestamp, FormatRoundTrips) {
    const auto t = ts(2021, 12, 31, 23, 59, 58, 7);
    EXPECT_EQ(format_timestamp(t), "2021-12-31T23:59:58.007Z");
    EXPECT_EQ(parse_timestamp(format_timestamp(t)), t);
}

TEST(ParseOcel, MinimalDocument) {
    auto [log, report] = parse_ocel_json(kMinimal);
    ASSERT_EQ(log.size(), 1u);
    const auto& e = log.events()[0];
    EXPECT_EQ(e.activity, "Place order");
    EXPECT_EQ(e.omap, (ObjectMap{{"order", {"o1"}}}));
    EXPECT_EQ(std::get<std::int64_t>(e.vmap.at("amount")), 3);
    EXPECT_EQ(report.event_count, 1u);
    EXPECT_EQ(report.object_count, 1u);
    EXPECT_EQ(report.type_count, 1u);
}

TEST(ParseOcel, UndeclaredObjectNamesId) {
    const auto doc = R"({"ocel:events": {"e1": {"ocel:activity": "a",
        "ocel:timestamp": "2020-01-01T00:00:00Z", "ocel:omap": ["x9"]}}, "ocel:objects": {}})";
    try {
        parse_ocel_json(doc);
        FAIL() << "expected StructuralError";
    } catch (const StructuralError& e) {
        EXPECT_NE(std::string(e.what()).find("x9"), std::string::npos);
    }
}

TEST(ParseOcel, MalformedJsonReportsOffset) {
    const std::string doc = R"({"ocel:events": {"e1": })";
    try {
        parse_ocel_json(doc);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GT(e.offset(), 0u);
        EXPECT_LE(e.offset(), doc.size());
    }
}

TEST(ParseOcel, BadTimestampNamesEvent) {
    try {
        parse_ocel_json(with_event(R"({"ocel:activity": "a", "ocel:timestamp": "noon", "ocel:omap": ["o1"]})"));
        FAIL() << "expected StructuralError";
    } catch (const StructuralError& e) {
        EXPECT_NE(std::string(e.what()).find("e1"), std::string::npos);
    }
}

TEST(ParseOcel, NestedAttributeRejected) {
    EXPECT_THROW(parse_ocel_json(with_event(R"({"ocel:activity": "a", "ocel:timestamp": "2020-01-01",
        "ocel:omap": ["o1"], "ocel:vmap": {"nested": {"k": 1}}})")),
                 StructuralError);
}

TEST(ParseOcel, WarningsForUnknownKeysAndMissingOmap) {
    auto [log, report] = parse_ocel_json(
        R"({"extra": 1, "ocel:events": {"e1": {"ocel:activity": "a", "ocel:timestamp": "2020-01-01",
            "custom": true}}, "ocel:objects": {}})");
    ASSERT_EQ(log.size(), 1u);
    EXPECT_TRUE(log.events()[0].omap.empty());
    EXPECT_GE(report.warnings.size(), 3u);
}

TEST(ParseOcel, NullAttributeDroppedWithWarning) {
    auto [log, report] = parse_ocel_json(with_event(
        R"({"ocel:activity": "a", "ocel:timestamp": "2020-01-01", "ocel:omap": ["o1"], "ocel:vmap": {"x": null}})"));
    EXPECT_TRUE(log.events()[0].vmap.empty());
    EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(ParseOcel, DuplicateIdsInOmapCollapse) {
    auto [log, report] = parse_ocel_json(with_event(
        R"({"ocel:activity": "a", "ocel:timestamp": "2020-01-01", "ocel:omap": ["o1", "o1"]})"));
    EXPECT_EQ(log.events()[0].objects("order"), std::vector<std::string>{"o1"});
}

TEST(ParseOcel, TimezonesNormalizeToUtc) {
    auto [log, report] = parse_ocel_json(with_event(
        R"({"ocel:activity": "a", "ocel:timestamp": "2020-01-01T12:00:00+05:00", "ocel:omap": ["o1"]})"));
    EXPECT_EQ(format_timestamp(log.events()[0].timestamp), "2020-01-01T07:00:00.000Z");
}

TEST(WriteOcel, EmptyLog) {
    const auto doc = json::parse(write_ocel_json(EventLog{}));
    EXPECT_TRUE(doc.at("ocel:events").is_object());
    EXPECT_TRUE(doc.at("ocel:events").empty());
    EXPECT_TRUE(doc.at("ocel:objects").empty());
}

TEST(WriteOcel, SingleEventListsSortedObjects) {
    Event e{"e1", "a", ts(2020, 1, 1, 0, 0, 0), {{"order", {"o2"}}, {"item", {"i9", "i1"}}}, {}};
    EventLog log({e}, {{"o2", {"order", {}}}, {"i1", {"item", {}}}, {"i9", {"item", {}}}});
    const auto doc = json::parse(write_ocel_json(log));
    ASSERT_EQ(doc.at("ocel:events").size(), 1u);
    EXPECT_EQ(doc.at("ocel:events").at("e1").at("ocel:omap"),
              json::array({"i1", "i9", "o2"}));
}

TEST(WriteOcel, RefusesInvalidLog) {
    Event e{"e1", "a", ts(2020, 1, 1, 0, 0, 0), {{"order", {"ghost"}}}, {}};
    EXPECT_THROW(write_ocel_json(EventLog({e}, {})), InvalidLogError);
}

TEST(WriteOcel, ByteDeterministic) {
    const auto a = write_ocel_json(generate_order_log(3, 2, 5));
    const auto b = write_ocel_json(generate_order_log(3, 2, 5));
    EXPECT_EQ(a, b);
}

TEST(RoundTrip, FixtureLog) {
    const auto original = generate_order_log(5, 2, 3);
    const auto [first, r1] = parse_ocel_json(write_ocel_json(original));
    EXPECT_EQ(first, original);
    const auto [second, r2] = parse_ocel_json(write_ocel_json(first));
    EXPECT_EQ(second, first);
    EXPECT_EQ(write_ocel_json(second), write_ocel_json(first));
}

TEST(RoundTrip, RandomLogsWithAttributes) {
    oracle::Rng rng(2024);
    oracle::LogShape shape;
    shape.attributes = true;
    for (int i = 0; i < 100; ++i) {
        const auto log = oracle::random_log(rng, shape);
        const auto [back, report] = parse_ocel_json(write_ocel_json(log));
        EXPECT_EQ(back, log) << "round " << i;
    }
}

TEST(ParseOcel, FuzzedDocumentsNeverYieldInvalidLogs) {
    oracle::Rng rng(77);
    const std::string base = write_ocel_json(generate_order_log(3, 2, 1));
    std::size_t accepted = 0;
    for (int i = 0; i < 300; ++i) {
        std::string doc = base;
        const std::size_t edits = oracle::uniform(rng, 1, 4);
        for (std::size_t k = 0; k < edits; ++k) {
            const std::size_t pos = oracle::uniform(rng, 0, doc.size() - 1);
            switch (oracle::uniform(rng, 0, 2)) {
            case 0: doc.erase(pos, oracle::uniform(rng, 1, 8)); break;
            case 1: doc.insert(pos, 1, "{}[]\",:0aZ-"[oracle::uniform(rng, 0, 11)]); break;
            default: doc[pos] = static_cast<char>(oracle::uniform(rng, 32, 126)); break;
            }
        }
        try {
            auto [log, report] = parse_ocel_json(doc);
            ++accepted;
            EXPECT_TRUE(validate_log(log).empty());
        } catch (const ParseError&) {
        } catch (const StructuralError&) {
        }
    }
    EXPECT_GT(accepted, 0u);
}

TEST(Csv, EmptyLogHeaderOnly) {
    std::ostringstream out;
    export_simple_log_csv({}, out);
    EXPECT_EQ(out.str(), "case,activity,timestamp,event_id\n");
}

TEST(Csv, OneTrace) {
    SimpleEventLog slog;
    Trace t;
    t.case_object = "c1";
    t.events.push_back(Event{"e1", "a", ts(2020, 1, 1, 0, 0, 0), {}, {}});
    t.events.push_back(Event{"e2", "b, quoted \"x\"", ts(2020, 1, 1, 0, 0, 1), {}, {}});
    slog.traces.push_back(t);
    std::ostringstream out;
    export_simple_log_csv(slog, out);
    EXPECT_EQ(out.str(),
              "case,activity,timestamp,event_id\n"
              "c1,a,2020-01-01T00:00:00.000Z,e1\n"
              "c1,\"b, quoted \"\"x\"\"\",2020-01-01T00:00:01.000Z,e2\n");
}

TEST(Csv, FixtureItemFlattening) {
    std::ostringstream out;
    export_simple_log_csv(flatten(generate_order_log(1, 1, 2), "item"), out);
    std::istringstream in(out.str());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_NE(lines[1].find("Place order"), std::string::npos);
    EXPECT_NE(lines[2].find("Pick item"), std::string::npos);
    EXPECT_NE(lines[3].find("Pack item"), std::string::npos);
}

TEST(Csv, SinkFailurePropagates) {
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    EXPECT_THROW(export_simple_log_csv({}, out), std::runtime_error);
}
