#include <gtest/gtest.h>

#include <algorithm>

#include "oclpm/execution.hpp"
#include "oclpm/place_oracle.hpp"
#include "oracles.hpp"

using namespace oclpm;

namespace {

SimpleEventLog traces_of(const std::vector<std::string>& words, std::size_t repeat = 1) {
    SimpleEventLog slog;
    std::size_t next = 0;
    for (std::size_t r = 0; r < repeat; ++r)
        for (const auto& w : words) {
            Trace t;
            t.case_object = "c" + std::to_string(slog.traces.size());
            for (char c : w) t.events.push_back(Event{"e" + std::to_string(next++), std::string(1, c), {}, {}, {}});
            slog.traces.push_back(std::move(t));
        }
    return slog;
}

bool contains(const std::vector<PlaceNet>& v, const PlaceNet& p) {
    return std::find(v.begin(), v.end(), p) != v.end();
}

OracleConfig uncapped() {
    OracleConfig cfg;
    cfg.max_places_per_type = 1000000;
    return cfg;
}

}  // namespace

TEST(OracleConfig, Validation) {
    EXPECT_NO_THROW(OracleConfig{}.check());
    OracleConfig c;
    c.fitness_threshold = 1.5;
    EXPECT_THROW(c.check(), std::invalid_argument);
    c = {};
    c.max_io_set_size = 0;
    EXPECT_THROW(c.check(), std::invalid_argument);
}

TEST(FittingFraction, Examples) {
    EXPECT_DOUBLE_EQ(fitting_fraction({{"a"}, {"b"}, "t"}, traces_of({"ab", "ba"})), 0.5);
    EXPECT_DOUBLE_EQ(fitting_fraction({{"a"}, {"b"}, "t"}, SimpleEventLog{}), 0.0);
    EXPECT_DOUBLE_EQ(fitting_fraction({{"a"}, {"a"}, "t"}, traces_of({"a"})), 0.0);
}

TEST(DiscoverPlaceNets, SequentialPair) {
    const auto places = discover_place_nets(traces_of({"ab"}, 10), "t", {});
    EXPECT_TRUE(contains(places, PlaceNet{{"a"}, {"b"}, "t"}));
    EXPECT_FALSE(contains(places, PlaceNet{{"b"}, {"a"}, "t"}));
    for (const auto& p : places) EXPECT_EQ(p.origin_type, "t");
}

TEST(DiscoverPlaceNets, SingleActivityGivesNothing) {
    EXPECT_TRUE(discover_place_nets(traces_of({"a"}), "t", {}).empty());
}

TEST(DiscoverPlaceNets, EmptyLog) {
    EXPECT_TRUE(discover_place_nets(SimpleEventLog{}, "t", {}).empty());
}

TEST(DiscoverPlaceNets, FixturePickBeforePack) {
    const auto slog = flatten(generate_order_log(20, 3, 1), "item");
    const PlaceNet pick_pack{{"Pick item"}, {"Pack item"}, "item"};
    EXPECT_DOUBLE_EQ(fitting_fraction(pick_pack, slog), 1.0);
    EXPECT_TRUE(contains(discover_place_nets(slog, "item", {}), pick_pack));
}

TEST(DiscoverPlaceNets, SubsumptionKeepsSmallerPlace) {
    // ({a},{c}) and ({a,b},{b,c}) fit the same traces; only the smaller one survives.
    const auto places = discover_place_nets(traces_of({"abc"}, 5), "t", uncapped());
    EXPECT_TRUE(contains(places, PlaceNet{{"a"}, {"c"}, "t"}));
    EXPECT_FALSE(contains(places, PlaceNet{{"a", "b"}, {"b", "c"}, "t"}));
}

TEST(DiscoverPlaceNets, CapAndOrdering) {
    oracle::Rng rng(3);
    const auto slog = oracle::random_simple_log(rng, 30, 8, 5, 10);
    OracleConfig cfg = uncapped();
    cfg.fitness_threshold = 0.2;
    const auto all = discover_place_nets(slog, "t", cfg);
    for (std::size_t i = 1; i < all.size(); ++i) {
        const auto a = oracle::fitting_traces(all[i - 1], slog), b = oracle::fitting_traces(all[i], slog);
        EXPECT_TRUE(a > b || (a == b && all[i - 1].descriptor() < all[i].descriptor()));
    }
    cfg.max_places_per_type = 3;
    const auto capped = discover_place_nets(slog, "t", cfg);
    ASSERT_EQ(capped.size(), std::min<std::size_t>(3, all.size()));
    EXPECT_TRUE(std::equal(capped.begin(), capped.end(), all.begin()));
}

TEST(DiscoverPlaceNets, SoundOnRandomLogs) {
    oracle::Rng rng(10);
    for (int round = 0; round < 100; ++round) {
        const auto slog = oracle::random_simple_log(rng, 12, 8, 6);
        OracleConfig cfg;
        cfg.fitness_threshold = 0.5 + 0.5 * static_cast<double>(round % 5) / 4.0;
        for (const auto& p : discover_place_nets(slog, "t", cfg)) {
            EXPECT_GE(static_cast<double>(oracle::fitting_traces(p, slog)),
                      cfg.fitness_threshold * static_cast<double>(slog.traces.size()));
            EXPECT_GE(fitting_fraction(p, slog), cfg.fitness_threshold);
            EXPECT_FALSE(p.inputs.empty());
            EXPECT_FALSE(p.outputs.empty());
            EXPECT_LE(p.inputs.size(), cfg.max_io_set_size);
            EXPECT_LE(p.outputs.size(), cfg.max_io_set_size);
        }
    }
}

TEST(DiscoverPlaceNets, SingletonCompleteness) {
    oracle::Rng rng(20);
    for (int round = 0; round < 100; ++round) {
        const std::size_t activities = oracle::uniform(rng, 2, 10);
        const auto slog = oracle::random_simple_log(rng, 15, 7, activities);
        OracleConfig cfg = uncapped();
        cfg.fitness_threshold = std::vector<double>{0.3, 0.6, 0.9, 1.0}[round % 4];
        cfg.min_activity_frequency = std::vector<double>{0.0, 0.05, 0.3}[round % 3];
        std::set<PlaceNet> singles;
        for (const auto& p : discover_place_nets(slog, "t", cfg))
            if (p.inputs.size() == 1 && p.outputs.size() == 1) singles.insert(p);
        EXPECT_EQ(singles, oracle::brute_singleton_places(slog, "t", cfg.min_activity_frequency,
                                                          cfg.fitness_threshold))
            << "round " << round;
    }
}

TEST(DiscoverPlaceNets, RaisingThresholdNeverAddsPlaces) {
    oracle::Rng rng(30);
    for (int round = 0; round < 50; ++round) {
        const auto slog = oracle::random_simple_log(rng, 10, 6, 4);
        OracleConfig lo = uncapped(), hi = uncapped();
        lo.fitness_threshold = 0.5;
        hi.fitness_threshold = 0.8;
        const auto a = discover_place_nets(slog, "t", lo);
        for (const auto& p : discover_place_nets(slog, "t", hi)) EXPECT_TRUE(contains(a, p));
    }
}

TEST(DiscoverPlaceNets, DeterministicAcrossThreads) {
    oracle::Rng rng(40);
    for (int round = 0; round < 20; ++round) {
        const auto slog = oracle::random_simple_log(rng, 40, 10, 7);
        OracleConfig one, many;
        many.threads = 4;
        EXPECT_EQ(discover_place_nets(slog, "t", one), discover_place_nets(slog, "t", many));
    }
}
