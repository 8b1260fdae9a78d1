#include <gtest/gtest.h>

#include <deque>

#include "oclpm/execution.hpp"
#include "oracles.hpp"

using namespace oclpm;

namespace {

Timestamp at(int s) { return Timestamp{} + std::chrono::seconds(s); }

std::set<std::set<std::string>> partition_of(const ExecutionAssignment& a) {
    std::set<std::set<std::string>> out;
    for (const auto& [id, ex] : a.executions) out.insert(ex.objects);
    return out;
}

EventLog triangle() {
    return EventLog({Event{"e1", "a", at(0), {{"order", {"o1"}}, {"item", {"i1", "i2"}}}, {}}},
                    {{"o1", {"order", {}}}, {"i1", {"item", {}}}, {"i2", {"item", {}}}});
}

/// Leading-type assignment recomputed with one BFS per leading object.
std::set<std::set<std::string>> leading_oracle(const EventLog& log, const std::string& type) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& [oid, info] : log.objects()) adj[oid];
    for (const auto& e : log.events()) {
        std::vector<std::string> objs;
        for (const auto& [t, ids] : e.omap) objs.insert(objs.end(), ids.begin(), ids.end());
        for (const auto& a : objs) {
            adj[a];
            for (const auto& b : objs)
                if (a != b) adj[a].insert(b);
        }
    }
    std::vector<std::string> leaders;
    for (const auto& [oid, info] : log.objects())
        if (info.type == type) leaders.push_back(oid);
    std::map<std::string, std::map<std::string, std::size_t>> dist;  // leader -> object -> d
    for (const auto& l : leaders) {
        auto& d = dist[l];
        std::deque<std::string> q{l};
        d[l] = 0;
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            for (const auto& v : adj[u])
                if (!d.contains(v)) {
                    d[v] = d[u] + 1;
                    q.push_back(v);
                }
        }
    }
    std::map<std::string, std::set<std::string>> groups;
    for (const auto& l : leaders) groups[l];
    for (const auto& [obj, _] : adj) {
        std::size_t best = SIZE_MAX;
        for (const auto& l : leaders)
            if (auto it = dist[l].find(obj); it != dist[l].end()) best = std::min(best, it->second);
        for (const auto& l : leaders)
            if (auto it = dist[l].find(obj); it != dist[l].end() && it->second == best)
                groups[l].insert(obj);
    }
    std::set<std::set<std::string>> out;
    for (auto& [l, g] : groups) out.insert(g);
    return out;
}

}  // namespace

TEST(Flatten, SingleEvent) {
    EventLog log({Event{"e1", "a", at(0), {{"order", {"o1"}}}, {}}}, {{"o1", {"order", {}}}});
    const auto slog = flatten(log, "order");
    ASSERT_EQ(slog.traces.size(), 1u);
    EXPECT_EQ(slog.traces[0].case_object, "o1");
    ASSERT_EQ(slog.traces[0].events.size(), 1u);
    EXPECT_EQ(slog.traces[0].events[0].id, "e1");
}

TEST(Flatten, UnknownTypeListsKnownTypes) {
    try {
        flatten(generate_order_log(1, 1, 1), "customer");
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("customer"), std::string::npos);
        EXPECT_NE(msg.find("item"), std::string::npos);
        EXPECT_NE(msg.find("order"), std::string::npos);
    }
}

TEST(Flatten, FixtureItemsReplicatePlaceOrder) {
    const auto slog = flatten(generate_order_log(1, 2, 7), "item");
    ASSERT_EQ(slog.traces.size(), 2u);
    for (const auto& t : slog.traces) {
        ASSERT_EQ(t.events.size(), 3u);
        EXPECT_EQ(t.events[0].activity, "Place order");
        EXPECT_EQ(t.events[1].activity, "Pick item");
        EXPECT_EQ(t.events[2].activity, "Pack item");
    }
    EXPECT_EQ(slog.traces[0].events[0].id, slog.traces[1].events[0].id);
}

TEST(Flatten, ConservationOnRandomLogs) {
    oracle::Rng rng(8);
    for (int round = 0; round < 100; ++round) {
        const auto log = oracle::random_log(rng);
        for (const auto& type : log.object_types()) {
            const auto slog = flatten(log, type);
            std::size_t expected = 0;
            for (const auto& e : log.events()) expected += e.objects(type).size();
            EXPECT_EQ(slog.event_occurrences(), expected);
            for (const auto& t : slog.traces) {
                EXPECT_FALSE(t.events.empty());
                for (std::size_t i = 1; i < t.events.size(); ++i)
                    EXPECT_TRUE(precedes(t.events[i - 1], t.events[i]));
                for (const auto& e : t.events) {
                    const auto& ids = e.objects(type);
                    EXPECT_TRUE(std::binary_search(ids.begin(), ids.end(), t.case_object));
                }
            }
        }
    }
}

TEST(InteractionGraph, NoEdgesForSingleObjectEvents) {
    EventLog log({Event{"e1", "a", at(0), {{"t", {"o1"}}}, {}}, Event{"e2", "a", at(1), {{"t", {"o2"}}}, {}}},
                 {{"o1", {"t", {}}}, {"o2", {"t", {}}}});
    const auto g = build_interaction_graph(log);
    EXPECT_EQ(g.nodes, (std::vector<std::string>{"o1", "o2"}));
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(InteractionGraph, Triangle) {
    const auto g = build_interaction_graph(triangle());
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_TRUE(g.has_edge("o1", "i1"));
    EXPECT_TRUE(g.has_edge("i2", "i1"));
    EXPECT_TRUE(g.has_edge("o1", "i2"));
    for (const auto& [edge, events] : g.provenance) EXPECT_EQ(events, std::vector<std::string>{"e1"});
}

TEST(InteractionGraph, EdgesMatchCooccurrence) {
    oracle::Rng rng(12);
    for (int round = 0; round < 50; ++round) {
        const auto log = oracle::random_log(rng);
        const auto g = build_interaction_graph(log);
        std::set<std::pair<std::string, std::string>> expected;
        for (const auto& e : log.events()) {
            std::vector<std::string> objs;
            for (const auto& [t, ids] : e.omap) objs.insert(objs.end(), ids.begin(), ids.end());
            for (const auto& a : objs)
                for (const auto& b : objs)
                    if (a < b) expected.insert({a, b});
        }
        std::set<std::pair<std::string, std::string>> actual;
        for (const auto& [edge, events] : g.provenance) {
            EXPECT_FALSE(events.empty());
            actual.insert(edge);
        }
        EXPECT_EQ(actual, expected);
    }
}

TEST(ExecutionOracle, TwoSeparateOrders) {
    const auto log = generate_order_log(2, 1, 9);
    const auto [enhanced, assignment] = process_execution_oracle(log, ExecutionStrategy::connected_components());
    ASSERT_EQ(assignment.executions.size(), 2u);
    for (const auto& [id, ex] : assignment.executions) {
        EXPECT_EQ(ex.objects.size(), 3u);
        std::set<std::string> types;
        for (const auto& o : ex.objects) types.insert(*log.object_type(o));
        EXPECT_EQ(types, (std::set<std::string>{"item", "order", "package"}));
    }
    EXPECT_EQ(partition_of(assignment), oracle::component_partition(log));
}

TEST(ExecutionOracle, TwoOrdersTwoItemsSplitEvents) {
    const auto log = generate_order_log(2, 2, 4);
    const auto [enhanced, assignment] = process_execution_oracle(log, ExecutionStrategy::connected_components());
    EXPECT_EQ(assignment.executions.size(), 2u);
    const auto slog = flatten(enhanced, kExecutionType);
    ASSERT_EQ(slog.traces.size(), 2u);
    EXPECT_EQ(slog.traces[0].events.size() + slog.traces[1].events.size(), log.size());
}

TEST(ExecutionOracle, ZeroEdgesGivesOneExecutionPerObject) {
    EventLog log({Event{"e1", "a", at(0), {{"t", {"o1"}}}, {}}, Event{"e2", "b", at(1), {{"t", {"o2"}}}, {}},
                  Event{"e3", "c", at(2), {{"t", {"o1"}}}, {}}},
                 {{"o1", {"t", {}}}, {"o2", {"t", {}}}});
    const auto [enhanced, a] = process_execution_oracle(log, ExecutionStrategy::connected_components());
    ASSERT_EQ(a.executions.size(), 2u);
    EXPECT_EQ(a.executions.at("exec_0").objects, std::set<std::string>{"o1"});
    EXPECT_EQ(a.executions.at("exec_0").events, (std::set<std::string>{"e1", "e3"}));
    EXPECT_EQ(a.executions.at("exec_1").events, std::set<std::string>{"e2"});
}

TEST(ExecutionOracle, EnhancementPreservesOriginalData) {
    oracle::Rng rng(21);
    for (int round = 0; round < 30; ++round) {
        const auto log = oracle::random_log(rng);
        const auto [enhanced, a] = process_execution_oracle(log, ExecutionStrategy::connected_components());
        ASSERT_EQ(enhanced.size(), log.size());
        EXPECT_TRUE(validate_log(enhanced).empty());
        for (std::size_t i = 0; i < log.size(); ++i) {
            const auto& before = log.events()[i];
            const auto& after = enhanced.events()[i];
            EXPECT_EQ(before.id, after.id);
            EXPECT_EQ(before.activity, after.activity);
            EXPECT_EQ(before.timestamp, after.timestamp);
            for (const auto& [type, ids] : before.omap) EXPECT_EQ(after.objects(type), ids);
            EXPECT_EQ(after.objects(kExecutionType).size(), before.object_count() > 0 ? 1u : 0u);
        }
    }
}

TEST(ExecutionOracle, ComponentsMatchUnionFind) {
    oracle::Rng rng(31);
    oracle::LogShape shape;
    shape.max_events = 80;
    shape.max_objects_per_type = 30;
    for (int round = 0; round < 60; ++round) {
        const auto log = oracle::random_log(rng, shape);
        const auto [enhanced, a] = process_execution_oracle(log, ExecutionStrategy::connected_components());
        EXPECT_EQ(partition_of(a), oracle::component_partition(log));
        for (const auto& [id, ex] : a.executions) {
            std::set<std::string> expected;
            for (const auto& e : log.events())
                for (const auto& [t, ids] : e.omap)
                    for (const auto& o : ids)
                        if (ex.objects.contains(o)) expected.insert(e.id);
            EXPECT_EQ(ex.events, expected);
        }
    }
}

TEST(ExecutionOracle, ReservedTypeNameRejected) {
    EventLog log({Event{"e1", "a", at(0), {{kExecutionType, {"x"}}}, {}}}, {{"x", {kExecutionType, {}}}});
    EXPECT_THROW(process_execution_oracle(log, ExecutionStrategy::connected_components()), std::invalid_argument);
}

TEST(LeadingType, TriangleWithOneOrder) {
    const auto [enhanced, a] = process_execution_oracle(triangle(), ExecutionStrategy::leading("order"));
    ASSERT_EQ(a.executions.size(), 1u);
    EXPECT_EQ(a.executions.begin()->second.objects, (std::set<std::string>{"i1", "i2", "o1"}));
}

TEST(LeadingType, UnknownOrEmptyTypeRejected) {
    EXPECT_THROW(process_execution_oracle(triangle(), ExecutionStrategy::leading("nope")), std::invalid_argument);
    EventLog log({Event{"e1", "a", at(0), {{"item", {"i1"}}}, {}}}, {{"i1", {"item", {}}}}, {"order"});
    EXPECT_THROW(process_execution_oracle(log, ExecutionStrategy::leading("order")), std::invalid_argument);
}

TEST(LeadingType, TiedObjectsJoinAllExecutions) {
    // o1 - i1 - o2: i1 is one hop from both orders.
    EventLog log({Event{"e1", "a", at(0), {{"order", {"o1"}}, {"item", {"i1"}}}, {}},
                  Event{"e2", "b", at(1), {{"order", {"o2"}}, {"item", {"i1"}}}, {}}},
                 {{"o1", {"order", {}}}, {"o2", {"order", {}}}, {"i1", {"item", {}}}});
    const auto [enhanced, a] = process_execution_oracle(log, ExecutionStrategy::leading("order"));
    EXPECT_EQ(partition_of(a), (std::set<std::set<std::string>>{{"i1", "o1"}, {"i1", "o2"}}));
    EXPECT_EQ(enhanced.find("e1")->objects(kExecutionType).size(), 2u);
}

TEST(LeadingType, MatchesBfsOracle) {
    oracle::Rng rng(41);
    oracle::LogShape shape;
    shape.max_events = 30;
    shape.max_objects_per_type = 8;
    shape.max_types = 3;
    for (int round = 0; round < 60; ++round) {
        const auto log = oracle::random_log(rng, shape);
        const std::string lead = "type0";
        const auto [enhanced, a] = process_execution_oracle(log, ExecutionStrategy::leading(lead));
        EXPECT_EQ(partition_of(a), leading_oracle(log, lead)) << "round " << round;
    }
}

TEST(PrepareSimpleLog, OneTracePerOrder) {
    const auto slog = prepare_simple_log(generate_order_log(3, 2, 8), ExecutionStrategy::connected_components());
    ASSERT_EQ(slog.traces.size(), 3u);
    for (const auto& t : slog.traces)
        for (std::size_t i = 1; i < t.events.size(); ++i)
            EXPECT_LE(t.events[i - 1].timestamp, t.events[i].timestamp);
}

TEST(PrepareSimpleLog, SingleObject) {
    EventLog log({Event{"e1", "a", at(0), {{"t", {"o1"}}}, {}}, Event{"e2", "b", at(1), {{"t", {"o1"}}}, {}}},
                 {{"o1", {"t", {}}}});
    const auto slog = prepare_simple_log(log, ExecutionStrategy::connected_components());
    ASSERT_EQ(slog.traces.size(), 1u);
    EXPECT_EQ(slog.traces[0].events.size(), 2u);
}
