#include "oclpm/execution.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace oclpm {

namespace {

std::string known_types(const EventLog& log) {
    std::string out;
    for (const auto& t : log.object_types()) out += (out.empty() ? "" : ", ") + t;
    return out.empty() ? "(none)" : out;
}

/// Object ids interned to dense indices, sorted by id.
struct ObjectIndex {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> index;

    explicit ObjectIndex(const EventLog& log) {
        std::set<std::string> all;
        for (const auto& [oid, info] : log.objects()) all.insert(oid);
        for (const auto& e : log.events())
            for (const auto& [type, objs] : e.omap) all.insert(objs.begin(), objs.end());
        ids.assign(all.begin(), all.end());
        index.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
    }

    std::vector<std::size_t> of(const Event& e) const {
        std::vector<std::size_t> out;
        for (const auto& [type, objs] : e.omap)
            for (const auto& o : objs) out.push_back(index.at(o));
        return out;
    }
};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

/// Object groups (each sorted) -> executions keyed and numbered by smallest member id.
std::map<std::string, Execution> number_groups(std::vector<std::vector<std::size_t>> groups,
                                               const ObjectIndex& objects) {
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::map<std::string, Execution> out;
    for (std::size_t n = 0; n < groups.size(); ++n) {
        Execution ex;
        for (auto o : groups[n]) ex.objects.insert(objects.ids[o]);
        out.emplace("exec_" + std::to_string(n), std::move(ex));
    }
    return out;
}

}  // namespace

bool InteractionGraph::has_edge(const std::string& a, const std::string& b) const {
    return provenance.contains(a < b ? Edge{a, b} : Edge{b, a});
}

SimpleEventLog flatten(const EventLog& log, const std::string& type) {
    if (!log.object_types().contains(type))
        throw std::invalid_argument("unknown object type '" + type + "'; known types: " +
                                    known_types(log));
    std::map<std::string, Trace> traces;
    for (const auto& e : log.events()) {
        for (const auto& oid : e.objects(type)) {
            auto& t = traces[oid];
            t.case_object = oid;
            t.events.push_back(e);
        }
    }
    SimpleEventLog out;
    out.traces.reserve(traces.size());
    for (auto& [oid, t] : traces) out.traces.push_back(std::move(t));
    return out;
}

InteractionGraph build_interaction_graph(const EventLog& log) {
    InteractionGraph g;
    ObjectIndex objects(log);
    g.nodes = objects.ids;
    for (const auto& e : log.events()) {
        std::vector<const std::string*> objs;
        for (const auto& [type, ids] : e.omap)
            for (const auto& o : ids) objs.push_back(&o);
        std::sort(objs.begin(), objs.end(), [](auto* a, auto* b) { return *a < *b; });
        for (std::size_t i = 0; i < objs.size(); ++i)
            for (std::size_t j = i + 1; j < objs.size(); ++j)
                if (*objs[i] != *objs[j]) g.provenance[{*objs[i], *objs[j]}].push_back(e.id);
    }
    return g;
}

std::pair<EventLog, ExecutionAssignment> process_execution_oracle(
    const EventLog& log, const ExecutionStrategy& strategy) {
    const std::string& exec_type = strategy.execution_type;
    if (log.object_types().contains(exec_type))
        throw std::invalid_argument("object type '" + exec_type + "' already exists in the log");

    ObjectIndex objects(log);
    const std::size_t n = objects.ids.size();
    std::vector<std::vector<std::size_t>> event_objects;
    event_objects.reserve(log.size());
    for (const auto& e : log.events()) event_objects.push_back(objects.of(e));

    std::vector<std::vector<std::size_t>> groups;
    if (strategy.kind == ExecutionStrategy::Kind::ConnectedComponents) {
        DisjointSets sets(n);
        for (const auto& objs : event_objects)
            for (std::size_t i = 1; i < objs.size(); ++i) sets.unite(objs[0], objs[i]);
        std::map<std::size_t, std::vector<std::size_t>> by_root;
        for (std::size_t o = 0; o < n; ++o) by_root[sets.find(o)].push_back(o);
        for (auto& [root, members] : by_root) groups.push_back(std::move(members));
    } else {
        const std::string& lead = strategy.leading_type;
        if (!log.object_types().contains(lead))
            throw std::invalid_argument("unknown leading type '" + lead + "'; known types: " +
                                        known_types(log));
        std::vector<std::size_t> leaders;
        for (std::size_t o = 0; o < n; ++o)
            if (log.object_type(objects.ids[o]) == lead) leaders.push_back(o);
        if (leaders.empty())
            throw std::invalid_argument("leading type '" + lead + "' has no objects");

        std::vector<std::vector<std::size_t>> adj(n);
        for (const auto& objs : event_objects)
            for (std::size_t i = 0; i < objs.size(); ++i)
                for (std::size_t j = i + 1; j < objs.size(); ++j) {
                    adj[objs[i]].push_back(objs[j]);
                    adj[objs[j]].push_back(objs[i]);
                }
        for (auto& a : adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }

        // Multi-source BFS; each node keeps every leader at minimal distance.
        constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
        std::vector<std::size_t> dist(n, kUnreached);
        std::vector<std::vector<std::size_t>> nearest(n);
        std::vector<std::size_t> frontier;
        for (std::size_t l = 0; l < leaders.size(); ++l) {
            dist[leaders[l]] = 0;
            nearest[leaders[l]] = {l};
            frontier.push_back(leaders[l]);
        }
        for (std::size_t d = 1; !frontier.empty(); ++d) {
            std::vector<std::size_t> next;
            for (auto u : frontier) {
                for (auto v : adj[u]) {
                    if (dist[v] == kUnreached) {
                        dist[v] = d;
                        next.push_back(v);
                    }
                    if (dist[v] == d) {
                        auto& nv = nearest[v];
                        nv.insert(nv.end(), nearest[u].begin(), nearest[u].end());
                    }
                }
            }
            for (auto v : next) {
                auto& nv = nearest[v];
                std::sort(nv.begin(), nv.end());
                nv.erase(std::unique(nv.begin(), nv.end()), nv.end());
            }
            frontier = std::move(next);
        }
        groups.assign(leaders.size(), {});
        for (std::size_t o = 0; o < n; ++o)
            for (auto l : nearest[o]) groups[l].push_back(o);
    }

    ExecutionAssignment assignment{strategy, number_groups(std::move(groups), objects)};

    // object index -> execution ids containing it
    std::vector<std::vector<const std::string*>> member_of(n);
    for (const auto& [exec_id, ex] : assignment.executions)
        for (const auto& o : ex.objects) member_of[objects.index.at(o)].push_back(&exec_id);

    std::vector<Event> events = log.events();
    for (std::size_t i = 0; i < events.size(); ++i) {
        std::set<std::string> execs;
        for (auto o : event_objects[i])
            for (const auto* id : member_of[o]) execs.insert(*id);
        for (const auto& id : execs) assignment.executions.at(id).events.insert(events[i].id);
        if (!execs.empty()) events[i].omap[exec_type].assign(execs.begin(), execs.end());
    }

    auto obj_table = log.objects();
    for (const auto& [exec_id, ex] : assignment.executions) obj_table[exec_id] = {exec_type, {}};
    auto types = log.object_types();
    types.insert(exec_type);
    EventLog enhanced(std::move(events), std::move(obj_table), std::move(types),
                      log.explicit_order());
    return {std::move(enhanced), std::move(assignment)};
}

SimpleEventLog prepare_simple_log(const EventLog& log, const ExecutionStrategy& strategy) {
    auto [enhanced, assignment] = process_execution_oracle(log, strategy);
    return flatten(enhanced, strategy.execution_type);
}

}  // namespace oclpm
