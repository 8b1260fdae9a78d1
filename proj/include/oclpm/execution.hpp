#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oclpm/ocel.hpp"

namespace oclpm {

inline constexpr const char* kExecutionType = "__execution";

/// Groups events on object type `type`: one trace per object of that type
/// that occurs in some event, ordered by (timestamp, id). An event carrying k
/// objects of the type appears in k traces. Throws std::invalid_argument for
/// a type the log does not know.
SimpleEventLog flatten(const EventLog& log, const std::string& type);

/// Objects are nodes; two objects are adjacent iff some event carries both.
struct InteractionGraph {
    using Edge = std::pair<std::string, std::string>;  // first < second

    std::vector<std::string> nodes;                      // sorted
    std::map<Edge, std::vector<std::string>> provenance;  // edge -> inducing event ids

    std::size_t edge_count() const { return provenance.size(); }
    bool has_edge(const std::string& a, const std::string& b) const;
};

InteractionGraph build_interaction_graph(const EventLog& log);

struct ExecutionStrategy {
    enum class Kind { ConnectedComponents, LeadingType };
    Kind kind = Kind::ConnectedComponents;
    std::string leading_type;
    std::string execution_type = kExecutionType;

    static ExecutionStrategy connected_components() { return {}; }
    static ExecutionStrategy leading(std::string type) {
        return {Kind::LeadingType, std::move(type), kExecutionType};
    }
};

struct Execution {
    std::set<std::string> objects;
    std::set<std::string> events;
};

struct ExecutionAssignment {
    ExecutionStrategy strategy;
    std::map<std::string, Execution> executions;  // keyed by "exec_<n>"
};

/// Adds a fresh object type grouping interacting objects into process
/// executions. Execution ids are "exec_<n>", numbered in order of the
/// smallest object id each contains. Throws std::invalid_argument when the
/// execution type name is taken, or the leading type is unknown or has no
/// objects.
std::pair<EventLog, ExecutionAssignment> process_execution_oracle(
    const EventLog& log, const ExecutionStrategy& strategy);

/// flatten(process_execution_oracle(log).first, execution type). Events
/// without objects belong to no execution and are absent from the result.
SimpleEventLog prepare_simple_log(const EventLog& log, const ExecutionStrategy& strategy);

}  // namespace oclpm
