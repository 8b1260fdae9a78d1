#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "oclpm/execution.hpp"
#include "oclpm/lpm.hpp"
#include "oclpm/ocel.hpp"
#include "oclpm/petri.hpp"
#include "oclpm/place_oracle.hpp"

namespace oclpm {

struct PipelineConfig {
    std::string input;
    ExecutionStrategy strategy;
    OracleConfig oracle;
    DiscoveryConfig discovery;
    std::string output;   // models JSON; empty = do not write
    std::string dot_dir;  // empty = no DOT files
    bool show_endpoints = false;
    unsigned threads = 1;
    std::uint64_t seed = 1;

    void check() const;
};

struct PhaseTiming {
    std::string name;
    double seconds = 0.0;
};

struct RunReport {
    std::size_t model_count = 0;
    std::vector<PhaseTiming> phases;
    double total_seconds = 0.0;
    std::vector<std::string> warnings;
};

struct DiscoveryOutcome {
    std::vector<Oclpm> models;
    std::vector<PlaceNet> place_types;  // PT: every discovered place net with its type
    RunReport report;
};

/// Both discovery phases on an in-memory log: per-type place discovery,
/// execution extraction, LPM combination, and OCLPM assembly.
DiscoveryOutcome discover_oclpms(const EventLog& log, const PipelineConfig& cfg);

/// Reads cfg.input, runs discover_oclpms, and writes the configured outputs.
/// Throws ParseError / StructuralError for unreadable input.
RunReport run_discovery(const PipelineConfig& cfg);

/// Models JSON: an array of
/// {places:[{id,type,inputs,outputs}], transitions:[labels],
///  arcs:[{from,to,variable}], score:{support,coverage,rank}}.
/// Arc endpoints are place ids and transition labels.
std::string models_to_json(const std::vector<Oclpm>& models);
/// Inverse of models_to_json. Throws StructuralError on schema violations.
std::vector<Oclpm> models_from_json(std::string_view text);

struct DotOptions {
    bool show_endpoints = false;
    /// Color assignment order; types missing here are appended in sorted order.
    std::vector<std::string> type_order;
};

/// Graphviz digraph: transitions as labelled boxes, places as circles colored
/// by type, variable arcs drawn with penwidth=3.
std::string render_dot(const Oclpm& model, const DotOptions& options = {});

struct LogStats {
    std::size_t events = 0;
    std::size_t objects = 0;
    std::size_t object_types = 0;
    std::map<std::string, std::size_t> objects_per_type;
    std::map<std::string, std::size_t> events_per_type;
};

LogStats log_stats(const EventLog& log);
std::string format_stats(const LogStats& stats);

}  // namespace oclpm
