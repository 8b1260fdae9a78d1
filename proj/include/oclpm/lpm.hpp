#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "oclpm/ocel.hpp"
#include "oclpm/petri.hpp"

namespace oclpm {

struct DiscoveryConfig {
    std::size_t min_places = 2;
    std::size_t max_places = 7;
    std::size_t min_transitions = 3;
    std::size_t max_transitions = 10;
    std::size_t window = 7;
    std::size_t min_occurrences = 5;
    double var_arc_threshold = 0.95;
    std::size_t max_models = 1000;
    unsigned threads = 1;

    /// Throws std::invalid_argument when bounds are inconsistent.
    void check() const;
};

struct Occurrence {
    std::size_t trace = 0;
    std::vector<std::string> events;  // ordered event ids

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct MatchResult {
    std::vector<Occurrence> occurrences;
    std::set<std::string> covered_events;
    std::size_t support = 0;
};

/// Earliest occurrence of the model anchored at the first event of `window`.
///
/// Searches subsequences that start with window[0], in lexicographic order of
/// event positions, for one that fires only net transitions (by label), never
/// drives a place negative from the empty marking, fires every transition at
/// least once, and ends with every place empty. Returns its event ids.
std::optional<std::vector<std::string>> match_window(const Lpm& lpm,
                                                     std::span<const Event> window);

/// Runs match_window at every trace position over windows of `window` events.
MatchResult match_log(const Lpm& lpm, const SimpleEventLog& slog, std::size_t window);

struct DiscoveredLpm {
    Lpm lpm;
    MatchResult match;
    double quality = 0.0;
};

/// Breadth-first combination of place nets into LPMs. Level 1 holds single
/// place nets; each survivor of level k is extended by one place net sharing
/// an activity with it. A candidate survives when it respects the place and
/// transition maxima and matches at least min_occurrences times. Survivors
/// meeting the minima are ranked with rank_models and the first max_models
/// are returned.
std::vector<DiscoveredLpm> discover_lpms(const SimpleEventLog& slog,
                                         const std::vector<PlaceNet>& place_nets,
                                         const DiscoveryConfig& cfg);

/// Harmonic mean of min(1, support / traces) and covered / distinct events.
double model_quality(std::size_t support, std::size_t covered, std::size_t traces,
                     std::size_t events);

/// Sorts by descending quality, then more transitions, then canonical form,
/// and fills in `quality`.
std::vector<DiscoveredLpm> rank_models(std::vector<DiscoveredLpm> results,
                                       const SimpleEventLog& slog);

/// Number of distinct event ids in the simple log.
std::size_t distinct_event_count(const SimpleEventLog& slog);

}  // namespace oclpm
