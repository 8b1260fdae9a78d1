#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "oclpm/ocel.hpp"
#include "oclpm/petri.hpp"

namespace oclpm {

struct OracleConfig {
    std::size_t max_io_set_size = 2;
    double min_activity_frequency = 0.05;  // fraction of traces containing the activity
    double fitness_threshold = 0.9;
    std::size_t max_places_per_type = 50;
    unsigned threads = 1;

    /// Throws std::invalid_argument on out-of-range values.
    void check() const;
};

/// Fraction of traces whose projection onto the place's activities replays
/// without going negative and ends empty. 0 for an empty log.
double fitting_fraction(const PlaceNet& place, const SimpleEventLog& slog);

/// Enumerate-and-replay place discovery on one flattened log.
///
/// Candidates pair input and output sets of 1..max_io_set_size frequent
/// activities. A candidate is kept when its fitting fraction reaches the
/// threshold and some trace contains one of its input activities. Among
/// kept candidates, one is dropped when a candidate with subset inputs and
/// subset outputs fits exactly the same traces. The result is ordered by
/// descending fitting-trace count, then descriptor, and capped at
/// max_places_per_type. Every place is tagged with `type`.
std::vector<PlaceNet> discover_place_nets(const SimpleEventLog& slog, const std::string& type,
                                          const OracleConfig& cfg);

}  // namespace oclpm
