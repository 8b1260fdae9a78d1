#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oclpm/lpm.hpp"
#include "oclpm/ocel.hpp"
#include "oclpm/petri.hpp"

namespace oclpm {

class AssemblyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact ratio; compare with operator== on the reduced-free pair.
struct Fraction {
    std::size_t numerator = 0;
    std::size_t denominator = 1;

    double value() const {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    /// numerator / denominator < threshold, decided without rounding the ratio first.
    bool below(double threshold) const {
        return static_cast<double>(numerator) < threshold * static_cast<double>(denominator);
    }
    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.numerator * b.denominator == b.numerator * a.denominator;
    }
};

/// Share of covered events of activity `activity` that carry exactly one
/// object of type `type`. std::nullopt when no covered event has the activity.
std::optional<Fraction> var_arc_score(const std::string& activity, const std::string& type,
                                      std::span<const Event> covered);

/// Scores for every (activity, type) pair of one model, from one pass over the covered events.
struct VarArcScoreTable {
    std::map<std::pair<std::string, std::string>, std::optional<Fraction>> entries;
    std::map<std::string, std::size_t> covered_event_count;  // per activity

    static VarArcScoreTable build(const std::set<std::string>& activities,
                                  const std::set<std::string>& types,
                                  std::span<const Event> covered);
    std::optional<Fraction> score(const std::string& activity, const std::string& type) const;
};

struct TypeAnnotation {
    std::map<std::string, std::string> place_types;
    /// Places whose projection matched no place net of the assigned type.
    std::vector<std::string> structural_mismatches;
};

/// Types each place by its provenance place net. Throws AssemblyError when a
/// place has no provenance or its provenance is not in `place_types`.
TypeAnnotation annotate_types(const Lpm& lpm, const std::vector<PlaceNet>& place_types);

/// Arcs whose (transition label, place type) score is defined and below
/// `threshold`. Undefined scores are reported through `warnings`.
std::set<Arc> identify_variable_arcs(const Lpm& lpm,
                                     const std::map<std::string, std::string>& place_types,
                                     std::span<const Event> covered, double threshold,
                                     std::vector<std::string>* warnings = nullptr);

struct AssemblyResult {
    std::vector<Oclpm> models;
    std::vector<std::string> warnings;
    std::vector<std::string> errors;  // models dropped because assembly failed
};

/// Annotates, identifies variable arcs, deduplicates by canonical form, and
/// ranks. `slog` supplies the covered events and the ranking denominators.
AssemblyResult assemble_oclpms(const std::vector<DiscoveredLpm>& lpms,
                               const std::vector<PlaceNet>& place_types,
                               const SimpleEventLog& slog, const DiscoveryConfig& cfg);

}  // namespace oclpm
