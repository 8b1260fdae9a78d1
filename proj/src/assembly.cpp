#include "oclpm/assembly.hpp"

#include <algorithm>
#include <unordered_map>

namespace oclpm {

std::optional<Fraction> var_arc_score(const std::string& activity, const std::string& type,
                                      std::span<const Event> covered) {
    Fraction f{0, 0};
    for (const auto& e : covered) {
        if (e.activity != activity) continue;
        ++f.denominator;
        if (e.objects(type).size() == 1) ++f.numerator;
    }
    if (f.denominator == 0) return std::nullopt;
    return f;
}

VarArcScoreTable VarArcScoreTable::build(const std::set<std::string>& activities,
                                         const std::set<std::string>& types,
                                         std::span<const Event> covered) {
    VarArcScoreTable table;
    std::map<std::pair<std::string, std::string>, std::size_t> singles;
    for (const auto& e : covered) {
        if (!activities.contains(e.activity)) continue;
        ++table.covered_event_count[e.activity];
        for (const auto& t : types)
            if (e.objects(t).size() == 1) ++singles[{e.activity, t}];
    }
    for (const auto& a : activities) {
        const auto total = table.covered_event_count[a];
        for (const auto& t : types) {
            if (total == 0) {
                table.entries[{a, t}] = std::nullopt;
            } else {
                table.entries[{a, t}] = Fraction{singles[{a, t}], total};
            }
        }
    }
    return table;
}

std::optional<Fraction> VarArcScoreTable::score(const std::string& activity,
                                                const std::string& type) const {
    auto it = entries.find({activity, type});
    return it == entries.end() ? std::nullopt : it->second;
}

TypeAnnotation annotate_types(const Lpm& lpm, const std::vector<PlaceNet>& place_types) {
    TypeAnnotation out;
    for (const auto& p : lpm.net.places) {
        auto prov = lpm.place_provenance.find(p);
        if (prov == lpm.place_provenance.end())
            throw AssemblyError("place " + p + " has no provenance place net");
        if (std::find(place_types.begin(), place_types.end(), prov->second) == place_types.end())
            throw AssemblyError("provenance of place " + p + " " + prov->second.descriptor() +
                                " is not among the discovered place nets");
        out.place_types[p] = prov->second.origin_type;

        // Structural recomputation: the projection must match some place net of that type.
        const auto projected = project_place(lpm.net, p);
        const bool matched =
            std::any_of(place_types.begin(), place_types.end(), [&](const PlaceNet& pn) {
                return pn.origin_type == prov->second.origin_type &&
                       label_isomorphic(projected, pn.net());
            });
        if (!matched) out.structural_mismatches.push_back(p);
    }
    return out;
}

std::set<Arc> identify_variable_arcs(const Lpm& lpm,
                                     const std::map<std::string, std::string>& place_types,
                                     std::span<const Event> covered, double threshold,
                                     std::vector<std::string>* warnings) {
    std::set<std::string> types;
    for (const auto& [p, t] : place_types) types.insert(t);
    const auto table = VarArcScoreTable::build(lpm.activities(), types, covered);

    std::set<Arc> out;
    for (const auto& arc : lpm.net.arcs) {
        const bool into_place = lpm.net.places.contains(arc.target);
        const auto& place = into_place ? arc.target : arc.source;
        const auto& transition = into_place ? arc.source : arc.target;
        const auto& label = lpm.net.labels.at(transition);
        if (!label) continue;
        const auto& type = place_types.at(place);
        const auto score = table.score(*label, type);
        if (!score) {
            if (warnings)
                warnings->push_back("variable-arc score undefined for activity '" + *label +
                                    "' and type '" + type + "'; arc kept non-variable");
            continue;
        }
        if (score->below(threshold)) out.insert(arc);
    }
    return out;
}

AssemblyResult assemble_oclpms(const std::vector<DiscoveredLpm>& lpms,
                               const std::vector<PlaceNet>& place_types,
                               const SimpleEventLog& slog, const DiscoveryConfig& cfg) {
    AssemblyResult result;
    std::unordered_map<std::string, const Event*> by_id;
    for (const auto& t : slog.traces)
        for (const auto& e : t.events) by_id.emplace(e.id, &e);
    const std::size_t traces = slog.traces.size();
    const std::size_t events = by_id.size();

    struct Entry {
        Oclpm model;
        std::string canonical;
    };
    std::vector<Entry> built;
    for (const auto& d : lpms) {
        try {
            TypeAnnotation annotation = annotate_types(d.lpm, place_types);
            for (const auto& p : annotation.structural_mismatches)
                result.warnings.push_back("place " + p + " of " + canonical_form(d.lpm) +
                                          " does not project onto a discovered place net");

            std::vector<Event> covered;
            covered.reserve(d.match.covered_events.size());
            for (const auto& id : d.match.covered_events) {
                auto it = by_id.find(id);
                if (it == by_id.end())
                    throw AssemblyError("covered event " + id + " is not in the simple log");
                covered.push_back(*it->second);
            }

            Oclpm model;
            model.net = d.lpm.net;
            model.provenance = d.lpm.place_provenance;
            model.variable_arcs = identify_variable_arcs(d.lpm, annotation.place_types, covered,
                                                         cfg.var_arc_threshold, &result.warnings);
            model.place_types = std::move(annotation.place_types);
            model.score.support = d.match.support;
            model.score.coverage =
                events == 0 ? 0.0
                            : static_cast<double>(covered.size()) / static_cast<double>(events);
            model.score.quality =
                model_quality(d.match.support, covered.size(), traces, events);
            model.check();
            std::string canonical = canonical_form(model);
            built.push_back({std::move(model), std::move(canonical)});
        } catch (const std::exception& e) {
            result.errors.push_back(e.what());
        }
    }

    std::sort(built.begin(), built.end(), [](const Entry& a, const Entry& b) {
        if (a.model.score.quality != b.model.score.quality)
            return a.model.score.quality > b.model.score.quality;
        if (a.model.net.transitions.size() != b.model.net.transitions.size())
            return a.model.net.transitions.size() > b.model.net.transitions.size();
        return a.canonical < b.canonical;
    });
    std::set<std::string> seen;
    for (auto& entry : built) {
        if (!seen.insert(entry.canonical).second) continue;
        entry.model.score.rank = result.models.size() + 1;
        result.models.push_back(std::move(entry.model));
    }
    return result;
}

}  // namespace oclpm
