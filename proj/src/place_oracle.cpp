#include "oclpm/place_oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "oclpm/parallel.hpp"

namespace oclpm {

namespace {

using Bits = std::vector<std::uint64_t>;

/// Trace variants over the frequent activities, with multiplicities.
struct VariantTable {
    std::vector<std::string> activities;  // frequent activities, sorted
    std::vector<std::vector<int>> variants;
    std::vector<std::size_t> multiplicity;
    std::size_t trace_count = 0;
};

VariantTable build_variants(const SimpleEventLog& slog, double min_frequency) {
    VariantTable vt;
    vt.trace_count = slog.traces.size();

    std::map<std::string, std::size_t> containing;
    for (const auto& t : slog.traces) {
        std::set<std::string> seen;
        for (const auto& e : t.events) seen.insert(e.activity);
        for (const auto& a : seen) ++containing[a];
    }
    std::unordered_map<std::string, int> code;
    for (const auto& [a, n] : containing) {
        if (static_cast<double>(n) >= min_frequency * static_cast<double>(vt.trace_count)) {
            code.emplace(a, static_cast<int>(vt.activities.size()));
            vt.activities.push_back(a);
        }
    }

    std::map<std::vector<int>, std::size_t> counts;
    for (const auto& t : slog.traces) {
        std::vector<int> v;
        for (const auto& e : t.events)
            if (auto it = code.find(e.activity); it != code.end()) v.push_back(it->second);
        ++counts[std::move(v)];
    }
    for (auto& [v, n] : counts) {
        vt.variants.push_back(v);
        vt.multiplicity.push_back(n);
    }
    return vt;
}

/// All non-empty subsets of {0..n-1} up to size k, in lexicographic order.
std::vector<std::vector<int>> subsets_up_to(int n, std::size_t k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto& self, int start) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (cur.size() == k) return;
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

struct Candidate {
    const std::vector<int>* inputs;
    const std::vector<int>* outputs;
    bool accepted = false;
    std::size_t fitting = 0;
    Bits fit_variants;
};

bool fits(const std::vector<int>& trace, const std::vector<std::uint8_t>& role) {
    long tokens = 0;
    for (int a : trace) {
        const auto r = role[a];
        if (r & 2) {
            if (tokens == 0) return false;
            --tokens;
        }
        if (r & 1) ++tokens;
    }
    return tokens == 0;
}

bool includes(const std::vector<int>& super, const std::vector<int>& sub) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace

void OracleConfig::check() const {
    if (max_io_set_size < 1) throw std::invalid_argument("max IO set size must be >= 1");
    if (!(fitness_threshold >= 0.0 && fitness_threshold <= 1.0))
        throw std::invalid_argument("fitness threshold must lie in [0, 1]");
    if (!(min_activity_frequency >= 0.0 && min_activity_frequency <= 1.0))
        throw std::invalid_argument("minimum activity frequency must lie in [0, 1]");
    if (max_places_per_type < 1) throw std::invalid_argument("max places per type must be >= 1");
}

double fitting_fraction(const PlaceNet& place, const SimpleEventLog& slog) {
    if (slog.traces.empty()) return 0.0;
    std::size_t fitting = 0;
    std::vector<std::string> projected;
    for (const auto& t : slog.traces) {
        projected.clear();
        for (const auto& e : t.events)
            if (place.inputs.contains(e.activity) || place.outputs.contains(e.activity))
                projected.push_back(e.activity);
        if (replay_trace(place, projected).fits) ++fitting;
    }
    return static_cast<double>(fitting) / static_cast<double>(slog.traces.size());
}

std::vector<PlaceNet> discover_place_nets(const SimpleEventLog& slog, const std::string& type,
                                          const OracleConfig& cfg) {
    cfg.check();
    if (slog.traces.empty()) return {};

    const VariantTable vt = build_variants(slog, cfg.min_activity_frequency);
    const int n_act = static_cast<int>(vt.activities.size());
    if (n_act == 0) return {};
    const auto sets = subsets_up_to(n_act, cfg.max_io_set_size);

    std::vector<bool> activity_present(n_act, false);
    for (std::size_t v = 0; v < vt.variants.size(); ++v)
        for (int a : vt.variants[v]) activity_present[a] = true;

    std::vector<Candidate> cands;
    cands.reserve(sets.size() * sets.size());
    for (const auto& in : sets)
        for (const auto& out : sets) cands.push_back({&in, &out});

    const std::size_t words = (vt.variants.size() + 63) / 64;

    parallel_for(cands.size(), cfg.threads, [&](std::size_t i) {
        Candidate& c = cands[i];
        bool activated = false;
        for (int a : *c.inputs) activated = activated || activity_present[a];
        if (!activated) return;

        std::vector<std::uint8_t> role(n_act, 0);
        for (int a : *c.inputs) role[a] |= 1;
        for (int a : *c.outputs) role[a] |= 2;
        c.fit_variants.assign(words, 0);
        for (std::size_t v = 0; v < vt.variants.size(); ++v) {
            if (fits(vt.variants[v], role)) {
                c.fitting += vt.multiplicity[v];
                c.fit_variants[v / 64] |= std::uint64_t{1} << (v % 64);
            }
        }
        c.accepted = static_cast<double>(c.fitting) / static_cast<double>(vt.trace_count) >=
                     cfg.fitness_threshold;
        if (!c.accepted) c.fit_variants.clear();
    });

    // Subsumption: among candidates with identical fitting traces, keep only
    // those without a strictly smaller (inputs, outputs) companion.
    std::map<Bits, std::vector<std::size_t>> by_fitset;
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (cands[i].accepted) by_fitset[cands[i].fit_variants].push_back(i);

    std::vector<PlaceNet> out;
    std::vector<std::size_t> fitting;
    for (const auto& [bits, members] : by_fitset) {
        for (auto i : members) {
            const Candidate& c = cands[i];
            bool subsumed = false;
            for (auto j : members) {
                if (j == i) continue;
                const Candidate& d = cands[j];
                if (includes(*c.inputs, *d.inputs) && includes(*c.outputs, *d.outputs)) {
                    subsumed = true;
                    break;
                }
            }
            if (subsumed) continue;
            PlaceNet pn;
            for (int a : *c.inputs) pn.inputs.insert(vt.activities[a]);
            for (int a : *c.outputs) pn.outputs.insert(vt.activities[a]);
            pn.origin_type = type;
            out.push_back(std::move(pn));
            fitting.push_back(c.fitting);
        }
    }

    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::string> descriptors;
    descriptors.reserve(out.size());
    for (const auto& pn : out) descriptors.push_back(pn.descriptor());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (fitting[a] != fitting[b]) return fitting[a] > fitting[b];
        return descriptors[a] < descriptors[b];
    });
    std::vector<PlaceNet> ranked;
    for (std::size_t k = 0; k < order.size() && k < cfg.max_places_per_type; ++k)
        ranked.push_back(std::move(out[order[k]]));
    return ranked;
}

}  // namespace oclpm
