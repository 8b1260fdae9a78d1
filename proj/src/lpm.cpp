#include "oclpm/lpm.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "oclpm/parallel.hpp"

namespace oclpm {

namespace {

/// Activity labels interned to dense codes.
class LabelTable {
public:
    int code(const std::string& label) {
        auto [it, inserted] = codes_.try_emplace(label, static_cast<int>(codes_.size()));
        return it->second;
    }
    int find(const std::string& label) const {
        auto it = codes_.find(label);
        return it == codes_.end() ? -1 : it->second;
    }
    std::size_t size() const { return codes_.size(); }

private:
    std::unordered_map<std::string, int> codes_;
};

/// Integer form of a simple log: label codes and interned event numbers per trace.
struct EncodedLog {
    std::vector<std::vector<int>> labels;
    std::vector<std::vector<std::uint32_t>> events;
    std::vector<std::string> event_ids;
    // label code -> every (trace, position) carrying it
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> positions;

    EncodedLog(const SimpleEventLog& slog, LabelTable& table) {
        std::unordered_map<std::string, std::uint32_t> numbers;
        labels.reserve(slog.traces.size());
        events.reserve(slog.traces.size());
        for (const auto& t : slog.traces) {
            auto& ls = labels.emplace_back();
            auto& es = events.emplace_back();
            ls.reserve(t.events.size());
            es.reserve(t.events.size());
            for (const auto& e : t.events) {
                ls.push_back(table.code(e.activity));
                auto [it, inserted] =
                    numbers.try_emplace(e.id, static_cast<std::uint32_t>(event_ids.size()));
                if (inserted) event_ids.push_back(e.id);
                es.push_back(it->second);
            }
        }
    }

    void index_positions(std::size_t label_count) {
        positions.assign(label_count, {});
        for (std::uint32_t t = 0; t < labels.size(); ++t)
            for (std::uint32_t i = 0; i < labels[t].size(); ++i)
                positions[labels[t][i]].emplace_back(t, i);
    }
};

/// A label-injective net in integer form, ready for window matching.
class CompiledLpm {
public:
    static constexpr int kAbsent = -1;

    /// places: per place, (input label codes, output label codes).
    CompiledLpm(const std::vector<std::pair<std::vector<int>, std::vector<int>>>& places,
                std::size_t label_count)
        : transition_of_(label_count, kAbsent), place_count_(places.size()) {
        std::vector<int> labels;
        for (const auto& [in, out] : places) {
            labels.insert(labels.end(), in.begin(), in.end());
            labels.insert(labels.end(), out.begin(), out.end());
        }
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        if (labels.size() > 64) throw std::invalid_argument("LPMs are limited to 64 transitions");
        labels_ = labels;
        for (std::size_t t = 0; t < labels.size(); ++t)
            transition_of_[labels[t]] = static_cast<int>(t);
        consume_.resize(labels.size());
        produce_.resize(labels.size());
        for (std::size_t p = 0; p < places.size(); ++p) {
            for (int l : places[p].first) produce_[transition_of_[l]].push_back(static_cast<int>(p));
            for (int l : places[p].second) consume_[transition_of_[l]].push_back(static_cast<int>(p));
        }
        all_fired_ = labels.size() == 64 ? ~std::uint64_t{0}
                                         : (std::uint64_t{1} << labels.size()) - 1;
    }

    std::size_t transition_count() const { return labels_.size(); }
    const std::vector<int>& labels() const { return labels_; }

    /// Transition for a label code, or kAbsent.
    int transition(int label) const {
        return label >= 0 && static_cast<std::size_t>(label) < transition_of_.size()
                   ? transition_of_[label]
                   : kAbsent;
    }

    /// A transition without input places is the only kind that can start an occurrence.
    bool can_start(int label) const {
        const int t = transition(label);
        return t != kAbsent && consume_[t].empty();
    }

    /// Matches the window [first, last) of label codes; fills `chosen` with
    /// offsets relative to `first`.
    bool match(const int* first, const int* last, std::vector<std::uint32_t>& chosen) const {
        chosen.clear();
        if (first == last || !can_start(*first)) return false;
        std::vector<int> marking(place_count_, 0);
        fire(transition(*first), marking);
        chosen.push_back(0);
        return search(first, static_cast<std::size_t>(last - first), marking,
                      std::uint64_t{1} << transition(*first), chosen);
    }

private:
    bool fireable(int t, const std::vector<int>& marking) const {
        for (int p : consume_[t])
            if (marking[p] == 0) return false;
        return true;
    }
    void fire(int t, std::vector<int>& marking) const {
        for (int p : consume_[t]) --marking[p];
        for (int p : produce_[t]) ++marking[p];
    }
    void unfire(int t, std::vector<int>& marking) const {
        for (int p : produce_[t]) --marking[p];
        for (int p : consume_[t]) ++marking[p];
    }

    // Preorder DFS visits subsequences in lexicographic order of positions,
    // so the first complete node is the earliest occurrence.
    bool search(const int* window, std::size_t length, std::vector<int>& marking,
                std::uint64_t fired, std::vector<std::uint32_t>& chosen) const {
        if (fired == all_fired_ &&
            std::all_of(marking.begin(), marking.end(), [](int m) { return m == 0; }))
            return true;
        for (std::size_t k = chosen.back() + 1; k < length; ++k) {
            const int t = transition(window[k]);
            if (t == kAbsent || !fireable(t, marking)) continue;
            fire(t, marking);
            chosen.push_back(static_cast<std::uint32_t>(k));
            if (search(window, length, marking, fired | (std::uint64_t{1} << t), chosen))
                return true;
            chosen.pop_back();
            unfire(t, marking);
        }
        return false;
    }

    std::vector<int> transition_of_;
    std::vector<int> labels_;
    std::vector<std::vector<int>> consume_;
    std::vector<std::vector<int>> produce_;
    std::size_t place_count_;
    std::uint64_t all_fired_ = 0;
};

std::vector<std::pair<std::vector<int>, std::vector<int>>> encode_places(
    const std::vector<const PlaceNet*>& places, LabelTable& table) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    for (const auto* pn : places) {
        auto& [in, o] = out.emplace_back();
        for (const auto& l : pn->inputs) in.push_back(table.code(l));
        for (const auto& l : pn->outputs) o.push_back(table.code(l));
    }
    return out;
}

/// Places of an Lpm as read from its net.
std::vector<PlaceNet> places_from_net(const Lpm& lpm) {
    std::vector<PlaceNet> out;
    for (const auto& p : lpm.net.places) {
        PlaceNet pn;
        for (const auto& t : lpm.net.preset(p))
            if (auto l = lpm.net.labels.at(t)) pn.inputs.insert(*l);
        for (const auto& t : lpm.net.postset(p))
            if (auto l = lpm.net.labels.at(t)) pn.outputs.insert(*l);
        out.push_back(std::move(pn));
    }
    return out;
}

struct Evaluation {
    std::size_t support = 0;
    std::size_t covered = 0;
};

/// Support and coverage count of one compiled model over the encoded log.
Evaluation evaluate(const CompiledLpm& model, const EncodedLog& log, std::size_t window,
                    MatchResult* detail) {
    Evaluation ev;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> anchors;
    for (int label : model.labels())
        if (model.can_start(label)) {
            const auto& pos = log.positions[label];
            anchors.insert(anchors.end(), pos.begin(), pos.end());
        }
    if (anchors.empty()) return ev;
    std::sort(anchors.begin(), anchors.end());

    std::vector<std::uint32_t> chosen;
    std::vector<std::uint32_t> covered;
    for (const auto& [t, i] : anchors) {
        const auto& labels = log.labels[t];
        const std::size_t end = std::min<std::size_t>(labels.size(), i + window);
        if (!model.match(labels.data() + i, labels.data() + end, chosen)) continue;
        ++ev.support;
        Occurrence occ;
        occ.trace = t;
        for (auto off : chosen) {
            const auto number = log.events[t][i + off];
            covered.push_back(number);
            if (detail) occ.events.push_back(log.event_ids[number]);
        }
        if (detail) detail->occurrences.push_back(std::move(occ));
    }
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    ev.covered = covered.size();
    if (detail) {
        detail->support = ev.support;
        for (auto n : covered) detail->covered_events.insert(log.event_ids[n]);
    }
    return ev;
}

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const {
        std::size_t h = 1469598103934665603ull;
        for (auto v : key) h = (h ^ v) * 1099511628211ull;
        return h;
    }
};

bool ranks_before(double qa, std::size_t ta, const std::string& ca, double qb, std::size_t tb,
                  const std::string& cb) {
    if (qa != qb) return qa > qb;
    if (ta != tb) return ta > tb;
    return ca < cb;
}

}  // namespace

void DiscoveryConfig::check() const {
    if (min_places < 1 || min_places > max_places)
        throw std::invalid_argument("place bounds must satisfy 1 <= min <= max");
    if (min_transitions > max_transitions)
        throw std::invalid_argument("transition bounds must satisfy min <= max");
    if (max_transitions > 64) throw std::invalid_argument("at most 64 transitions are supported");
    if (window < 2) throw std::invalid_argument("window size must be >= 2");
    if (!(var_arc_threshold >= 0.0 && var_arc_threshold <= 1.0))
        throw std::invalid_argument("variable arc threshold must lie in [0, 1]");
}

std::optional<std::vector<std::string>> match_window(const Lpm& lpm,
                                                     std::span<const Event> window) {
    LabelTable table;
    const auto derived = places_from_net(lpm);
    std::vector<const PlaceNet*> places;
    for (const auto& pn : derived) places.push_back(&pn);
    const auto encoded = encode_places(places, table);
    std::vector<int> labels;
    for (const auto& e : window) labels.push_back(table.find(e.activity));
    const CompiledLpm model(encoded, table.size());
    std::vector<std::uint32_t> chosen;
    if (!model.match(labels.data(), labels.data() + labels.size(), chosen)) return std::nullopt;
    std::vector<std::string> ids;
    for (auto k : chosen) ids.push_back(window[k].id);
    return ids;
}

MatchResult match_log(const Lpm& lpm, const SimpleEventLog& slog, std::size_t window) {
    LabelTable table;
    const auto derived = places_from_net(lpm);
    std::vector<const PlaceNet*> places;
    for (const auto& pn : derived) places.push_back(&pn);
    const auto encoded = encode_places(places, table);
    EncodedLog log(slog, table);
    log.index_positions(table.size());
    const CompiledLpm model(encoded, table.size());
    MatchResult result;
    evaluate(model, log, window, &result);
    return result;
}

double model_quality(std::size_t support, std::size_t covered, std::size_t traces,
                     std::size_t events) {
    const double s = traces == 0 ? 0.0
                                 : std::min(1.0, static_cast<double>(support) /
                                                     static_cast<double>(traces));
    const double c = events == 0 ? 0.0
                                 : static_cast<double>(covered) / static_cast<double>(events);
    return s + c == 0.0 ? 0.0 : 2.0 * s * c / (s + c);
}

std::size_t distinct_event_count(const SimpleEventLog& slog) {
    std::unordered_set<std::string> ids;
    for (const auto& t : slog.traces)
        for (const auto& e : t.events) ids.insert(e.id);
    return ids.size();
}

std::vector<DiscoveredLpm> rank_models(std::vector<DiscoveredLpm> results,
                                       const SimpleEventLog& slog) {
    const std::size_t traces = slog.traces.size();
    const std::size_t events = distinct_event_count(slog);
    std::vector<std::string> canon;
    for (auto& r : results) {
        r.quality = model_quality(r.match.support, r.match.covered_events.size(), traces, events);
        canon.push_back(canonical_form(r.lpm));
    }
    std::vector<std::size_t> order(results.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ranks_before(results[a].quality, results[a].lpm.transition_count(), canon[a],
                            results[b].quality, results[b].lpm.transition_count(), canon[b]);
    });
    std::vector<DiscoveredLpm> out;
    out.reserve(results.size());
    for (auto i : order) out.push_back(std::move(results[i]));
    return out;
}

std::vector<DiscoveredLpm> discover_lpms(const SimpleEventLog& slog,
                                         const std::vector<PlaceNet>& place_nets,
                                         const DiscoveryConfig& cfg) {
    cfg.check();

    std::vector<PlaceNet> pool(place_nets.begin(), place_nets.end());
    std::sort(pool.begin(), pool.end(),
              [](const PlaceNet& a, const PlaceNet& b) { return a.descriptor() < b.descriptor(); });
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.empty()) return {};

    LabelTable table;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> encoded;
    std::vector<std::vector<int>> pool_labels;
    for (const auto& pn : pool) {
        auto& [in, out] = encoded.emplace_back();
        for (const auto& l : pn.inputs) in.push_back(table.code(l));
        for (const auto& l : pn.outputs) out.push_back(table.code(l));
        auto& all = pool_labels.emplace_back(in);
        all.insert(all.end(), out.begin(), out.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
    }
    EncodedLog log(slog, table);
    log.index_positions(table.size());

    const std::size_t traces = slog.traces.size();
    const std::size_t events = log.event_ids.size();

    using Key = std::vector<std::uint32_t>;
    struct Node {
        Key key;
        std::vector<int> labels;
        Evaluation eval;
        bool survives = false;
    };

    auto evaluate_level = [&](std::vector<Node>& level) {
        parallel_for(level.size(), cfg.threads, [&](std::size_t i) {
            Node& node = level[i];
            std::vector<std::pair<std::vector<int>, std::vector<int>>> places;
            for (auto k : node.key) places.push_back(encoded[k]);
            const CompiledLpm model(places, table.size());
            node.eval = evaluate(model, log, cfg.window, nullptr);
            node.survives = node.eval.support >= cfg.min_occurrences;
        });
    };

    std::unordered_set<Key, KeyHash> seen;
    std::vector<Node> level;
    for (std::uint32_t i = 0; i < pool.size(); ++i) {
        if (pool_labels[i].size() > cfg.max_transitions) continue;
        seen.insert({i});
        level.push_back({{i}, pool_labels[i], {}, false});
    }

    struct Emitted {
        Key key;
        Evaluation eval;
        std::size_t transitions;
        double quality;
        std::string canonical;
    };
    std::vector<Emitted> emitted;

    for (std::size_t size = 1; !level.empty(); ++size) {
        evaluate_level(level);
        std::vector<Node> next;
        for (const auto& node : level) {
            if (!node.survives) continue;
            if (size >= cfg.min_places && node.labels.size() >= cfg.min_transitions) {
                emitted.push_back({node.key, node.eval, node.labels.size(),
                                   model_quality(node.eval.support, node.eval.covered, traces,
                                                 events),
                                   {}});
            }
            if (size >= cfg.max_places) continue;
            for (std::uint32_t j = 0; j < pool.size(); ++j) {
                if (std::binary_search(node.key.begin(), node.key.end(), j)) continue;
                const auto& lj = pool_labels[j];
                bool shares = false;
                for (int l : lj)
                    if (std::binary_search(node.labels.begin(), node.labels.end(), l)) {
                        shares = true;
                        break;
                    }
                if (!shares) continue;
                std::vector<int> labels;
                std::set_union(node.labels.begin(), node.labels.end(), lj.begin(), lj.end(),
                               std::back_inserter(labels));
                if (labels.size() > cfg.max_transitions) continue;
                Key key = node.key;
                key.insert(std::upper_bound(key.begin(), key.end(), j), j);
                if (!seen.insert(key).second) continue;
                next.push_back({std::move(key), std::move(labels), {}, false});
            }
        }
        std::sort(next.begin(), next.end(),
                  [](const Node& a, const Node& b) { return a.key < b.key; });
        level = std::move(next);
    }

    auto lpm_of = [&](const Key& key) {
        std::vector<PlaceNet> places;
        for (auto k : key) places.push_back(pool[k]);
        return Lpm::from_place_nets(std::move(places));
    };
    for (auto& e : emitted) e.canonical = canonical_form(lpm_of(e.key));
    std::sort(emitted.begin(), emitted.end(), [](const Emitted& a, const Emitted& b) {
        return ranks_before(a.quality, a.transitions, a.canonical, b.quality, b.transitions,
                            b.canonical);
    });
    if (emitted.size() > cfg.max_models) emitted.resize(cfg.max_models);

    std::vector<DiscoveredLpm> out(emitted.size());
    parallel_for(emitted.size(), cfg.threads, [&](std::size_t i) {
        out[i].lpm = lpm_of(emitted[i].key);
        std::vector<std::pair<std::vector<int>, std::vector<int>>> places;
        for (auto k : emitted[i].key) places.push_back(encoded[k]);
        const CompiledLpm model(places, table.size());
        evaluate(model, log, cfg.window, &out[i].match);
        out[i].quality = emitted[i].quality;
    });
    return out;
}

}  // namespace oclpm
