#include "oclpm/petri.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace oclpm {

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::string join_quoted(const std::set<std::string>& labels) {
    std::string out;
    for (const auto& l : labels) {
        if (!out.empty()) out += ',';
        out += quote(l);
    }
    return out;
}

std::string label_of(const LabeledPetriNet& net, const std::string& t) {
    auto it = net.labels.find(t);
    if (it == net.labels.end() || !it->second) return "\x01tau";
    return *it->second;
}

struct PlaceSignature {
    std::set<std::string> in;   // labels of transitions producing into the place
    std::set<std::string> out;  // labels of transitions consuming from the place
    friend auto operator<=>(const PlaceSignature&, const PlaceSignature&) = default;
};

PlaceSignature signature(const LabeledPetriNet& net, const std::string& p) {
    PlaceSignature sig;
    for (const auto& t : net.preset(p)) sig.in.insert(label_of(net, t));
    for (const auto& t : net.postset(p)) sig.out.insert(label_of(net, t));
    return sig;
}

}  // namespace

void LabeledPetriNet::check() const {
    for (const auto& p : places)
        if (transitions.contains(p))
            throw std::invalid_argument("node " + p + " is both a place and a transition");
    for (const auto& a : arcs) {
        const bool pt = places.contains(a.source) && transitions.contains(a.target);
        const bool tp = transitions.contains(a.source) && places.contains(a.target);
        if (!pt && !tp)
            throw std::invalid_argument("arc " + a.source + " -> " + a.target +
                                        " does not connect a place and a transition");
    }
    for (const auto& t : transitions)
        if (!labels.contains(t)) throw std::invalid_argument("transition " + t + " has no label");
}

std::set<std::string> LabeledPetriNet::preset(const std::string& node) const {
    std::set<std::string> out;
    for (const auto& a : arcs)
        if (a.target == node) out.insert(a.source);
    return out;
}

std::set<std::string> LabeledPetriNet::postset(const std::string& node) const {
    std::set<std::string> out;
    for (const auto& a : arcs)
        if (a.source == node) out.insert(a.target);
    return out;
}

std::optional<std::string> LabeledPetriNet::transition_for(const std::string& label) const {
    for (const auto& [t, l] : labels)
        if (l && *l == label) return t;
    return std::nullopt;
}

LabeledPetriNet PlaceNet::net() const {
    LabeledPetriNet n;
    n.places.insert("p");
    std::set<std::string> all = inputs;
    all.insert(outputs.begin(), outputs.end());
    std::size_t i = 0;
    for (const auto& label : all) {
        const std::string t = "t" + std::to_string(i++);
        n.transitions.insert(t);
        n.labels[t] = label;
        if (inputs.contains(label)) n.arcs.insert({t, "p"});
        if (outputs.contains(label)) n.arcs.insert({"p", t});
    }
    return n;
}

std::string PlaceNet::descriptor() const {
    return "(" + join_quoted(inputs) + "|" + join_quoted(outputs) + "|" + quote(origin_type) + "|)";
}

ReplayVerdict replay_trace(const PlaceNet& place, std::span<const std::string> trace) {
    ReplayVerdict v;
    long tokens = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const bool consumes = place.outputs.contains(trace[i]);
        const bool produces = place.inputs.contains(trace[i]);
        if (consumes) {
            if (tokens <= 0 && !v.underfed_at) v.underfed_at = i;
            --tokens;
        }
        if (produces) ++tokens;
    }
    v.overfed_count = tokens > 0 ? static_cast<std::size_t>(tokens) : 0;
    v.fits = !v.underfed_at && tokens == 0;
    return v;
}

ReplayVerdict replay_trace(const LabeledPetriNet& net, std::span<const std::string> trace) {
    if (net.places.size() != 1)
        throw std::invalid_argument("replay_trace expects a single-place net");
    const auto& p = *net.places.begin();
    PlaceNet place;
    for (const auto& t : net.preset(p)) place.inputs.insert(label_of(net, t));
    for (const auto& t : net.postset(p)) place.outputs.insert(label_of(net, t));
    return replay_trace(place, trace);
}

LabeledPetriNet project_place(const LabeledPetriNet& net, const std::string& place) {
    if (!net.places.contains(place))
        throw std::invalid_argument("unknown place '" + place + "'");
    LabeledPetriNet out;
    out.places.insert(place);
    for (const auto& a : net.arcs) {
        if (a.source == place || a.target == place) {
            out.arcs.insert(a);
            const auto& t = a.source == place ? a.target : a.source;
            out.transitions.insert(t);
            out.labels[t] = net.labels.at(t);
        }
    }
    return out;
}

bool label_isomorphic(const LabeledPetriNet& a, const LabeledPetriNet& b) {
    if (a.places.size() != b.places.size() || a.transitions.size() != b.transitions.size())
        return false;
    std::multiset<std::string> la, lb;
    for (const auto& t : a.transitions) la.insert(label_of(a, t));
    for (const auto& t : b.transitions) lb.insert(label_of(b, t));
    if (la != lb) return false;
    std::multiset<PlaceSignature> sa, sb;
    for (const auto& p : a.places) sa.insert(signature(a, p));
    for (const auto& p : b.places) sb.insert(signature(b, p));
    return sa == sb;
}

Lpm Lpm::from_place_nets(std::vector<PlaceNet> places) {
    std::sort(places.begin(), places.end(), [](const PlaceNet& x, const PlaceNet& y) {
        return x.descriptor() < y.descriptor();
    });
    std::set<std::string> labels;
    for (const auto& pn : places) {
        labels.insert(pn.inputs.begin(), pn.inputs.end());
        labels.insert(pn.outputs.begin(), pn.outputs.end());
    }
    Lpm lpm;
    std::map<std::string, std::string> tid;
    std::size_t i = 0;
    for (const auto& label : labels) {
        const std::string t = "t" + std::to_string(i++);
        tid[label] = t;
        lpm.net.transitions.insert(t);
        lpm.net.labels[t] = label;
    }
    for (std::size_t k = 0; k < places.size(); ++k) {
        const std::string p = "p" + std::to_string(k);
        lpm.net.places.insert(p);
        for (const auto& l : places[k].inputs) lpm.net.arcs.insert({tid[l], p});
        for (const auto& l : places[k].outputs) lpm.net.arcs.insert({p, tid[l]});
        lpm.place_provenance.emplace(p, std::move(places[k]));
    }
    return lpm;
}

std::set<std::string> Lpm::activities() const {
    std::set<std::string> out;
    for (const auto& [t, l] : net.labels)
        if (l) out.insert(*l);
    return out;
}

void Oclpm::check() const {
    net.check();
    for (const auto& a : variable_arcs)
        if (!net.arcs.contains(a))
            throw std::invalid_argument("variable arc " + a.source + " -> " + a.target +
                                        " is not an arc of the net");
    for (const auto& p : net.places) {
        auto t = place_types.find(p);
        if (t == place_types.end()) throw std::invalid_argument("place " + p + " has no type");
        auto prov = provenance.find(p);
        if (prov != provenance.end() && prov->second.origin_type != t->second)
            throw std::invalid_argument("place " + p + " type disagrees with its provenance");
    }
}

std::string canonical_form(const LabeledPetriNet& net,
                           const std::map<std::string, std::string>& place_types,
                           const std::set<Arc>& variable_arcs) {
    std::vector<std::string> descriptors;
    std::set<std::string> attached;
    for (const auto& p : net.places) {
        const auto sig = signature(net, p);
        std::set<std::string> flags;
        for (const auto& a : net.arcs) {
            if (!variable_arcs.contains(a)) continue;
            if (a.target == p) flags.insert("in:" + label_of(net, a.source));
            if (a.source == p) flags.insert("out:" + label_of(net, a.target));
        }
        auto type = place_types.find(p);
        descriptors.push_back("(" + join_quoted(sig.in) + "|" + join_quoted(sig.out) + "|" +
                              quote(type == place_types.end() ? std::string{} : type->second) +
                              "|" + join_quoted(flags) + ")");
        attached.insert(sig.in.begin(), sig.in.end());
        attached.insert(sig.out.begin(), sig.out.end());
    }
    std::sort(descriptors.begin(), descriptors.end());
    std::string out;
    for (const auto& d : descriptors) out += d;
    std::set<std::string> loose;
    for (const auto& t : net.transitions)
        if (!attached.contains(label_of(net, t))) loose.insert(label_of(net, t));
    if (!loose.empty()) out += "{" + join_quoted(loose) + "}";
    return out;
}

std::string canonical_form(const Lpm& lpm) {
    std::map<std::string, std::string> types;
    for (const auto& [p, pn] : lpm.place_provenance) types[p] = pn.origin_type;
    return canonical_form(lpm.net, types, {});
}

std::string canonical_form(const Oclpm& model) {
    return canonical_form(model.net, model.place_types, model.variable_arcs);
}

}  // namespace oclpm
