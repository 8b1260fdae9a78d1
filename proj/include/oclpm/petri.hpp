#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace oclpm {

struct Arc {
    std::string source;
    std::string target;

    friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// (P, T, F, l). A transition mapped to std::nullopt is silent.
struct LabeledPetriNet {
    std::set<std::string> places;
    std::set<std::string> transitions;
    std::set<Arc> arcs;
    std::map<std::string, std::optional<std::string>> labels;

    /// Throws std::invalid_argument if places and transitions overlap, an arc
    /// endpoint is unknown, an arc is not bipartite, or a transition lacks a label entry.
    void check() const;

    std::set<std::string> preset(const std::string& node) const;
    std::set<std::string> postset(const std::string& node) const;
    /// Transition carrying `label`, assuming labels are injective.
    std::optional<std::string> transition_for(const std::string& label) const;

    friend bool operator==(const LabeledPetriNet&, const LabeledPetriNet&) = default;
};

/// A single place with input and output activity sets, tagged with the object
/// type whose flattened log it was discovered on.
struct PlaceNet {
    std::set<std::string> inputs;
    std::set<std::string> outputs;
    std::string origin_type;

    /// The denoted net: place "p", one transition per label (ids "t0", "t1", ...
    /// in label order), arcs t->p for inputs and p->t for outputs.
    LabeledPetriNet net() const;
    /// "(inputs|outputs|type|)" with JSON-quoted labels.
    std::string descriptor() const;

    friend auto operator<=>(const PlaceNet&, const PlaceNet&) = default;
};

struct ReplayVerdict {
    bool fits = true;
    std::optional<std::size_t> underfed_at;
    std::size_t overfed_count = 0;
};

/// Token replay of a trace already projected onto the place's activities.
/// An event whose label is both input and output consumes before producing.
ReplayVerdict replay_trace(const PlaceNet& place, std::span<const std::string> trace);
/// Same, for a single-place net. Throws std::invalid_argument otherwise.
ReplayVerdict replay_trace(const LabeledPetriNet& net, std::span<const std::string> trace);

/// The single-place sub-net around `place`: the transitions adjacent to it,
/// the arcs touching it, and their labels. Throws std::invalid_argument for
/// an unknown place.
LabeledPetriNet project_place(const LabeledPetriNet& net, const std::string& place);

/// Label isomorphism for label-injective nets: same labelled transitions and
/// the same multiset of places described by (pre-labels, post-labels).
bool label_isomorphic(const LabeledPetriNet& a, const LabeledPetriNet& b);

/// A local process model: a label-injective net whose places each come from a place net.
struct Lpm {
    LabeledPetriNet net;
    std::map<std::string, PlaceNet> place_provenance;

    /// Merges place nets on equal labels. Places are "p0", "p1", ... in
    /// descriptor order; transitions "t0", "t1", ... in label order.
    static Lpm from_place_nets(std::vector<PlaceNet> places);

    std::size_t place_count() const { return net.places.size(); }
    std::size_t transition_count() const { return net.transitions.size(); }
    std::set<std::string> activities() const;
};

struct ModelScore {
    std::size_t support = 0;
    double coverage = 0.0;
    double quality = 0.0;  // ranking score
    std::size_t rank = 0;  // 1-based position in the ranked output
};

/// Object-centric LPM: a net plus place typing and variable arcs.
struct Oclpm {
    LabeledPetriNet net;
    std::map<std::string, std::string> place_types;
    std::set<Arc> variable_arcs;
    std::map<std::string, PlaceNet> provenance;
    ModelScore score;

    /// Throws std::invalid_argument when variable arcs are not net arcs or the
    /// typing is not total and consistent with provenance.
    void check() const;
};

/// Order-free string identifying a model up to place and transition renaming.
/// Each place contributes "(inputs|outputs|type|variable flags)".
std::string canonical_form(const LabeledPetriNet& net,
                           const std::map<std::string, std::string>& place_types,
                           const std::set<Arc>& variable_arcs);
std::string canonical_form(const Lpm& lpm);
std::string canonical_form(const Oclpm& model);

}  // namespace oclpm
