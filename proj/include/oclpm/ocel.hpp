#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace oclpm {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Scalar attribute value. Nested values are rejected by the parser.
using AttributeValue = std::variant<std::string, std::int64_t, double, bool>;
using AttributeMap = std::map<std::string, AttributeValue>;

/// Object type name -> sorted, duplicate-free object ids.
using ObjectMap = std::map<std::string, std::vector<std::string>>;

struct Event {
    std::string id;
    std::string activity;
    Timestamp timestamp{};
    ObjectMap omap;
    AttributeMap vmap;

    /// Objects of type `type`; empty when the type is absent.
    const std::vector<std::string>& objects(const std::string& type) const;
    std::size_t object_count() const;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Orders events by (timestamp, id), the tiebreak used everywhere in the library.
bool precedes(const Event& a, const Event& b);

struct ObjectInfo {
    std::string type;
    AttributeMap ovmap;

    friend bool operator==(const ObjectInfo&, const ObjectInfo&) = default;
};

/// An object-centric event log.
///
/// Events are kept sorted by (timestamp, id). The partial order is derived
/// from that sort unless an explicit relation is supplied; an explicit
/// relation is only checked by `validate_log`, never consulted elsewhere.
/// The log is immutable once constructed.
class EventLog {
public:
    using OrderPair = std::pair<std::string, std::string>;

    EventLog() = default;
    EventLog(std::vector<Event> events, std::map<std::string, ObjectInfo> objects,
             std::set<std::string> object_types = {},
             std::optional<std::vector<OrderPair>> explicit_order = std::nullopt);

    const std::vector<Event>& events() const { return events_; }
    const std::map<std::string, ObjectInfo>& objects() const { return objects_; }
    const std::set<std::string>& object_types() const { return object_types_; }
    const std::optional<std::vector<OrderPair>>& explicit_order() const { return order_; }

    /// Event with the given id, or nullptr. With duplicate ids the first in
    /// tiebreak order wins; `validate_log` reports the duplicate.
    const Event* find(const std::string& id) const;
    std::optional<std::string> object_type(const std::string& object_id) const;

    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    /// Structural equality: same events, objects, and types.
    friend bool operator==(const EventLog& a, const EventLog& b) {
        return a.events_ == b.events_ && a.objects_ == b.objects_ &&
               a.object_types_ == b.object_types_;
    }

private:
    std::vector<Event> events_;
    std::map<std::string, ObjectInfo> objects_;
    std::set<std::string> object_types_;
    std::optional<std::vector<OrderPair>> order_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct Trace {
    std::vector<Event> events;
    std::string case_object;
};

/// Totally ordered traces, as produced by flattening.
struct SimpleEventLog {
    std::vector<Trace> traces;

    std::set<std::string> activity_alphabet() const;
    std::size_t event_occurrences() const;
};

enum class Invariant {
    EmptyEventId,
    DuplicateEventId,
    EmptyObjectSet,
    UnknownObject,
    ObjectTypeMismatch,
    UnknownObjectType,
    OrderUnknownEvent,
    OrderNotAntisymmetric,
    OrderNotTransitive,
    OrderTimestampInconsistency,
};

struct Violation {
    Invariant invariant;
    std::string message;
    std::vector<std::string> ids;
};

/// Checks every EventLog invariant. Returns an empty list iff the log is well formed.
std::vector<Violation> validate_log(const EventLog& log);

/// Deterministic order-management fixture over {order, item, package}.
///
/// Each order gets one "Place order" event (order + 1..max items), then every
/// item gets "Pick item" followed by "Pack item" (both carrying the item and
/// the order's package), and the package gets one "Send package" (package +
/// order) after all its items are packed. Pick/pack pairs of one order are
/// randomly interleaved. Timestamps are strictly increasing. Throws
/// std::invalid_argument when a count is zero.
EventLog generate_order_log(std::size_t orders, std::size_t max_items_per_order,
                            std::uint64_t seed);

/// Larger fixture with five object types ({order, item, package, customer,
/// product}), used for scale runs. Customers and products are shared across
/// orders, so the interaction graph is mostly one component.
EventLog generate_order_management_log(std::size_t orders, std::uint64_t seed);

}  // namespace oclpm
