#include "oclpm/ocel.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace oclpm {

namespace {

const std::vector<std::string> kNoObjects;

// mt19937_64 output is fixed by the standard; std distributions are not.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);
}

}  // namespace

const std::vector<std::string>& Event::objects(const std::string& type) const {
    auto it = omap.find(type);
    return it == omap.end() ? kNoObjects : it->second;
}

std::size_t Event::object_count() const {
    std::size_t n = 0;
    for (const auto& [type, ids] : omap) n += ids.size();
    return n;
}

bool precedes(const Event& a, const Event& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.id < b.id;
}

EventLog::EventLog(std::vector<Event> events, std::map<std::string, ObjectInfo> objects,
                   std::set<std::string> object_types,
                   std::optional<std::vector<OrderPair>> explicit_order)
    : events_(std::move(events)),
      objects_(std::move(objects)),
      object_types_(std::move(object_types)),
      order_(std::move(explicit_order)) {
    std::stable_sort(events_.begin(), events_.end(), precedes);
    for (auto& e : events_) {
        for (auto& [type, ids] : e.omap) {
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        }
    }
    for (const auto& [id, info] : objects_) object_types_.insert(info.type);
    index_.reserve(events_.size());
    for (std::size_t i = 0; i < events_.size(); ++i) index_.emplace(events_[i].id, i);
}

const Event* EventLog::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &events_[it->second];
}

std::optional<std::string> EventLog::object_type(const std::string& object_id) const {
    auto it = objects_.find(object_id);
    if (it == objects_.end()) return std::nullopt;
    return it->second.type;
}

std::set<std::string> SimpleEventLog::activity_alphabet() const {
    std::set<std::string> out;
    for (const auto& t : traces)
        for (const auto& e : t.events) out.insert(e.activity);
    return out;
}

std::size_t SimpleEventLog::event_occurrences() const {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.events.size();
    return n;
}

std::vector<Violation> validate_log(const EventLog& log) {
    std::vector<Violation> out;

    std::map<std::string, std::size_t> id_counts;
    for (const auto& e : log.events()) {
        if (e.id.empty()) out.push_back({Invariant::EmptyEventId, "empty event id", {}});
        ++id_counts[e.id];
    }
    for (const auto& [id, n] : id_counts) {
        if (n > 1 && !id.empty())
            out.push_back({Invariant::DuplicateEventId, "duplicate event id " + id, {id}});
    }

    for (const auto& [oid, info] : log.objects()) {
        if (!log.object_types().contains(info.type))
            out.push_back({Invariant::UnknownObjectType,
                           "object " + oid + " has undeclared type " + info.type, {oid}});
    }

    for (const auto& e : log.events()) {
        for (const auto& [type, ids] : e.omap) {
            if (ids.empty()) {
                out.push_back({Invariant::EmptyObjectSet,
                               "event " + e.id + " lists type " + type + " without objects",
                               {e.id}});
            }
            for (const auto& oid : ids) {
                auto declared = log.object_type(oid);
                if (!declared) {
                    out.push_back({Invariant::UnknownObject,
                                   "event " + e.id + " references undeclared object " + oid,
                                   {e.id, oid}});
                } else if (*declared != type) {
                    out.push_back({Invariant::ObjectTypeMismatch,
                                   "object " + oid + " appears as " + type + " in event " + e.id +
                                       " but is declared as " + *declared,
                                   {e.id, oid}});
                }
            }
        }
    }

    if (const auto& order = log.explicit_order()) {
        std::set<EventLog::OrderPair> pairs;
        for (const auto& [a, b] : *order) {
            const Event* ea = log.find(a);
            const Event* eb = log.find(b);
            if (!ea || !eb) {
                out.push_back({Invariant::OrderUnknownEvent,
                               "order relation mentions unknown event " + (ea ? b : a), {a, b}});
                continue;
            }
            if (a == b) continue;  // reflexive pairs are implied
            pairs.emplace(a, b);
            if (ea->timestamp > eb->timestamp)
                out.push_back({Invariant::OrderTimestampInconsistency,
                               "order/timestamp inconsistency: " + a + " precedes " + b +
                                   " but has a later timestamp",
                               {a, b}});
        }
        std::map<std::string, std::vector<std::string>> succ;
        for (const auto& [a, b] : pairs) succ[a].push_back(b);
        for (const auto& [a, b] : pairs) {
            if (a < b && pairs.contains({b, a}))
                out.push_back({Invariant::OrderNotAntisymmetric,
                               "order is not antisymmetric on " + a + " and " + b, {a, b}});
            auto it = succ.find(b);
            if (it == succ.end()) continue;
            for (const auto& c : it->second) {
                if (c != a && !pairs.contains({a, c}))
                    out.push_back({Invariant::OrderNotTransitive,
                                   "order is not transitive: " + a + " <= " + b + " <= " + c,
                                   {a, b, c}});
            }
        }
    }
    return out;
}

EventLog generate_order_log(std::size_t orders, std::size_t max_items_per_order,
                            std::uint64_t seed) {
    if (orders == 0) throw std::invalid_argument("generate_order_log: orders must be >= 1");
    if (max_items_per_order == 0)
        throw std::invalid_argument("generate_order_log: maxItemsPerOrder must be >= 1");

    std::mt19937_64 rng(seed);
    std::vector<Event> events;
    std::map<std::string, ObjectInfo> objects;
    Timestamp clock{std::chrono::milliseconds{1'577'836'800'000}};  // 2020-01-01T00:00:00Z
    std::size_t next_event = 1;
    std::size_t next_item = 1;

    auto emit = [&](std::string activity, ObjectMap omap) {
        clock += std::chrono::minutes{draw(rng, 1, 90)};
        events.push_back(Event{"e" + std::to_string(next_event++), std::move(activity), clock,
                               std::move(omap), {}});
    };

    for (std::size_t o = 1; o <= orders; ++o) {
        const std::string order = "o" + std::to_string(o);
        const std::string package = "pk" + std::to_string(o);
        objects[order] = {"order", {}};
        objects[package] = {"package", {}};

        const auto k = static_cast<std::size_t>(draw(rng, 1, max_items_per_order));
        std::vector<std::string> items;
        for (std::size_t i = 0; i < k; ++i) {
            items.push_back("i" + std::to_string(next_item++));
            objects[items.back()] = {"item", {}};
        }
        emit("Place order", {{"order", {order}}, {"item", items}});

        // Random interleaving of the per-item (Pick, Pack) pairs.
        std::vector<int> stage(k, 0);
        std::size_t remaining = 2 * k;
        while (remaining > 0) {
            std::vector<std::size_t> open;
            for (std::size_t i = 0; i < k; ++i)
                if (stage[i] < 2) open.push_back(i);
            const std::size_t pick = open[draw(rng, 0, open.size() - 1)];
            emit(stage[pick] == 0 ? "Pick item" : "Pack item",
                 {{"item", {items[pick]}}, {"package", {package}}});
            ++stage[pick];
            --remaining;
        }
        emit("Send package", {{"package", {package}}, {"order", {order}}});
    }
    return EventLog(std::move(events), std::move(objects), {"order", "item", "package"});
}

EventLog generate_order_management_log(std::size_t orders, std::uint64_t seed) {
    if (orders == 0)
        throw std::invalid_argument("generate_order_management_log: orders must be >= 1");

    std::mt19937_64 rng(seed);
    const std::size_t customers = std::max<std::size_t>(1, orders / 8);
    const std::size_t products = 25;

    std::map<std::string, ObjectInfo> objects;
    for (std::size_t c = 1; c <= customers; ++c)
        objects["c" + std::to_string(c)] = {"customer", {}};
    for (std::size_t p = 1; p <= products; ++p)
        objects["pr" + std::to_string(p)] = {"product", {}};

    struct Pending {
        Timestamp at;
        std::string activity;
        ObjectMap omap;
    };
    std::vector<Pending> pending;
    std::size_t next_item = 1;
    Timestamp start{std::chrono::milliseconds{1'577'836'800'000}};

    for (std::size_t o = 1; o <= orders; ++o) {
        const std::string order = "o" + std::to_string(o);
        const std::string package = "pk" + std::to_string(o);
        const std::string customer = "c" + std::to_string(draw(rng, 1, customers));
        objects[order] = {"order", {}};
        objects[package] = {"package", {}};

        const auto k = static_cast<std::size_t>(draw(rng, 1, 4));
        std::vector<std::string> items;
        std::vector<std::string> item_products;
        for (std::size_t i = 0; i < k; ++i) {
            items.push_back("i" + std::to_string(next_item++));
            objects[items.back()] = {"item", {}};
            item_products.push_back("pr" + std::to_string(draw(rng, 1, products)));
        }
        std::vector<std::string> order_products = item_products;
        std::sort(order_products.begin(), order_products.end());
        order_products.erase(std::unique(order_products.begin(), order_products.end()),
                             order_products.end());

        // Orders start every ~20 minutes and run for hours, so executions overlap in time.
        start += std::chrono::minutes{draw(rng, 5, 35)};
        Timestamp t = start;
        auto at = [&](std::string activity, ObjectMap omap) {
            t += std::chrono::minutes{draw(rng, 10, 120)};
            pending.push_back({t, std::move(activity), std::move(omap)});
        };

        at("Place order", {{"order", {order}}, {"customer", {customer}}, {"item", items},
                           {"product", order_products}});
        at("Confirm order", {{"order", {order}}});
        for (std::size_t i = 0; i < k; ++i)
            at("Pick item", {{"item", {items[i]}}, {"product", {item_products[i]}}});
        at("Create package", {{"package", {package}}, {"item", items}});
        at("Send package", {{"package", {package}}});
        if (draw(rng, 0, 4) == 0) {
            at("Failed delivery", {{"package", {package}}});
            at("Send package", {{"package", {package}}});
        }
        at("Package delivered", {{"package", {package}}});
        if (draw(rng, 0, 2) == 0) at("Payment reminder", {{"order", {order}}});
        at("Pay order", {{"order", {order}}});
    }

    std::stable_sort(pending.begin(), pending.end(),
                     [](const Pending& a, const Pending& b) { return a.at < b.at; });
    std::vector<Event> events;
    events.reserve(pending.size());
    for (auto& p : pending) {
        events.push_back(Event{"e" + std::to_string(events.size() + 1), std::move(p.activity),
                               p.at, std::move(p.omap), {}});
    }
    return EventLog(std::move(events), std::move(objects),
                    {"order", "item", "package", "customer", "product"});
}

}  // namespace oclpm
