#include "oclpm/ocel_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace oclpm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace std::chrono;

bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
    if (pos + count > s.size()) return false;
    out = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const char c = s[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        out = out * 10 + (c - '0');
    }
    pos += count;
    return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) return false;
    ++pos;
    return true;
}

std::string describe_invalid(const std::vector<Violation>& violations) {
    std::string msg = "log failed validation";
    for (const auto& v : violations) msg += "; " + v.message;
    return msg;
}

AttributeMap read_attributes(const json& node, const std::string& owner,
                             std::vector<std::string>& warnings) {
    AttributeMap out;
    if (node.is_null()) return out;
    if (!node.is_object()) throw StructuralError(owner + ": attribute map is not a JSON object");
    for (const auto& [key, value] : node.items()) {
        switch (value.type()) {
        case json::value_t::string: out[key] = value.get<std::string>(); break;
        case json::value_t::boolean: out[key] = value.get<bool>(); break;
        case json::value_t::number_integer: out[key] = value.get<std::int64_t>(); break;
        case json::value_t::number_unsigned: {
            const auto u = value.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(INT64_MAX)) out[key] = static_cast<double>(u);
            else out[key] = static_cast<std::int64_t>(u);
            break;
        }
        case json::value_t::number_float: out[key] = value.get<double>(); break;
        case json::value_t::null:
            warnings.push_back(owner + ": attribute '" + key + "' is null and was dropped");
            break;
        default:
            throw StructuralError(owner + ": attribute '" + key + "' is not a scalar");
        }
    }
    return out;
}

template <typename Json>
Json write_attributes(const AttributeMap& attrs) {
    Json out = Json::object();
    for (const auto& [key, value] : attrs)
        std::visit([&](const auto& v) { out[key] = v; }, value);
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

InvalidLogError::InvalidLogError(std::vector<Violation> violations)
    : std::runtime_error(describe_invalid(violations)), violations_(std::move(violations)) {}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    std::size_t pos = 0;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!read_digits(s, pos, 4, y) || !expect(s, pos, '-') || !read_digits(s, pos, 2, mo) ||
        !expect(s, pos, '-') || !read_digits(s, pos, 2, d))
        return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;

    milliseconds frac{0};
    minutes offset{0};
    if (pos < s.size()) {
        if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
        ++pos;
        if (!read_digits(s, pos, 2, h) || !expect(s, pos, ':') || !read_digits(s, pos, 2, mi))
            return std::nullopt;
        if (pos < s.size() && s[pos] == ':') {
            ++pos;
            if (!read_digits(s, pos, 2, sec)) return std::nullopt;
            if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
                ++pos;
                int scale = 100;
                std::size_t digits = 0;
                long ms = 0;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                    ms += (s[pos] - '0') * scale;
                    scale /= 10;
                    ++pos;
                    ++digits;
                }
                if (digits == 0) return std::nullopt;
                frac = milliseconds{ms};
            }
        }
        if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
        if (pos < s.size()) {
            if (s[pos] == 'Z' || s[pos] == 'z') {
                ++pos;
            } else if (s[pos] == '+' || s[pos] == '-') {
                const int sign = s[pos] == '-' ? -1 : 1;
                ++pos;
                int oh = 0, om = 0;
                if (!read_digits(s, pos, 2, oh)) return std::nullopt;
                if (pos < s.size() && s[pos] == ':') ++pos;
                if (pos < s.size() && !read_digits(s, pos, 2, om)) return std::nullopt;
                if (oh > 23 || om > 59) return std::nullopt;
                offset = minutes{sign * (oh * 60 + om)};
            } else {
                return std::nullopt;
            }
        }
    }
    if (pos != s.size()) return std::nullopt;
    return Timestamp{sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} + frac - offset};
}

std::string format_timestamp(Timestamp ts) {
    const auto day_point = floor<days>(ts);
    const year_month_day ymd{day_point};
    const hh_mm_ss<milliseconds> tod{ts - day_point};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld.%03ldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long>(tod.hours().count()),
                  static_cast<long>(tod.minutes().count()),
                  static_cast<long>(tod.seconds().count()),
                  static_cast<long>(tod.subseconds().count()));
    return buf;
}

std::pair<EventLog, ParseReport> parse_ocel_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    if (!doc.is_object()) throw StructuralError("OCEL document root is not a JSON object");

    ParseReport report;
    auto& warnings = report.warnings;
    static const std::set<std::string> kTopKeys = {"ocel:global-log", "ocel:global-event",
                                                   "ocel:global-object", "ocel:events",
                                                   "ocel:objects"};
    for (const auto& [key, value] : doc.items())
        if (!kTopKeys.contains(key)) warnings.push_back("unknown top-level key '" + key + "'");

    std::set<std::string> types;
    if (auto it = doc.find("ocel:global-log"); it != doc.end()) {
        if (!it->is_object()) throw StructuralError("'ocel:global-log' is not a JSON object");
        if (auto ts = it->find("ocel:object-types"); ts != it->end()) {
            if (!ts->is_array()) throw StructuralError("'ocel:object-types' is not an array");
            for (const auto& t : *ts) {
                if (!t.is_string()) throw StructuralError("object type name is not a string");
                types.insert(t.get<std::string>());
            }
        }
    }

    std::map<std::string, ObjectInfo> objects;
    if (auto it = doc.find("ocel:objects"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) throw StructuralError("'ocel:objects' is not a JSON object");
        for (const auto& [oid, node] : it->items()) {
            if (!node.is_object()) throw StructuralError("object " + oid + " is not a JSON object");
            auto type = node.find("ocel:type");
            if (type == node.end() || !type->is_string())
                throw StructuralError("object " + oid + " has no string 'ocel:type'");
            ObjectInfo info{type->get<std::string>(), {}};
            if (auto ov = node.find("ocel:ovmap"); ov != node.end())
                info.ovmap = read_attributes(*ov, "object " + oid, warnings);
            for (const auto& [key, value] : node.items())
                if (key != "ocel:type" && key != "ocel:ovmap")
                    warnings.push_back("object " + oid + ": unknown key '" + key + "'");
            objects.emplace(oid, std::move(info));
        }
    }

    std::vector<Event> events;
    auto ev_it = doc.find("ocel:events");
    if (ev_it == doc.end() || ev_it->is_null()) {
        warnings.push_back("document has no 'ocel:events'");
    } else {
        if (!ev_it->is_object()) throw StructuralError("'ocel:events' is not a JSON object");
        events.reserve(ev_it->size());
        for (const auto& [eid, node] : ev_it->items()) {
            if (!node.is_object()) throw StructuralError("event " + eid + " is not a JSON object");
            Event e;
            e.id = eid;
            auto act = node.find("ocel:activity");
            if (act == node.end() || !act->is_string())
                throw StructuralError("event " + eid + " has no string 'ocel:activity'");
            e.activity = act->get<std::string>();

            auto ts = node.find("ocel:timestamp");
            if (ts == node.end() || !ts->is_string())
                throw StructuralError("event " + eid + " has no string 'ocel:timestamp'");
            auto parsed = parse_timestamp(ts->get_ref<const std::string&>());
            if (!parsed)
                throw StructuralError("event " + eid + " has a non-ISO-8601 timestamp '" +
                                      ts->get<std::string>() + "'");
            e.timestamp = *parsed;

            auto om = node.find("ocel:omap");
            if (om == node.end() || om->is_null()) {
                warnings.push_back("event " + eid + " has no 'ocel:omap'; treated as empty");
            } else {
                if (!om->is_array())
                    throw StructuralError("event " + eid + ": 'ocel:omap' is not an array");
                for (const auto& ref : *om) {
                    if (!ref.is_string())
                        throw StructuralError("event " + eid + ": object reference is not a string");
                    const auto& oid = ref.get_ref<const std::string&>();
                    auto obj = objects.find(oid);
                    if (obj == objects.end())
                        throw StructuralError("event " + eid + " references undeclared object '" +
                                              oid + "'");
                    e.omap[obj->second.type].push_back(oid);
                }
            }
            if (auto vm = node.find("ocel:vmap"); vm != node.end())
                e.vmap = read_attributes(*vm, "event " + eid, warnings);
            for (const auto& [key, value] : node.items()) {
                if (key != "ocel:activity" && key != "ocel:timestamp" && key != "ocel:omap" &&
                    key != "ocel:vmap")
                    warnings.push_back("event " + eid + ": unknown key '" + key + "'");
            }
            events.push_back(std::move(e));
        }
    }

    EventLog log(std::move(events), std::move(objects), std::move(types));
    if (auto violations = validate_log(log); !violations.empty())
        throw StructuralError(describe_invalid(violations));

    report.event_count = log.events().size();
    report.object_count = log.objects().size();
    report.type_count = log.object_types().size();
    return {std::move(log), std::move(report)};
}

std::pair<EventLog, ParseReport> read_ocel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ocel_json(buf.str());
}

std::string write_ocel_json(const EventLog& log) {
    if (auto violations = validate_log(log); !violations.empty())
        throw InvalidLogError(std::move(violations));

    std::set<std::string> attribute_names;
    for (const auto& e : log.events())
        for (const auto& [k, v] : e.vmap) attribute_names.insert(k);
    for (const auto& [oid, info] : log.objects())
        for (const auto& [k, v] : info.ovmap) attribute_names.insert(k);

    ordered_json doc = ordered_json::object();
    doc["ocel:global-event"] = {{"ocel:activity", "__INVALID__"}};
    doc["ocel:global-object"] = {{"ocel:type", "__INVALID__"}};
    doc["ocel:global-log"] = {
        {"ocel:attribute-names", attribute_names},
        {"ocel:object-types", log.object_types()},
        {"ocel:version", "1.0"},
        {"ocel:ordering", "timestamp"},
    };

    ordered_json events = ordered_json::object();
    for (const auto& e : log.events()) {
        std::vector<std::string> refs;
        for (const auto& [type, ids] : e.omap) refs.insert(refs.end(), ids.begin(), ids.end());
        std::sort(refs.begin(), refs.end());
        ordered_json node = ordered_json::object();
        node["ocel:activity"] = e.activity;
        node["ocel:timestamp"] = format_timestamp(e.timestamp);
        node["ocel:omap"] = refs;
        node["ocel:vmap"] = write_attributes<ordered_json>(e.vmap);
        events[e.id] = std::move(node);
    }
    doc["ocel:events"] = std::move(events);

    ordered_json objects = ordered_json::object();
    for (const auto& [oid, info] : log.objects()) {
        ordered_json node = ordered_json::object();
        node["ocel:type"] = info.type;
        node["ocel:ovmap"] = write_attributes<ordered_json>(info.ovmap);
        objects[oid] = std::move(node);
    }
    doc["ocel:objects"] = std::move(objects);
    return doc.dump(2) + "\n";
}

void export_simple_log_csv(const SimpleEventLog& slog, std::ostream& sink) {
    sink << "case,activity,timestamp,event_id\n";
    for (const auto& trace : slog.traces) {
        const std::string case_field = csv_field(trace.case_object);
        for (const auto& e : trace.events) {
            sink << case_field << ',' << csv_field(e.activity) << ','
                 << format_timestamp(e.timestamp) << ',' << csv_field(e.id) << '\n';
        }
    }
    sink.flush();
    if (!sink) throw std::runtime_error("failed to write CSV output");
}

}  // namespace oclpm
