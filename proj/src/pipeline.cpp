#include "oclpm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "oclpm/assembly.hpp"
#include "oclpm/logging.hpp"
#include "oclpm/ocel_io.hpp"

namespace oclpm {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Times consecutive phases; each phase ends where the next begins.
class PhaseClock {
public:
    explicit PhaseClock(RunReport& report) : report_(report), mark_(Clock::now()) {}
    void finish(std::string name) {
        const auto now = Clock::now();
        report_.phases.push_back({std::move(name), std::chrono::duration<double>(now - mark_).count()});
        mark_ = now;
    }

private:
    RunReport& report_;
    Clock::time_point mark_;
};

void warn(RunReport& report, std::string message) {
    logging::warn(message);
    report.warnings.push_back(std::move(message));
}

const char* const kPalette[12] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072",
                                  "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
                                  "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string label_of(const LabeledPetriNet& net, const std::string& t) {
    const auto& l = net.labels.at(t);
    return l ? *l : std::string("tau");
}

}  // namespace

void PipelineConfig::check() const {
    oracle.check();
    discovery.check();
    if (strategy.kind == ExecutionStrategy::Kind::LeadingType && strategy.leading_type.empty())
        throw std::invalid_argument("leading-type strategy needs a leading object type");
}

DiscoveryOutcome discover_oclpms(const EventLog& log, const PipelineConfig& cfg) {
    cfg.check();
    DiscoveryOutcome outcome;
    RunReport& report = outcome.report;
    const auto start = Clock::now();
    PhaseClock phases(report);

    OracleConfig oracle = cfg.oracle;
    oracle.threads = cfg.threads;
    DiscoveryConfig discovery = cfg.discovery;
    discovery.threads = cfg.threads;

    if (log.empty()) {
        warn(report, "no events");
        report.total_seconds = seconds_since(start);
        return outcome;
    }

    // Phase 1: place nets per object type (PT).
    for (const auto& type : log.object_types()) {
        const auto flat = flatten(log, type);
        auto places = discover_place_nets(flat, type, oracle);
        logging::info("type " + type + ": " + std::to_string(flat.traces.size()) + " traces, " +
                      std::to_string(places.size()) + " place nets");
        outcome.place_types.insert(outcome.place_types.end(), places.begin(), places.end());
    }
    phases.finish("place-discovery");

    // Phase 1: process executions.
    const auto [enhanced, assignment] = process_execution_oracle(log, cfg.strategy);
    const auto slog = flatten(enhanced, cfg.strategy.execution_type);
    const auto orphaned = std::count_if(log.events().begin(), log.events().end(),
                                        [](const Event& e) { return e.object_count() == 0; });
    if (orphaned > 0)
        warn(report, std::to_string(orphaned) +
                         " events without objects belong to no execution and were dropped");
    std::size_t largest = 0;
    for (const auto& [id, ex] : assignment.executions) largest = std::max(largest, ex.events.size());
    if (2 * largest > log.size())
        warn(report, "one process execution covers " + std::to_string(largest) + " of " +
                         std::to_string(log.size()) + " events");
    logging::info(std::to_string(assignment.executions.size()) + " process executions");
    phases.finish("execution");

    if (outcome.place_types.empty()) {
        warn(report, "no place nets were discovered; nothing to combine");
        report.total_seconds = seconds_since(start);
        return outcome;
    }

    // Phase 2: LPM discovery, then typing and variable arcs.
    const auto lpms = discover_lpms(slog, outcome.place_types, discovery);
    logging::info(std::to_string(lpms.size()) + " LPMs discovered");
    phases.finish("lpm-discovery");

    auto assembled = assemble_oclpms(lpms, outcome.place_types, slog, discovery);
    for (auto& w : assembled.warnings) warn(report, std::move(w));
    for (auto& e : assembled.errors) warn(report, "model dropped: " + e);
    outcome.models = std::move(assembled.models);
    report.model_count = outcome.models.size();
    phases.finish("assembly");

    report.total_seconds = seconds_since(start);
    return outcome;
}

RunReport run_discovery(const PipelineConfig& cfg) {
    cfg.check();
    const auto start = Clock::now();
    RunReport parse_report;
    PhaseClock parse_clock(parse_report);
    auto [log, parsed] = read_ocel_file(cfg.input);
    parse_clock.finish("parse");

    DiscoveryOutcome outcome = discover_oclpms(log, cfg);
    RunReport report = std::move(outcome.report);
    report.phases.insert(report.phases.begin(), parse_report.phases.begin(),
                         parse_report.phases.end());
    for (const auto& w : parsed.warnings) logging::debug(w);

    const auto export_start = Clock::now();
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output, std::ios::binary);
        out << models_to_json(outcome.models);
        if (!out) throw std::runtime_error("cannot write " + cfg.output);
    }
    if (!cfg.dot_dir.empty()) {
        std::filesystem::create_directories(cfg.dot_dir);
        DotOptions options;
        options.show_endpoints = cfg.show_endpoints;
        options.type_order.assign(log.object_types().begin(), log.object_types().end());
        for (const auto& m : outcome.models) {
            const auto path = std::filesystem::path(cfg.dot_dir) /
                              ("oclpm_" + std::to_string(m.score.rank) + ".dot");
            std::ofstream out(path, std::ios::binary);
            out << render_dot(m, options);
            if (!out) throw std::runtime_error("cannot write " + path.string());
        }
    }
    report.phases.push_back({"export", seconds_since(export_start)});
    report.total_seconds = seconds_since(start);
    return report;
}

std::string models_to_json(const std::vector<Oclpm>& models) {
    ordered_json doc = ordered_json::array();
    for (const auto& m : models) {
        ordered_json places = ordered_json::array();
        for (const auto& p : m.net.places) {
            std::set<std::string> inputs, outputs;
            for (const auto& t : m.net.preset(p)) inputs.insert(label_of(m.net, t));
            for (const auto& t : m.net.postset(p)) outputs.insert(label_of(m.net, t));
            places.push_back({{"id", p},
                              {"type", m.place_types.at(p)},
                              {"inputs", inputs},
                              {"outputs", outputs}});
        }
        std::set<std::string> transitions;
        for (const auto& t : m.net.transitions) transitions.insert(label_of(m.net, t));

        std::vector<std::tuple<std::string, std::string, bool>> arcs;
        for (const auto& a : m.net.arcs) {
            const bool from_place = m.net.places.contains(a.source);
            arcs.emplace_back(from_place ? a.source : label_of(m.net, a.source),
                              from_place ? label_of(m.net, a.target) : a.target,
                              m.variable_arcs.contains(a));
        }
        std::sort(arcs.begin(), arcs.end());
        ordered_json arc_json = ordered_json::array();
        for (const auto& [from, to, variable] : arcs)
            arc_json.push_back({{"from", from}, {"to", to}, {"variable", variable}});

        ordered_json entry = ordered_json::object();
        entry["places"] = std::move(places);
        entry["transitions"] = transitions;
        entry["arcs"] = std::move(arc_json);
        entry["score"] = {{"support", m.score.support},
                          {"coverage", m.score.coverage},
                          {"rank", m.score.rank}};
        doc.push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

std::vector<Oclpm> models_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    if (!doc.is_array()) throw StructuralError("models document is not a JSON array");
    std::vector<Oclpm> out;
    try {
        for (const auto& entry : doc) {
            Oclpm m;
            std::map<std::string, std::string> tid;
            std::size_t i = 0;
            for (const auto& label : entry.at("transitions")) {
                const std::string t = "t" + std::to_string(i++);
                tid[label.get<std::string>()] = t;
                m.net.transitions.insert(t);
                m.net.labels[t] = label.get<std::string>();
            }
            for (const auto& p : entry.at("places")) {
                const auto id = p.at("id").get<std::string>();
                m.net.places.insert(id);
                PlaceNet pn;
                pn.inputs = p.at("inputs").get<std::set<std::string>>();
                pn.outputs = p.at("outputs").get<std::set<std::string>>();
                pn.origin_type = p.at("type").get<std::string>();
                m.place_types[id] = pn.origin_type;
                m.provenance[id] = std::move(pn);
            }
            for (const auto& a : entry.at("arcs")) {
                const auto from = a.at("from").get<std::string>();
                const auto to = a.at("to").get<std::string>();
                const bool from_place = m.net.places.contains(from);
                const auto& label = from_place ? to : from;
                auto t = tid.find(label);
                if (t == tid.end())
                    throw StructuralError("arc references unknown transition '" + label + "'");
                const Arc arc = from_place ? Arc{from, t->second} : Arc{t->second, to};
                m.net.arcs.insert(arc);
                if (a.at("variable").get<bool>()) m.variable_arcs.insert(arc);
            }
            const auto& score = entry.at("score");
            m.score.support = score.at("support").get<std::size_t>();
            m.score.coverage = score.at("coverage").get<double>();
            m.score.rank = score.at("rank").get<std::size_t>();
            m.check();
            out.push_back(std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("models document does not match the schema: ") +
                              e.what());
    } catch (const std::invalid_argument& e) {
        throw StructuralError(e.what());
    }
    return out;
}

std::string render_dot(const Oclpm& model, const DotOptions& options) {
    std::vector<std::string> types = options.type_order;
    std::set<std::string> model_types;
    for (const auto& [p, t] : model.place_types) model_types.insert(t);
    for (const auto& t : model_types)
        if (std::find(types.begin(), types.end(), t) == types.end()) types.push_back(t);
    auto color = [&](const std::string& type) {
        const auto pos = std::find(types.begin(), types.end(), type) - types.begin();
        return kPalette[static_cast<std::size_t>(pos) % 12];
    };

    // Stable ordering: transitions by label, places by (type, inputs, outputs).
    std::vector<std::string> transitions(model.net.transitions.begin(), model.net.transitions.end());
    std::sort(transitions.begin(), transitions.end(), [&](const auto& a, const auto& b) {
        return label_of(model.net, a) < label_of(model.net, b);
    });
    std::vector<std::pair<std::string, std::string>> places;  // (sort key, id)
    for (const auto& p : model.net.places) {
        std::string key = model.place_types.at(p) + "|";
        for (const auto& t : model.net.preset(p)) key += label_of(model.net, t) + ",";
        key += "|";
        for (const auto& t : model.net.postset(p)) key += label_of(model.net, t) + ",";
        places.emplace_back(key, p);
    }
    std::sort(places.begin(), places.end());

    std::ostringstream dot;
    dot << "digraph oclpm {\n";
    dot << "  rankdir=LR;\n";
    dot << "  node [fontname=\"Helvetica\"];\n";
    for (const auto& t : transitions)
        dot << "  " << dot_quote(t) << " [shape=box, label=" << dot_quote(label_of(model.net, t))
            << "];\n";
    for (const auto& [key, p] : places) {
        const auto& type = model.place_types.at(p);
        dot << "  " << dot_quote(p) << " [shape=circle, label=\"\", style=filled, fillcolor="
            << dot_quote(color(type)) << ", xlabel=" << dot_quote(type) << "];\n";
    }

    std::vector<Arc> arcs(model.net.arcs.begin(), model.net.arcs.end());
    for (const auto& a : arcs) {
        dot << "  " << dot_quote(a.source) << " -> " << dot_quote(a.target);
        if (model.variable_arcs.contains(a)) dot << " [penwidth=3, comment=\"var\"]";
        dot << ";\n";
    }

    if (options.show_endpoints) {
        for (const auto& type : model_types) {
            std::set<std::string> produces, consumes;
            for (const auto& [p, t] : model.place_types) {
                if (t != type) continue;
                for (const auto& tr : model.net.preset(p)) produces.insert(tr);
                for (const auto& tr : model.net.postset(p)) consumes.insert(tr);
            }
            const std::string start = "S_" + type;
            const std::string end = "E_" + type;
            bool start_used = false, end_used = false;
            std::ostringstream edges;
            for (const auto& tr : transitions) {
                if (produces.contains(tr) && !consumes.contains(tr)) {
                    edges << "  " << dot_quote(start) << " -> " << dot_quote(tr)
                          << " [style=dashed];\n";
                    start_used = true;
                }
                if (consumes.contains(tr) && !produces.contains(tr)) {
                    edges << "  " << dot_quote(tr) << " -> " << dot_quote(end)
                          << " [style=dashed];\n";
                    end_used = true;
                }
            }
            if (start_used)
                dot << "  " << dot_quote(start) << " [shape=ellipse, label=\"S\", style=filled, "
                    << "fillcolor=" << dot_quote(color(type)) << "];\n";
            if (end_used)
                dot << "  " << dot_quote(end) << " [shape=ellipse, label=\"E\", style=filled, "
                    << "fillcolor=" << dot_quote(color(type)) << "];\n";
            dot << edges.str();
        }
    }
    dot << "}\n";
    return dot.str();
}

LogStats log_stats(const EventLog& log) {
    LogStats s;
    s.events = log.size();
    s.objects = log.objects().size();
    s.object_types = log.object_types().size();
    for (const auto& t : log.object_types()) {
        s.objects_per_type[t] = 0;
        s.events_per_type[t] = 0;
    }
    for (const auto& [oid, info] : log.objects()) ++s.objects_per_type[info.type];
    for (const auto& e : log.events())
        for (const auto& [type, ids] : e.omap) ++s.events_per_type[type];
    return s;
}

std::string format_stats(const LogStats& stats) {
    std::ostringstream out;
    out << "events: " << stats.events << "\n";
    out << "objects: " << stats.objects << "\n";
    out << "object types: " << stats.object_types << "\n";
    for (const auto& [type, n] : stats.objects_per_type)
        out << "  " << type << ": " << n << " objects, " << stats.events_per_type.at(type)
            << " events\n";
    return out.str();
}

}  // namespace oclpm
