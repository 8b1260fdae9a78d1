#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oclpm/execution.hpp"
#include "oclpm/logging.hpp"
#include "oclpm/ocel_io.hpp"
#include "oclpm/parallel.hpp"
#include "oclpm/pipeline.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kInternal = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

oclpm::EventLog load(const std::string& path) {
    if (!std::ifstream(path, std::ios::binary)) throw InputError("cannot open " + path);
    auto [log, report] = oclpm::read_ocel_file(path);
    for (const auto& w : report.warnings) oclpm::logging::warn(w);
    return log;
}

oclpm::ExecutionStrategy parse_strategy(const std::string& text, const std::string& leading) {
    if (text == "connected-components") {
        if (!leading.empty())
            throw UsageError("--leading-type requires --strategy leading-type");
        return oclpm::ExecutionStrategy::connected_components();
    }
    std::string type = leading;
    if (text.rfind("leading-type:", 0) == 0) {
        type = text.substr(13);
    } else if (text != "leading-type") {
        throw UsageError("unknown strategy '" + text +
                         "'; expected connected-components or leading-type[:<type>]");
    }
    if (type.empty()) throw UsageError("leading-type strategy needs --leading-type <type>");
    return oclpm::ExecutionStrategy::leading(type);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path);
}

std::string file_safe(const std::string& type) {
    std::string out;
    for (char c : type) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_';
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Object-centric local process model discovery"};
    app.require_subcommand(1);

    oclpm::PipelineConfig cfg;
    cfg.threads = oclpm::default_thread_count();
    std::string strategy = "connected-components";
    std::string leading;

    auto* discover = app.add_subcommand("discover", "Discover OCLPMs from an OCEL JSON log");
    discover->add_option("--input", cfg.input, "OCEL 1.0 JSON file")->required();
    discover->add_option("--strategy", strategy,
                         "connected-components | leading-type | leading-type:<type>")
        ->capture_default_str();
    discover->add_option("--leading-type", leading, "Leading object type");
    discover->add_option("--min-places", cfg.discovery.min_places)->capture_default_str();
    discover->add_option("--max-places", cfg.discovery.max_places)->capture_default_str();
    discover->add_option("--min-transitions", cfg.discovery.min_transitions)
        ->capture_default_str();
    discover->add_option("--max-transitions", cfg.discovery.max_transitions)
        ->capture_default_str();
    discover->add_option("--window", cfg.discovery.window)->capture_default_str();
    discover->add_option("--min-occurrences", cfg.discovery.min_occurrences)
        ->capture_default_str();
    discover->add_option("--tau-var", cfg.discovery.var_arc_threshold, "Variable arc threshold")
        ->capture_default_str();
    discover->add_option("--tau-fit", cfg.oracle.fitness_threshold, "Place fitness threshold")
        ->capture_default_str();
    discover->add_option("--max-io-size", cfg.oracle.max_io_set_size)->capture_default_str();
    discover->add_option("--max-models", cfg.discovery.max_models)->capture_default_str();
    discover->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
    discover->add_option("--output", cfg.output, "Models JSON path (default: stdout)");
    discover->add_option("--dot-dir", cfg.dot_dir, "Directory for one DOT file per model");
    discover->add_flag("--show-endpoints", cfg.show_endpoints, "Draw S/E nodes per object type");
    discover->add_option("--seed", cfg.seed, "Unused by discovery; accepted for symmetry");

    std::string stats_input;
    auto* stats = app.add_subcommand("stats", "Summarize an OCEL JSON log");
    stats->add_option("--input", stats_input)->required();

    std::string flatten_input, flatten_dir = ".";
    auto* flatten = app.add_subcommand("flatten", "Write one CSV per object type");
    flatten->add_option("--input", flatten_input)->required();
    flatten->add_option("--output", flatten_dir, "Output directory")->capture_default_str();

    std::size_t orders = 20, max_items = 3;
    std::uint64_t fixture_seed = 1;
    std::string fixture_kind = "order", fixture_output;
    auto* fixture = app.add_subcommand("generate-fixture", "Write a synthetic OCEL JSON log");
    fixture->add_option("--orders", orders)->capture_default_str()->check(CLI::PositiveNumber);
    fixture->add_option("--max-items", max_items)->capture_default_str()->check(
        CLI::PositiveNumber);
    fixture->add_option("--seed", fixture_seed)->capture_default_str();
    fixture->add_option("--kind", fixture_kind, "order | order-management")
        ->capture_default_str()
        ->check(CLI::IsMember({"order", "order-management"}));
    fixture->add_option("--output", fixture_output, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*discover) {
            cfg.strategy = parse_strategy(strategy, leading);
            cfg.check();
            if (!std::ifstream(cfg.input, std::ios::binary))
                throw InputError("cannot open " + cfg.input);
            if (cfg.output == "-") cfg.output.clear();
            const bool to_stdout = cfg.output.empty();
            oclpm::RunReport report;
            if (to_stdout) {
                auto [log, parsed] = oclpm::read_ocel_file(cfg.input);
                auto outcome = oclpm::discover_oclpms(log, cfg);
                std::cout << oclpm::models_to_json(outcome.models);
                if (!cfg.dot_dir.empty()) {
                    std::filesystem::create_directories(cfg.dot_dir);
                    oclpm::DotOptions opts;
                    opts.show_endpoints = cfg.show_endpoints;
                    opts.type_order.assign(log.object_types().begin(), log.object_types().end());
                    for (const auto& m : outcome.models)
                        write_text((std::filesystem::path(cfg.dot_dir) /
                                    ("oclpm_" + std::to_string(m.score.rank) + ".dot"))
                                       .string(),
                                   oclpm::render_dot(m, opts));
                }
                report = std::move(outcome.report);
            } else {
                report = oclpm::run_discovery(cfg);
            }
            std::cerr << "models: " << report.model_count << "\n";
            for (const auto& p : report.phases)
                std::cerr << "  " << p.name << ": " << p.seconds << " s\n";
            std::cerr << "total: " << report.total_seconds << " s\n";
        } else if (*stats) {
            std::cout << oclpm::format_stats(oclpm::log_stats(load(stats_input)));
        } else if (*flatten) {
            const auto log = load(flatten_input);
            std::filesystem::create_directories(flatten_dir);
            for (const auto& type : log.object_types()) {
                const auto path = std::filesystem::path(flatten_dir) / (file_safe(type) + ".csv");
                std::ofstream out(path, std::ios::binary);
                oclpm::export_simple_log_csv(oclpm::flatten(log, type), out);
                std::cerr << path.string() << "\n";
            }
        } else if (*fixture) {
            const auto log = fixture_kind == "order"
                                 ? oclpm::generate_order_log(orders, max_items, fixture_seed)
                                 : oclpm::generate_order_management_log(orders, fixture_seed);
            write_text(fixture_output, oclpm::write_ocel_json(log));
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const oclpm::ParseError& e) {
        std::cerr << "error: malformed JSON at byte " << e.offset() << ": " << e.what() << "\n";
        return kInput;
    } catch (const oclpm::StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const oclpm::InvalidLogError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return 0;
}
