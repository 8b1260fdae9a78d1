#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oclpm/ocel.hpp"

namespace oclpm {

/// Malformed JSON. `offset()` is the byte position reported by the JSON reader.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Well-formed JSON that does not describe a valid OCEL document.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Refusal to serialize a log that fails validation.
class InvalidLogError : public std::runtime_error {
public:
    explicit InvalidLogError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

struct ParseReport {
    std::size_t event_count = 0;
    std::size_t object_count = 0;
    std::size_t type_count = 0;
    std::vector<std::string> warnings;
};

/// ISO-8601 date-time ("YYYY-MM-DD[T| ]hh:mm[:ss[.fff...]][Z|+hh:mm|+hhmm]",
/// or a bare date). Offsets are applied so the result is UTC. Sub-millisecond
/// digits are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "YYYY-MM-DDThh:mm:ss.fffZ".
std::string format_timestamp(Timestamp ts);

/// Reads an OCEL 1.0 JSON document.
std::pair<EventLog, ParseReport> parse_ocel_json(std::string_view bytes);
std::pair<EventLog, ParseReport> read_ocel_file(const std::string& path);

/// Writes an OCEL 1.0 JSON document with deterministic layout: events in
/// (timestamp, id) order, objects by id, omap ids sorted. Throws
/// InvalidLogError when the log does not validate.
std::string write_ocel_json(const EventLog& log);

/// One CSV row per event occurrence: case,activity,timestamp,event_id.
void export_simple_log_csv(const SimpleEventLog& slog, std::ostream& sink);

}  // namespace oclpm
