#pragma once

#include <string_view>

namespace oclpm::logging {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold from OCLPM_LOG_LEVEL (error|warn|info|debug); warn when unset or unrecognised.
Level threshold();

/// Writes "[oclpm] <level>: <message>" to stderr when `level` passes the threshold.
void log(Level level, std::string_view message);

inline void warn(std::string_view m) { log(Level::Warn, m); }
inline void info(std::string_view m) { log(Level::Info, m); }
inline void debug(std::string_view m) { log(Level::Debug, m); }

}  // namespace oclpm::logging
