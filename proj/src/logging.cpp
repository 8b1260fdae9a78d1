#include "oclpm/logging.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace oclpm::logging {

Level threshold() {
    const char* env = std::getenv("OCLPM_LOG_LEVEL");
    if (!env) return Level::Warn;
    const std::string v(env);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
}

void log(Level level, std::string_view message) {
    static const Level limit = threshold();
    if (level > limit) return;
    static std::mutex mutex;
    static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
    std::lock_guard lock(mutex);
    std::cerr << "[oclpm] " << kNames[static_cast<int>(level)] << ": " << message << '\n';
}

}  // namespace oclpm::logging
