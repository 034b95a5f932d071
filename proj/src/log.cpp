#include "ironman/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace ironman {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("IRONMAN_LOG");
        if (!env) return LogLevel::Error;
        std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Error;
    }();
    return level;
}

void log_msg(LogLevel level, const std::string& msg) {
    if (level > log_level()) return;
    static std::mutex mu;
    std::lock_guard lk(mu);
    const char* tag = level == LogLevel::Error ? "error" : level == LogLevel::Info ? "info" : "debug";
    std::cerr << "[" << tag << "] " << msg << "\n";
}

}  // namespace ironman
