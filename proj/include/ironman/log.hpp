#pragma once

#include <string>

namespace ironman {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

/// Level from IRONMAN_LOG in {error, info, debug}; default error.
LogLevel log_level();

void log_msg(LogLevel level, const std::string& msg);

inline void log_error(const std::string& msg) { log_msg(LogLevel::Error, msg); }
inline void log_info(const std::string& msg) { log_msg(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_msg(LogLevel::Debug, msg); }

}  // namespace ironman
