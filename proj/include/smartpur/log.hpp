#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace smartpur {

enum class LogLevel { Off = 0, Warn = 1, Info = 2, Debug = 3 };

/// Verbosity is read once from the SMARTPUR_LOG environment variable
/// (off|warn|info|debug). Default: warn.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("SMARTPUR_LOG");
        if (env == nullptr) return LogLevel::Warn;
        if (std::strcmp(env, "off") == 0) return LogLevel::Off;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

template <typename... Args>
void log_warn(const char* fmt, Args... args) {
    if (log_level() >= LogLevel::Warn) {
        std::fprintf(stderr, "[smartpur warn] ");
        std::fprintf(stderr, fmt, args...);
        std::fprintf(stderr, "\n");
    }
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
    if (log_level() >= LogLevel::Info) {
        std::fprintf(stderr, "[smartpur info] ");
        std::fprintf(stderr, fmt, args...);
        std::fprintf(stderr, "\n");
    }
}

} // namespace smartpur
