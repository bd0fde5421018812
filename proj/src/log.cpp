#include "qtraj/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace qtraj {

static LogLevel parse_level() {
    const char* env = std::getenv("QTRAJ_LOG");
    if (env == nullptr) return LogLevel::warn;
    if (std::strcmp(env, "error") == 0) return LogLevel::error;
    if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    std::fprintf(stderr, "[qtraj][warn] unknown QTRAJ_LOG value '%s', using 'warn'\n", env);
    return LogLevel::warn;
}

LogLevel log_level() {
    static const LogLevel level = parse_level();
    return level;
}

void logf(LogLevel level, const char* fmt, ...) {
    if (level > log_level()) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[qtraj][%s] ", names[static_cast<int>(level)]);
    std::va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

}  // namespace qtraj
