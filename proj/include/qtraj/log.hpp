// Minimal stderr logger. Verbosity comes from the QTRAJ_LOG environment
// variable: error | warn | info | debug (default: warn).
#pragma once

namespace qtraj {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();

void logf(LogLevel level, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 2, 3)))
#endif
    ;

}  // namespace qtraj
