#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <functional>
#include <string>

#include "chrum/errors.hpp"

namespace chrum {

// Injectable time source. COMPILATION_TIME / EXECUTION_TIME stamps are taken
// through this so tests and --clock can pin them.
using ClockFn = std::function<std::chrono::system_clock::time_point()>;

inline ClockFn system_clock_fn() {
    return [] { return std::chrono::system_clock::now(); };
}

inline ClockFn fixed_clock(std::chrono::system_clock::time_point tp) {
    return [tp] { return tp; };
}

// YYYYMMDD-HHMMSS in UTC: sortable and path-safe.
inline std::string format_timestamp(std::chrono::system_clock::time_point tp) {
    std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d%02d%02d-%02d%02d%02d", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

// Accepts "YYYY-MM-DDTHH:MM:SS" with optional trailing 'Z'; UTC.
inline std::chrono::system_clock::time_point parse_iso_timestamp(const std::string& text) {
    std::tm tm{};
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n != 7 || (sep != 'T' && sep != ' ') || mo < 1 || mo > 12 || d < 1 || d > 31 ||
        h > 23 || mi > 59 || s > 60)
        throw Error(Errc::BadLine, "bad ISO timestamp '" + text + "' (want YYYY-MM-DDTHH:MM:SS)");
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    std::time_t t = timegm(&tm);
    return std::chrono::system_clock::from_time_t(t);
}

}  // namespace chrum
