#include "memorb/clock.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>

namespace memorb {

Instant Instant::now() {
    auto tp = std::chrono::system_clock::now();
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                  tp.time_since_epoch())
                  .count();
    return Instant{us};
}

std::string Instant::to_rfc3339() const {
    int64_t us = micros_since_epoch;
    time_t secs = us >= 0 ? us / 1000000 : (us - 999999) / 1000000;
    int frac = int(us - int64_t(secs) * 1000000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%06dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                  tm.tm_min, tm.tm_sec, frac);
    return buf;
}

std::optional<Instant> Instant::parse_rfc3339(std::string_view s) {
    int year, mon, day, hour, min, sec;
    char frac_buf[8] = {0};
    std::string str(s);
    int n = std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%6[0-9]Z", &year,
                        &mon, &day, &hour, &min, &sec, frac_buf);
    int frac = 0;
    if (n == 7) {
        // pad to microseconds: ".4" means 400000 us
        int digits = int(strlen(frac_buf));
        frac = atoi(frac_buf);
        for (int i = digits; i < 6; ++i) frac *= 10;
    } else {
        n = std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ", &year, &mon,
                        &day, &hour, &min, &sec);
        if (n != 6) return std::nullopt;
    }
    if (mon < 1 || mon > 12 || day < 1 || day > 31 || hour > 23 || min > 59 ||
        sec > 60)
        return std::nullopt;
    std::tm tm{};
    tm.tm_year = year - 1900;
    tm.tm_mon = mon - 1;
    tm.tm_mday = day;
    tm.tm_hour = hour;
    tm.tm_min = min;
    tm.tm_sec = sec;
    time_t secs = timegm(&tm);
    return Instant{int64_t(secs) * 1000000 + frac};
}

}  // namespace memorb
