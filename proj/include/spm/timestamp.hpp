#pragma once

#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "spm/error.hpp"

namespace spm {

/// Point in time with microsecond resolution, counted from 1970-01-01 00:00:00
/// (no time zone). Track files that carry plain decimal seconds land on the
/// same axis, so relative and calendar times mix freely.
struct Timestamp {
    std::int64_t micros = 0;

    static constexpr Timestamp from_seconds(double s) {
        return Timestamp{static_cast<std::int64_t>(s < 0 ? s * 1e6 - 0.5 : s * 1e6 + 0.5)};
    }
    [[nodiscard]] constexpr double seconds() const { return static_cast<double>(micros) / 1e6; }

    friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

/// Signed difference `a - b` in seconds.
constexpr double seconds_between(Timestamp a, Timestamp b) {
    return static_cast<double>(a.micros - b.micros) / 1e6;
}

namespace detail {

inline bool take_int(std::string_view& s, int digits, int& out) {
    if (s.size() < static_cast<std::size_t>(digits)) return false;
    out = 0;
    for (int i = 0; i < digits; ++i) {
        const char c = s[static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    s.remove_prefix(static_cast<std::size_t>(digits));
    return true;
}

inline bool take_char(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

// ".123456" -> micros; at most 6 digits are significant.
inline bool take_fraction(std::string_view& s, std::int64_t& micros) {
    micros = 0;
    if (!take_char(s, '.')) return true;
    std::int64_t scale = 100000;
    std::size_t n = 0;
    while (!s.empty() && s.front() >= '0' && s.front() <= '9') {
        if (n < 6) micros += (s.front() - '0') * scale;
        scale /= 10;
        s.remove_prefix(1);
        ++n;
    }
    return n > 0;
}

inline Timestamp compose(int y, int mo, int d, int h, int mi, int sec, std::int64_t frac) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) {
        throw ParseError(fmt::format("invalid calendar date/time {:04}/{:02}/{:02}/{:02}:{:02}:{:02}", y, mo, d, h, mi, sec));
    }
    const auto day_count = sys_days{ymd}.time_since_epoch().count();
    return Timestamp{(static_cast<std::int64_t>(day_count) * 86400 + h * 3600 + mi * 60 + sec) * 1000000 + frac};
}

}  // namespace detail

/// Parses `YYYY/MM/DD/hh:mm:ss[.ffffff]` or ISO 8601 `YYYY-MM-DDThh:mm:ss[.ffffff][Z]`.
inline Timestamp parse_timestamp(std::string_view text) {
    std::string_view s = text;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    std::int64_t frac = 0;
    const auto fail = [&] { return ParseError(fmt::format("unrecognized timestamp '{}'", text)); };

    if (!detail::take_int(s, 4, y) || s.empty()) throw fail();
    const char sep = s.front();
    if (sep != '/' && sep != '-') throw fail();
    const char time_sep = sep == '/' ? '/' : 'T';
    if (!detail::take_char(s, sep) || !detail::take_int(s, 2, mo) || !detail::take_char(s, sep) ||
        !detail::take_int(s, 2, d)) {
        throw fail();
    }
    if (!(detail::take_char(s, time_sep) || (sep == '-' && detail::take_char(s, ' ')))) throw fail();
    if (!detail::take_int(s, 2, h) || !detail::take_char(s, ':') || !detail::take_int(s, 2, mi) ||
        !detail::take_char(s, ':') || !detail::take_int(s, 2, sec) || !detail::take_fraction(s, frac)) {
        throw fail();
    }
    if (sep == '-') detail::take_char(s, 'Z');
    if (!s.empty()) throw fail();
    return detail::compose(y, mo, d, h, mi, sec, frac);
}

/// Formats as `YYYY/MM/DD/hh:mm:ss`, appending a trimmed fraction only when non-zero.
inline std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    std::int64_t total = t.micros;
    std::int64_t frac = total % 1000000;
    std::int64_t secs = total / 1000000;
    if (frac < 0) {
        frac += 1000000;
        secs -= 1;
    }
    std::int64_t days_since = secs / 86400;
    std::int64_t tod = secs % 86400;
    if (tod < 0) {
        tod += 86400;
        days_since -= 1;
    }
    const year_month_day ymd{sys_days{days{days_since}}};
    std::string out = fmt::format("{:04}/{:02}/{:02}/{:02}:{:02}:{:02}", static_cast<int>(ymd.year()),
                                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), tod / 3600,
                                  (tod / 60) % 60, tod % 60);
    if (frac != 0) {
        std::string digits = fmt::format("{:06}", frac);
        while (digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

/// Accepts a calendar timestamp or plain decimal seconds (track files use both).
inline Timestamp parse_time_field(std::string_view text) {
    if (text.find('/') != std::string_view::npos || text.find('T') != std::string_view::npos ||
        (text.size() >= 10 && text[4] == '-')) {
        return parse_timestamp(text);
    }
    const std::string owned(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(owned, &used);
    } catch (const std::exception&) {
        throw ParseError(fmt::format("unrecognized time '{}'", text));
    }
    if (used != owned.size() || !std::isfinite(value)) throw ParseError(fmt::format("unrecognized time '{}'", text));
    return Timestamp::from_seconds(value);
}

}  // namespace spm
