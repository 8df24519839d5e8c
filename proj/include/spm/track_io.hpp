#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spm/error.hpp"
#include "spm/geometry_events.hpp"
#include "spm/text_util.hpp"
#include "spm/timestamp.hpp"

namespace spm {

inline constexpr std::string_view kTrackCsvHeader = "camera_id,time,entity_class,track_id,x,y,w,h";

namespace detail {

inline double parse_double(std::string_view text, std::size_t line, std::string_view field) {
    const std::string owned(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(owned, &used);
    } catch (const std::exception&) {
        throw ParseError(fmt::format("field {}: '{}' is not a number", field, text), line);
    }
    if (used != owned.size()) throw ParseError(fmt::format("field {}: '{}' is not a number", field, text), line);
    return v;
}

// Shortest decimal that round-trips microseconds.
inline std::string format_seconds(Timestamp t) {
    const std::int64_t mag = t.micros < 0 ? -t.micros : t.micros;
    std::string s = fmt::format("{}{}.{:06}", t.micros < 0 ? "-" : "", mag / 1000000, mag % 1000000);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

}  // namespace detail

inline std::vector<DetectionSample> read_tracks_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<DetectionSample> out;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        if (!header_seen) {
            std::string compact;
            for (char c : trimmed) {
                if (c != ' ' && c != '\t') compact += c;
            }
            if (compact != kTrackCsvHeader) {
                throw ParseError(fmt::format("expected header '{}', got '{}'", kTrackCsvHeader, trimmed), line_no);
            }
            header_seen = true;
            continue;
        }
        const auto f = detail::split(trimmed, ',');
        if (f.size() != 8) throw ParseError(fmt::format("expected 8 fields, got {}", f.size()), line_no);
        DetectionSample s;
        s.camera_id = std::string(f[0]);
        try {
            s.time = parse_time_field(f[1]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        s.entity_class = std::string(f[2]);
        s.track_id = std::string(f[3]);
        s.box = {detail::parse_double(f[4], line_no, "x"), detail::parse_double(f[5], line_no, "y"),
                 detail::parse_double(f[6], line_no, "w"), detail::parse_double(f[7], line_no, "h")};
        if (s.camera_id.empty()) throw ParseError("empty camera_id", line_no);
        if (s.entity_class.empty()) throw ParseError("empty entity_class", line_no);
        if (!s.box.valid()) throw ParseError("box must have positive width and height", line_no);
        out.push_back(std::move(s));
    }
    if (!header_seen) throw ParseError(fmt::format("missing header '{}'", kTrackCsvHeader));
    return out;
}

inline void write_tracks_csv(std::ostream& out, std::span<const DetectionSample> samples) {
    out << kTrackCsvHeader << '\n';
    for (const auto& s : samples) {
        out << fmt::format("{},{},{},{},{},{},{},{}\n", s.camera_id, detail::format_seconds(s.time), s.entity_class,
                           s.track_id, s.box.x, s.box.y, s.box.width, s.box.height);
    }
}

inline void to_json(nlohmann::json& j, const ZoneSpec& z) {
    j = nlohmann::json{{"location_id", z.location_id}, {"camera_id", z.camera_id}, {"x", z.box.x},
                       {"y", z.box.y},                 {"w", z.box.width},         {"h", z.box.height},
                       {"category", z.category}};
}

inline void from_json(const nlohmann::json& j, ZoneSpec& z) {
    z.location_id = j.at("location_id").get<std::string>();
    z.camera_id = j.at("camera_id").get<std::string>();
    z.box = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("w").get<double>(), j.at("h").get<double>()};
    z.category = j.value("category", std::string{});
}

inline std::vector<ZoneSpec> read_zones_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
        if (!j.is_array()) throw ParseError("zones file must hold a JSON array");
        auto zones = j.get<std::vector<ZoneSpec>>();
        detail::validate_zones(zones);
        return zones;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("zones: ") + e.what());
    }
}

inline void write_zones_json(std::ostream& out, std::span<const ZoneSpec> zones) {
    out << nlohmann::json(std::vector<ZoneSpec>(zones.begin(), zones.end())).dump(2) << '\n';
}

}  // namespace spm
