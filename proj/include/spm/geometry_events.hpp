#pragma once

// Lifting detector tracks to zone events.
//
// A detection "visits" a zone while its box overlaps the zone at all. Inside a
// visit, an occurrence fires once the overlap ratio has stayed at or above
// `min_overlap_ratio` for `min_duration` seconds; its start time is backdated to
// the first sample of that qualifying run. A visit yields at most one occurrence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "spm/error.hpp"
#include "spm/timestamp.hpp"

namespace spm {

/// Axis-aligned rectangle in pixel coordinates, (x, y) is the top-left corner.
struct Rect {
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;

    [[nodiscard]] double area() const { return width * height; }
    [[nodiscard]] double right() const { return x + width; }
    [[nodiscard]] double bottom() const { return y + height; }
    [[nodiscard]] bool valid() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(width) && std::isfinite(height) && width > 0 &&
               height > 0;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline std::string to_string(const Rect& r) { return fmt::format("({}, {}, {}, {})", r.x, r.y, r.width, r.height); }

struct DetectionSample {
    std::string camera_id;
    Timestamp time;
    std::string entity_class;
    std::string track_id;  // empty when the detector provides no tracking
    Rect box;

    /// Identity of the stream this sample belongs to; untracked samples are keyed by class.
    [[nodiscard]] const std::string& stream_key() const { return track_id.empty() ? entity_class : track_id; }

    friend bool operator==(const DetectionSample&, const DetectionSample&) = default;
};

struct ZoneSpec {
    std::string location_id;
    std::string camera_id;
    Rect box;
    std::string category;

    friend bool operator==(const ZoneSpec&, const ZoneSpec&) = default;
};

struct DetectionConfig {
    double min_duration = 3.0;
    double min_overlap_ratio = 0.10;
    double sample_period = 1.0;
    double dedup_window = 2.0;

    void validate() const {
        if (!(min_duration >= 0.0)) throw ConfigError(fmt::format("min_duration must be >= 0, got {}", min_duration));
        if (!(min_overlap_ratio >= 0.0 && min_overlap_ratio <= 1.0)) {
            throw ConfigError(fmt::format("min_overlap_ratio must lie in [0, 1], got {}", min_overlap_ratio));
        }
        if (!(sample_period > 0.0)) throw ConfigError(fmt::format("sample_period must be > 0, got {}", sample_period));
        if (!(dedup_window >= 0.0)) throw ConfigError(fmt::format("dedup_window must be >= 0, got {}", dedup_window));
    }
};

/// One detected (or ground-truth) event start.
struct Occurrence {
    std::string location_id;
    std::string entity_class;
    std::string track_id;
    Timestamp start;
    std::string camera_id;  // informational, not part of identity

    [[nodiscard]] auto identity() const { return std::tie(location_id, entity_class, track_id); }
    [[nodiscard]] auto order_key() const { return std::tie(start, location_id, entity_class, track_id, camera_id); }

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

inline bool occurrence_less(const Occurrence& a, const Occurrence& b) { return a.order_key() < b.order_key(); }

/// Fraction of the entity box covered by the zone box: area(entity ∩ zone) / area(entity).
inline double overlap_ratio(const Rect& entity_box, const Rect& zone_box) {
    if (!entity_box.valid()) throw DomainError("entity box has zero or invalid area: " + to_string(entity_box));
    if (!zone_box.valid()) throw DomainError("zone box has zero or invalid area: " + to_string(zone_box));
    const double w = std::min(entity_box.right(), zone_box.right()) - std::max(entity_box.x, zone_box.x);
    const double h = std::min(entity_box.bottom(), zone_box.bottom()) - std::max(entity_box.y, zone_box.y);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return std::clamp(w * h / entity_box.area(), 0.0, 1.0);
}

namespace detail {

inline std::int64_t to_micros(double seconds) { return std::llround(seconds * 1e6); }

inline void validate_zones(std::span<const ZoneSpec> zones) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& z : zones) {
        if (z.location_id.empty()) throw ConfigError("zone with empty location_id");
        if (!z.box.valid()) throw DomainError("zone " + z.location_id + " has zero or invalid area: " + to_string(z.box));
        if (!seen.emplace(z.camera_id, z.location_id).second) {
            throw ConfigError(fmt::format("duplicate zone {} on camera {}", z.location_id, z.camera_id));
        }
    }
}

// Per (stream, zone) state machine.
struct ZoneTrackState {
    bool in_visit = false;
    bool emitted = false;
    bool in_run = false;
    Timestamp visit_last;
    Timestamp run_start;
    Timestamp run_last;
};

}  // namespace detail

/// Samples must be time-ordered within each (camera, track) stream; streams may interleave.
inline std::vector<Occurrence> detect_events(std::span<const DetectionSample> samples, std::span<const ZoneSpec> zones,
                                             const DetectionConfig& cfg) {
    cfg.validate();
    detail::validate_zones(zones);
    if (samples.empty()) return {};

    using StreamKey = std::pair<std::string, std::string>;
    std::map<StreamKey, Timestamp> last_time;
    std::set<std::string> cameras;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!s.box.valid()) {
            throw DomainError(fmt::format("sample {} has zero or invalid box {}", i, to_string(s.box)));
        }
        const StreamKey key{s.camera_id, s.stream_key()};
        auto [it, inserted] = last_time.try_emplace(key, s.time);
        if (!inserted) {
            if (s.time < it->second) {
                throw DomainError(fmt::format("samples out of order at position {} (camera {}, track {})", i,
                                              s.camera_id, s.stream_key()));
            }
            it->second = s.time;
        }
        cameras.insert(s.camera_id);
    }

    std::map<std::string, std::vector<const ZoneSpec*>> zones_by_camera;
    for (const auto& z : zones) {
        if (!cameras.contains(z.camera_id)) {
            throw ConfigError(fmt::format("zone {} references camera '{}' absent from the sample stream", z.location_id,
                                          z.camera_id));
        }
        zones_by_camera[z.camera_id].push_back(&z);
    }

    const std::int64_t max_step = detail::to_micros(2.0 * cfg.sample_period);
    const std::int64_t min_run = detail::to_micros(cfg.min_duration);

    std::map<std::tuple<std::string, std::string, std::string>, detail::ZoneTrackState> states;
    std::vector<Occurrence> out;
    for (const auto& s : samples) {
        const auto zit = zones_by_camera.find(s.camera_id);
        if (zit == zones_by_camera.end()) continue;
        for (const ZoneSpec* z : zit->second) {
            auto& st = states[{s.camera_id, s.stream_key(), z->location_id}];
            const double r = overlap_ratio(s.box, z->box);
            if (r <= 0.0) {
                st.in_visit = false;
                st.in_run = false;
                continue;
            }
            if (!st.in_visit || s.time.micros - st.visit_last.micros > max_step) {
                st.in_visit = true;
                st.emitted = false;
                st.in_run = false;
            }
            st.visit_last = s.time;
            if (r < cfg.min_overlap_ratio) {
                st.in_run = false;
                continue;
            }
            if (!st.in_run || s.time.micros - st.run_last.micros > max_step) {
                st.in_run = true;
                st.run_start = s.time;
            }
            st.run_last = s.time;
            if (!st.emitted && st.run_last.micros - st.run_start.micros >= min_run) {
                st.emitted = true;
                out.push_back({z->location_id, s.entity_class, s.track_id, st.run_start, s.camera_id});
            }
        }
    }
    std::sort(out.begin(), out.end(), occurrence_less);
    return out;
}

/// Merges per-camera streams into one time-ordered stream. Occurrences sharing
/// (location, class, track) whose starts lie within `dedup_window` of the last
/// kept one collapse onto the earliest.
inline std::vector<Occurrence> merge_camera_streams(std::span<const std::vector<Occurrence>> streams,
                                                    double dedup_window) {
    if (!(dedup_window >= 0.0)) throw DomainError(fmt::format("dedup_window must be >= 0, got {}", dedup_window));
    std::vector<Occurrence> all;
    for (const auto& s : streams) all.insert(all.end(), s.begin(), s.end());
    std::sort(all.begin(), all.end(), occurrence_less);

    const std::int64_t window = detail::to_micros(dedup_window);
    std::map<std::tuple<std::string, std::string, std::string>, Timestamp> last_kept;
    std::vector<Occurrence> out;
    out.reserve(all.size());
    for (auto& o : all) {
        auto key = std::make_tuple(o.location_id, o.entity_class, o.track_id);
        auto it = last_kept.find(key);
        if (it != last_kept.end() && o.start.micros - it->second.micros <= window) continue;
        last_kept.insert_or_assign(std::move(key), o.start);
        out.push_back(std::move(o));
    }
    return out;
}

/// Runs detection independently per camera, then merges the streams.
inline std::vector<Occurrence> detect_all_cameras(std::span<const DetectionSample> samples,
                                                  std::span<const ZoneSpec> zones, const DetectionConfig& cfg) {
    cfg.validate();
    std::map<std::string, std::vector<DetectionSample>> by_camera;
    for (const auto& s : samples) by_camera[s.camera_id].push_back(s);
    for (const auto& z : zones) {
        if (!by_camera.contains(z.camera_id)) {
            throw ConfigError(fmt::format("zone {} references camera '{}' absent from the sample stream", z.location_id,
                                          z.camera_id));
        }
    }
    std::vector<std::vector<Occurrence>> streams;
    for (const auto& [camera, cam_samples] : by_camera) {
        std::vector<ZoneSpec> cam_zones;
        std::copy_if(zones.begin(), zones.end(), std::back_inserter(cam_zones),
                     [&](const ZoneSpec& z) { return z.camera_id == camera; });
        streams.push_back(detect_events(cam_samples, cam_zones, cfg));
    }
    return merge_camera_streams(streams, cfg.dedup_window);
}

}  // namespace spm
