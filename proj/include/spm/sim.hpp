#pragma once

// Synthetic cell-production scenario: actors walk (or drive) between zone
// centers at constant speed, dwell at each stop, and are observed by cameras
// as fixed-size boxes with optional jitter and dropout. The ground truth holds
// one occurrence per stop long enough to count as a task.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spm/error.hpp"
#include "spm/geometry_events.hpp"
#include "spm/timestamp.hpp"
#include "spm/track_io.hpp"

namespace spm {

struct CameraView {
    std::string camera_id;
    Rect coverage;
};

struct ItineraryStop {
    std::string location_id;
    double dwell = 0.0;  // seconds
};

struct Actor {
    std::string entity_class;
    std::string track_id;
    double box_width = 30.0;
    double box_height = 30.0;
    std::vector<ItineraryStop> itinerary;
};

struct NoiseSpec {
    double jitter_px = 0.0;
    double dropout = 0.0;  // per (sample, camera)
};

struct Scenario {
    std::vector<ZoneSpec> zones;
    std::vector<CameraView> cameras;  // empty: every zone camera sees everything
    std::vector<Actor> actors;
    NoiseSpec noise;
    double sample_period = 0.5;
    double speed = 400.0;       // px/s
    double min_duration = 3.0;  // stops shorter than this are not tasks
    std::uint64_t seed = 0;
    Timestamp origin;

    void validate() const {
        if (zones.empty()) throw ConfigError("scenario has no zones");
        detail::validate_zones(zones);
        if (!(sample_period > 0.0)) throw ConfigError("sample_period must be > 0");
        if (!(speed > 0.0)) throw ConfigError("speed must be > 0");
        if (!(min_duration >= 0.0)) throw ConfigError("min_duration must be >= 0");
        if (!(noise.jitter_px >= 0.0)) throw ConfigError("jitter must be >= 0");
        if (!(noise.dropout >= 0.0 && noise.dropout <= 1.0)) throw ConfigError("dropout probability must lie in [0, 1]");
        std::set<std::string> locations;
        for (const auto& z : zones) locations.insert(z.location_id);
        std::set<std::string> tracks;
        for (const auto& a : actors) {
            if (a.entity_class.empty() || a.track_id.empty()) throw ConfigError("actor needs an entity_class and a track_id");
            if (!tracks.insert(a.track_id).second) throw ConfigError("duplicate track_id " + a.track_id);
            if (!(a.box_width > 0.0 && a.box_height > 0.0)) throw ConfigError("actor box must have positive size");
            if (a.itinerary.empty()) throw ConfigError("actor " + a.track_id + " has an empty itinerary");
            for (std::size_t i = 0; i < a.itinerary.size(); ++i) {
                const auto& s = a.itinerary[i];
                if (!locations.contains(s.location_id)) {
                    throw ConfigError(fmt::format("actor {} stop {} references unknown location '{}'", a.track_id, i,
                                                  s.location_id));
                }
                if (!(s.dwell > 0.0)) throw ConfigError(fmt::format("actor {} stop {}: dwell must be > 0", a.track_id, i));
                if (i > 0 && a.itinerary[i - 1].location_id == s.location_id) {
                    throw ConfigError(fmt::format("actor {} repeats location {} on consecutive stops", a.track_id,
                                                  s.location_id));
                }
            }
        }
        for (const auto& c : cameras) {
            if (!c.coverage.valid()) throw ConfigError("camera " + c.camera_id + " has an invalid coverage rectangle");
        }
    }
};

struct SimulationOutput {
    std::vector<DetectionSample> samples;  // time-ordered
    std::vector<Occurrence> truth;         // one per stop with dwell >= min_duration
    std::vector<Occurrence> sub_threshold; // stops too short to be tasks
};

namespace detail {

struct Point {
    double x;
    double y;
};

struct Leg {
    double t_begin;  // seconds from origin
    double t_end;
    Point from;
    Point to;
};

inline Point center(const Rect& r) { return {r.x + r.width / 2.0, r.y + r.height / 2.0}; }

}  // namespace detail

inline SimulationOutput simulate(const Scenario& sc) {
    sc.validate();
    std::map<std::string, detail::Point> centers;
    for (const auto& z : sc.zones) centers.try_emplace(z.location_id, detail::center(z.box));

    std::vector<CameraView> cameras = sc.cameras;
    if (cameras.empty()) {
        std::set<std::string> ids;
        for (const auto& z : sc.zones) ids.insert(z.camera_id);
        for (const auto& id : ids) cameras.push_back({id, Rect{-1e9, -1e9, 2e9, 2e9}});
    }

    std::mt19937_64 rng(sc.seed);
    std::normal_distribution<double> jitter(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SimulationOutput out;
    const auto at = [&](double seconds) { return Timestamp{sc.origin.micros + std::llround(seconds * 1e6)}; };
    for (const auto& a : sc.actors) {
        // Piecewise-linear trajectory: dwell legs have from == to.
        std::vector<detail::Leg> legs;
        double t = 0.0;
        for (std::size_t i = 0; i < a.itinerary.size(); ++i) {
            const auto& stop = a.itinerary[i];
            const auto c = centers.at(stop.location_id);
            if (i > 0) {
                const auto p = legs.back().to;
                const double travel = std::hypot(c.x - p.x, c.y - p.y) / sc.speed;
                legs.push_back({t, t + travel, p, c});
                t += travel;
            }
            Occurrence o{stop.location_id, a.entity_class, a.track_id, at(t), {}};
            (stop.dwell >= sc.min_duration ? out.truth : out.sub_threshold).push_back(std::move(o));
            legs.push_back({t, t + stop.dwell, c, c});
            t += stop.dwell;
        }
        const double end = t;

        std::size_t leg = 0;
        for (std::int64_t k = 0;; ++k) {
            const double ts = static_cast<double>(k) * sc.sample_period;
            if (ts > end + 1e-9) break;
            while (leg + 1 < legs.size() && ts > legs[leg].t_end) ++leg;
            const auto& L = legs[leg];
            const double span = L.t_end - L.t_begin;
            const double f = span > 0.0 ? std::clamp((ts - L.t_begin) / span, 0.0, 1.0) : 0.0;
            double cx = L.from.x + f * (L.to.x - L.from.x);
            double cy = L.from.y + f * (L.to.y - L.from.y);
            if (sc.noise.jitter_px > 0.0) {
                cx += sc.noise.jitter_px * jitter(rng);
                cy += sc.noise.jitter_px * jitter(rng);
            }
            for (const auto& cam : cameras) {
                const bool dropped = sc.noise.dropout > 0.0 && unit(rng) < sc.noise.dropout;
                if (dropped) continue;
                if (cx < cam.coverage.x || cx > cam.coverage.right() || cy < cam.coverage.y || cy > cam.coverage.bottom()) {
                    continue;
                }
                out.samples.push_back({cam.camera_id, at(ts), a.entity_class, a.track_id,
                                       Rect{cx - a.box_width / 2.0, cy - a.box_height / 2.0, a.box_width, a.box_height}});
            }
        }
    }
    std::stable_sort(out.samples.begin(), out.samples.end(), [](const DetectionSample& x, const DetectionSample& y) {
        return std::tie(x.time, x.camera_id, x.track_id) < std::tie(y.time, y.camera_id, y.track_id);
    });
    std::sort(out.truth.begin(), out.truth.end(), occurrence_less);
    std::sort(out.sub_threshold.begin(), out.sub_threshold.end(), occurrence_less);
    return out;
}

// ---------------------------------------------------------------------------
// Scenario JSON

inline nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
    nlohmann::ordered_json j;
    j["zones"] = nlohmann::json(sc.zones);
    auto cams = nlohmann::ordered_json::array();
    for (const auto& c : sc.cameras) {
        cams.push_back({{"camera_id", c.camera_id},
                        {"x", c.coverage.x},
                        {"y", c.coverage.y},
                        {"w", c.coverage.width},
                        {"h", c.coverage.height}});
    }
    j["cameras"] = std::move(cams);
    auto actors = nlohmann::ordered_json::array();
    for (const auto& a : sc.actors) {
        auto it = nlohmann::ordered_json::array();
        for (const auto& s : a.itinerary) it.push_back({{"location_id", s.location_id}, {"dwell", s.dwell}});
        actors.push_back({{"entity_class", a.entity_class},
                          {"track_id", a.track_id},
                          {"box_w", a.box_width},
                          {"box_h", a.box_height},
                          {"itinerary", std::move(it)}});
    }
    j["actors"] = std::move(actors);
    j["noise"] = {{"jitter_px", sc.noise.jitter_px}, {"dropout", sc.noise.dropout}};
    j["sample_period"] = sc.sample_period;
    j["speed"] = sc.speed;
    j["min_duration"] = sc.min_duration;
    j["seed"] = sc.seed;
    j["origin"] = format_timestamp(sc.origin);
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    try {
        sc.zones = j.at("zones").get<std::vector<ZoneSpec>>();
        for (const auto& c : j.value("cameras", nlohmann::json::array())) {
            sc.cameras.push_back({c.at("camera_id").get<std::string>(),
                                  Rect{c.at("x").get<double>(), c.at("y").get<double>(), c.at("w").get<double>(),
                                       c.at("h").get<double>()}});
        }
        for (const auto& a : j.at("actors")) {
            Actor actor;
            actor.entity_class = a.at("entity_class").get<std::string>();
            actor.track_id = a.at("track_id").get<std::string>();
            actor.box_width = a.value("box_w", 30.0);
            actor.box_height = a.value("box_h", 30.0);
            for (const auto& s : a.at("itinerary")) {
                actor.itinerary.push_back({s.at("location_id").get<std::string>(), s.at("dwell").get<double>()});
            }
            sc.actors.push_back(std::move(actor));
        }
        if (j.contains("noise")) {
            sc.noise.jitter_px = j["noise"].value("jitter_px", 0.0);
            sc.noise.dropout = j["noise"].value("dropout", 0.0);
        }
        sc.sample_period = j.value("sample_period", sc.sample_period);
        sc.speed = j.value("speed", sc.speed);
        sc.min_duration = j.value("min_duration", sc.min_duration);
        sc.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("origin")) sc.origin = parse_time_field(j["origin"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    sc.validate();
    return sc;
}

/// Two-camera cell with 19 work areas: collaborative k1-k3 in the middle
/// (seen by both cameras), the right worker's s11-s17 and the left worker's
/// s21-s29, plus two workers and two AGVs on fixed rounds.
inline Scenario example_cell_scenario(std::uint64_t seed = 1) {
    Scenario sc;
    sc.seed = seed;
    sc.origin = parse_timestamp("2024/08/15/10:00:00");
    const auto zone = [&](std::string id, std::string cam, double x, double y, std::string cat) {
        sc.zones.push_back({std::move(id), std::move(cam), Rect{x, y, 80.0, 80.0}, std::move(cat)});
    };
    for (int i = 0; i < 3; ++i) {
        const double y = 140.0 + 180.0 * i;
        zone(fmt::format("k{}", i + 1), "cam1", 600.0, y, "collaborative");
        zone(fmt::format("k{}", i + 1), "cam2", 600.0, y, "collaborative");
    }
    for (int i = 0; i < 7; ++i) {
        zone(fmt::format("s1{}", i + 1), "cam2", i < 4 ? 1000.0 : 1150.0, 60.0 + 160.0 * (i % 4), "individual");
    }
    for (int i = 0; i < 9; ++i) {
        zone(fmt::format("s2{}", i + 1), "cam1", i < 5 ? 80.0 : 260.0, 40.0 + 140.0 * (i % 5), "individual");
    }
    sc.cameras = {{"cam1", Rect{0.0, 0.0, 720.0, 760.0}}, {"cam2", Rect{560.0, 0.0, 720.0, 760.0}}};

    sc.actors.push_back({"worker-right", "W1", 36.0, 36.0,
                         {{"s11", 40}, {"s14", 35}, {"k3", 60}, {"s15", 30}, {"s11", 25}, {"s17", 20}, {"k3", 30},
                          {"s14", 25}}});
    sc.actors.push_back({"worker-left", "W2", 36.0, 36.0,
                         {{"s21", 30}, {"s22", 25}, {"k3", 40}, {"s27", 35}, {"s23", 30}, {"k1", 20}, {"s21", 25}}});
    sc.actors.push_back({"big-AGV", "V1", 60.0, 44.0, {{"s23", 45}, {"k2", 30}, {"s12", 40}, {"k2", 20}, {"s23", 30}}});
    sc.actors.push_back({"small-AGV", "V2", 48.0, 36.0, {{"s14", 50}, {"k3", 25}, {"s26", 35}, {"k1", 20}, {"s14", 40}}});
    return sc;
}

}  // namespace spm
