#pragma once

// Event-log model and its line-oriented text format.
//
//   EL1: {s1, (E1,v1), (E3,h1); s2, (E2,v2), 2024/08/15/18:12:20}
//
// A record lists one or more locations separated by ';', each followed by its
// (entity, property) pairs, and ends with the timestamp. The abbreviated form
// `{v1_s1, 2024/08/15/17:40:50}` fuses property and location in one token.

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spm/error.hpp"
#include "spm/geometry_events.hpp"
#include "spm/text_util.hpp"
#include "spm/timestamp.hpp"

namespace spm {

struct EntityRef {
    std::string id;
    std::string property;

    friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

struct LocationGroup {
    std::string location_id;
    std::vector<EntityRef> entities;

    friend bool operator==(const LocationGroup&, const LocationGroup&) = default;
};

struct EventRecord {
    std::vector<LocationGroup> groups;
    Timestamp timestamp;

    /// Number of (location, entity) events carried by this record.
    [[nodiscard]] std::size_t event_count() const {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.entities.size();
        return n;
    }

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct EventLog {
    std::string label;
    std::vector<EventRecord> records;

    [[nodiscard]] bool empty() const { return records.empty(); }

    friend bool operator==(const EventLog&, const EventLog&) = default;
};

struct ParsedLog {
    EventLog log;
    std::vector<std::string> warnings;
};

namespace detail {

inline bool valid_token(std::string_view s) {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](char c) {
        return c == ',' || c == ';' || c == '(' || c == ')' || c == '{' || c == '}' || c == ' ' || c == '\t' ||
               c == '\n' || c == '\r';
    });
}

inline void validate_record(const EventRecord& r) {
    if (r.groups.empty()) throw DomainError("event record without locations");
    std::set<std::string_view> seen;
    for (const auto& g : r.groups) {
        if (!valid_token(g.location_id)) throw DomainError(fmt::format("invalid location id '{}'", g.location_id));
        if (!seen.insert(g.location_id).second) {
            throw DomainError(fmt::format("location {} repeated within one record", g.location_id));
        }
        if (g.entities.empty()) throw DomainError(fmt::format("location {} lists no entities", g.location_id));
        for (const auto& e : g.entities) {
            if (!valid_token(e.id) || !valid_token(e.property)) {
                throw DomainError(fmt::format("invalid entity ({}, {})", e.id, e.property));
            }
        }
    }
}

// Splits on `sep` outside parentheses.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == sep && depth == 0) {
            out.push_back(trim(s.substr(begin, i - begin)));
            begin = i + 1;
        }
    }
    out.push_back(trim(s.substr(begin)));
    return out;
}

inline LocationGroup parse_group(std::string_view text, std::size_t line) {
    const auto items = split_top(text, ',');
    if (items.front().empty()) throw ParseError("empty location", line);
    LocationGroup g;
    if (items.size() == 1) {
        // Abbreviated `property_location`.
        const auto token = items.front();
        const auto us = token.find('_');
        if (us == std::string_view::npos || us == 0 || us + 1 == token.size()) {
            throw ParseError(fmt::format("'{}' is neither a location with entities nor a property_location token", token),
                             line);
        }
        g.location_id = std::string(token.substr(us + 1));
        g.entities.push_back({std::string(token), std::string(token.substr(0, us))});
    } else {
        g.location_id = std::string(items.front());
        for (std::size_t i = 1; i < items.size(); ++i) {
            auto item = items[i];
            if (item.size() < 2 || item.front() != '(' || item.back() != ')') {
                throw ParseError(fmt::format("expected '(entity,property)', got '{}'", item), line);
            }
            const auto parts = split(item.substr(1, item.size() - 2), ',');
            if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
                throw ParseError(fmt::format("expected '(entity,property)', got '{}'", item), line);
            }
            g.entities.push_back({std::string(parts[0]), std::string(parts[1])});
        }
    }
    if (!valid_token(g.location_id)) throw ParseError(fmt::format("invalid location id '{}'", g.location_id), line);
    for (const auto& e : g.entities) {
        if (!valid_token(e.id) || !valid_token(e.property)) {
            throw ParseError(fmt::format("invalid entity ({}, {})", e.id, e.property), line);
        }
    }
    return g;
}

}  // namespace detail

/// Parses one `[label:] {...}` line. Returns the label (possibly empty) and the record.
inline std::pair<std::string, EventRecord> parse_record_line(std::string_view raw, std::size_t line = 0) {
    std::string cleaned;
    cleaned.reserve(raw.size());
    for (char c : raw) {
        if (c != '$') cleaned += c;
    }
    const std::string_view s = detail::trim(cleaned);
    const auto open = s.find('{');
    if (open == std::string_view::npos || s.back() != '}') throw ParseError("record must be enclosed in { }", line);
    std::string label;
    if (auto prefix = detail::trim(s.substr(0, open)); !prefix.empty()) {
        if (prefix.back() != ':') throw ParseError(fmt::format("expected 'label:' before '{{', got '{}'", prefix), line);
        label = std::string(detail::trim(prefix.substr(0, prefix.size() - 1)));
        if (!detail::valid_token(label)) throw ParseError(fmt::format("invalid log label '{}'", label), line);
    }
    const auto body = s.substr(open + 1, s.size() - open - 2);
    if (body.find_first_of("{}") != std::string_view::npos) throw ParseError("nested braces", line);

    // The timestamp is the last top-level comma-separated field.
    int depth = 0;
    std::size_t last_comma = std::string_view::npos;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '(') ++depth;
        else if (body[i] == ')') --depth;
        else if (body[i] == ',' && depth == 0) last_comma = i;
        if (depth < 0) throw ParseError("unbalanced parentheses", line);
    }
    if (depth != 0) throw ParseError("unbalanced parentheses", line);
    if (last_comma == std::string_view::npos) throw ParseError("record has no timestamp", line);

    EventRecord rec;
    try {
        rec.timestamp = parse_timestamp(detail::trim(body.substr(last_comma + 1)));
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    }
    for (auto group_text : detail::split_top(body.substr(0, last_comma), ';')) {
        rec.groups.push_back(detail::parse_group(group_text, line));
    }
    try {
        detail::validate_record(rec);
    } catch (const DomainError& e) {
        throw ParseError(e.what(), line);
    }
    return {std::move(label), std::move(rec)};
}

/// Decreasing timestamps are tolerated (clock skew) and reported as warnings.
inline ParsedLog parse_log(std::string_view text) {
    ParsedLog out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::optional<Timestamp> prev;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto [label, rec] = parse_record_line(trimmed, line_no);
        if (!label.empty()) {
            if (out.log.label.empty()) {
                out.log.label = label;
            } else if (label != out.log.label) {
                throw ParseError(fmt::format("label '{}' differs from '{}' used earlier in the log", label, out.log.label),
                                 line_no);
            }
        }
        if (prev && rec.timestamp < *prev) {
            out.warnings.push_back(fmt::format("line {}: timestamp {} precedes previous record {}", line_no,
                                               format_timestamp(rec.timestamp), format_timestamp(*prev)));
        }
        prev = rec.timestamp;
        out.log.records.push_back(std::move(rec));
    }
    return out;
}

inline ParsedLog parse_log(std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_log(ss.str());
}

inline std::string serialize_record(const EventRecord& r) {
    std::string out = "{";
    for (std::size_t g = 0; g < r.groups.size(); ++g) {
        if (g > 0) out += "; ";
        out += r.groups[g].location_id;
        for (const auto& e : r.groups[g].entities) out += fmt::format(", ({},{})", e.id, e.property);
    }
    out += ", " + format_timestamp(r.timestamp) + "}";
    return out;
}

/// Canonical text: full form, one record per line.
inline std::string serialize_log(const EventLog& log) {
    std::string out;
    for (const auto& r : log.records) {
        if (!log.label.empty()) out += log.label + ": ";
        out += serialize_record(r);
        out += '\n';
    }
    return out;
}

// JSON-lines mirror: {"label":..., "locations":[{"id":..., "entities":[{"id":..., "prop":...}]}], "ts":...}

inline std::string serialize_log_jsonl(const EventLog& log) {
    std::string out;
    for (const auto& r : log.records) {
        nlohmann::ordered_json j;
        if (!log.label.empty()) j["label"] = log.label;
        auto locations = nlohmann::ordered_json::array();
        for (const auto& g : r.groups) {
            auto entities = nlohmann::ordered_json::array();
            for (const auto& e : g.entities) entities.push_back({{"id", e.id}, {"prop", e.property}});
            locations.push_back({{"id", g.location_id}, {"entities", std::move(entities)}});
        }
        j["locations"] = std::move(locations);
        j["ts"] = format_timestamp(r.timestamp);
        out += j.dump();
        out += '\n';
    }
    return out;
}

inline ParsedLog parse_log_jsonl(std::string_view text) {
    ParsedLog out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<Timestamp> prev;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        EventRecord rec;
        try {
            const auto j = nlohmann::json::parse(line);
            const auto label = j.value("label", std::string{});
            if (!label.empty()) {
                if (out.log.label.empty()) out.log.label = label;
                else if (label != out.log.label) throw ParseError("label differs from earlier records", line_no);
            }
            for (const auto& loc : j.at("locations")) {
                LocationGroup g{loc.at("id").get<std::string>(), {}};
                for (const auto& e : loc.at("entities")) {
                    g.entities.push_back({e.at("id").get<std::string>(), e.at("prop").get<std::string>()});
                }
                rec.groups.push_back(std::move(g));
            }
            rec.timestamp = parse_timestamp(j.at("ts").get<std::string>());
            detail::validate_record(rec);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), line_no);
        } catch (const ParseError& e) {
            if (e.line() != 0) throw;
            throw ParseError(e.what(), line_no);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (prev && rec.timestamp < *prev) {
            out.warnings.push_back(fmt::format("line {}: timestamp {} precedes previous record", line_no,
                                               format_timestamp(rec.timestamp)));
        }
        prev = rec.timestamp;
        out.log.records.push_back(std::move(rec));
    }
    return out;
}

/// Groups occurrences sharing a start time into one record; entity id is the
/// track id (class when untracked), property is the entity class.
inline EventLog occurrences_to_log(std::span<const Occurrence> occurrences, std::string label = {}) {
    std::vector<Occurrence> sorted(occurrences.begin(), occurrences.end());
    std::sort(sorted.begin(), sorted.end(), occurrence_less);
    EventLog log{std::move(label), {}};
    for (const auto& o : sorted) {
        if (log.records.empty() || log.records.back().timestamp != o.start) {
            log.records.push_back({{}, o.start});
        }
        auto& groups = log.records.back().groups;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const LocationGroup& g) { return g.location_id == o.location_id; });
        if (it == groups.end()) {
            groups.push_back({o.location_id, {}});
            it = std::prev(groups.end());
        }
        it->entities.push_back({o.track_id.empty() ? o.entity_class : o.track_id, o.entity_class});
    }
    return log;
}

inline std::vector<Occurrence> log_to_occurrences(const EventLog& log) {
    std::vector<Occurrence> out;
    for (const auto& r : log.records) {
        for (const auto& g : r.groups) {
            for (const auto& e : g.entities) out.push_back({g.location_id, e.property, e.id, r.timestamp, {}});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cycles

struct Cycle {
    std::size_t index = 0;        // 1-based
    std::size_t first_record = 0; // position of the first record in the source log
    EventLog log;
    double cycle_time = 0.0;      // seconds
};

/// Either a regex matched against location ids and `property_location` labels,
/// or explicit boundary timestamps.
using CycleAnchor = std::variant<std::string, std::vector<Timestamp>>;

namespace detail {

inline std::vector<std::string> record_labels(const EventRecord& r) {
    std::vector<std::string> out;
    for (const auto& g : r.groups) {
        out.push_back(g.location_id);
        for (const auto& e : g.entities) out.push_back(e.property + "_" + g.location_id);
    }
    return out;
}

}  // namespace detail

/// Cycle i spans anchor i up to (excluding) anchor i+1 and lasts
/// t(anchor i+1) - t(anchor i). The final cycle runs to the end of the log and
/// lasts from its first to its last record. Records before the first anchor are dropped.
inline std::vector<Cycle> segment_cycles(const EventLog& log, const CycleAnchor& anchor) {
    struct Boundary {
        std::size_t record;
        Timestamp time;
    };
    std::vector<Boundary> bounds;

    if (const auto* pattern = std::get_if<std::string>(&anchor)) {
        std::regex re;
        try {
            re = std::regex(*pattern);
        } catch (const std::regex_error& e) {
            throw DomainError(fmt::format("invalid anchor pattern '{}': {}", *pattern, e.what()));
        }
        std::set<std::string> available;
        for (std::size_t i = 0; i < log.records.size(); ++i) {
            const auto labels = detail::record_labels(log.records[i]);
            available.insert(labels.begin(), labels.end());
            if (std::any_of(labels.begin(), labels.end(), [&](const std::string& l) { return std::regex_match(l, re); })) {
                bounds.push_back({i, log.records[i].timestamp});
            }
        }
        if (bounds.empty()) {
            std::string list;
            for (const auto& l : available) list += (list.empty() ? "" : ", ") + l;
            throw DomainError(fmt::format("anchor pattern '{}' matches no record; available labels: {}", *pattern, list));
        }
    } else {
        const auto& times = std::get<std::vector<Timestamp>>(anchor);
        if (times.empty()) throw DomainError("no cycle boundaries given");
        if (!std::is_sorted(times.begin(), times.end())) throw DomainError("cycle boundaries must be sorted");
        for (const auto t : times) {
            const auto it = std::find_if(log.records.begin(), log.records.end(),
                                         [&](const EventRecord& r) { return r.timestamp >= t; });
            bounds.push_back({static_cast<std::size_t>(it - log.records.begin()), t});
        }
    }

    std::vector<Cycle> cycles;
    for (std::size_t c = 0; c < bounds.size(); ++c) {
        const std::size_t begin = bounds[c].record;
        const std::size_t end = c + 1 < bounds.size() ? bounds[c + 1].record : log.records.size();
        if (begin >= end) {
            throw DomainError(fmt::format("cycle boundary {} selects no records", format_timestamp(bounds[c].time)));
        }
        Cycle cy;
        cy.index = c + 1;
        cy.first_record = begin;
        cy.log.label = fmt::format("EL{}", c + 1);
        cy.log.records.assign(log.records.begin() + static_cast<std::ptrdiff_t>(begin),
                              log.records.begin() + static_cast<std::ptrdiff_t>(end));
        if (c + 1 < bounds.size()) {
            cy.cycle_time = seconds_between(bounds[c + 1].time, bounds[c].time);
        } else {
            cy.cycle_time = seconds_between(cy.log.records.back().timestamp, cy.log.records.front().timestamp);
        }
        cy.cycle_time = std::max(cy.cycle_time, 0.0);
        cycles.push_back(std::move(cy));
    }
    return cycles;
}

// ---------------------------------------------------------------------------
// Precision

/// Matched / detected. A detection matches the earliest still-unmatched truth
/// occurrence with the same (location, class) within `match_window` seconds;
/// processing detections in time order this greedy rule gives a maximum matching.
inline double precision(std::span<const Occurrence> detected, std::span<const Occurrence> truth, double match_window) {
    if (!(match_window >= 0.0)) throw DomainError(fmt::format("match_window must be >= 0, got {}", match_window));
    if (detected.empty()) return 1.0;

    using Key = std::pair<std::string, std::string>;
    std::map<Key, std::vector<Timestamp>> truth_by_key;
    for (const auto& t : truth) truth_by_key[{t.location_id, t.entity_class}].push_back(t.start);
    std::map<Key, std::vector<Timestamp>> det_by_key;
    for (const auto& d : detected) det_by_key[{d.location_id, d.entity_class}].push_back(d.start);

    const auto window = std::llround(match_window * 1e6);
    std::size_t matched = 0;
    for (auto& [key, dets] : det_by_key) {
        auto it = truth_by_key.find(key);
        if (it == truth_by_key.end()) continue;
        auto& truths = it->second;
        std::sort(dets.begin(), dets.end());
        std::sort(truths.begin(), truths.end());
        std::size_t next = 0;  // truths before `next` are matched or out of reach
        for (const auto d : dets) {
            while (next < truths.size() && truths[next].micros < d.micros - window) ++next;
            if (next < truths.size() && truths[next].micros <= d.micros + window) {
                ++matched;
                ++next;
            }
        }
    }
    return static_cast<double>(matched) / static_cast<double>(detected.size());
}

}  // namespace spm
