#pragma once

// Gantt chart of event starts: one horizontal lane per location (or entity
// class), one vertical tick per event start. Tasks have no duration bars; the
// next start on a lane implies the end of the previous task.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "spm/error.hpp"
#include "spm/eventlog.hpp"

namespace spm {

enum class LaneKey { location, entity };

struct GanttChart {
    std::string svg;
    std::vector<std::string> lanes;
    std::size_t ticks = 0;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline double axis_step(double span) {
    static constexpr std::array<double, 14> steps{1, 2, 5, 10, 15, 30, 60, 120, 300, 600, 900, 1800, 3600, 7200};
    for (double s : steps) {
        if (span / s <= 10.0) return s;
    }
    return std::ceil(span / 10.0 / 3600.0) * 3600.0;
}

}  // namespace detail

inline GanttChart gantt(const EventLog& log, LaneKey key) {
    if (log.empty()) throw DomainError("cannot draw a Gantt chart of an empty log");

    static constexpr std::array<std::string_view, 10> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    struct Tick {
        std::string lane;
        std::string cls;
        Timestamp time;
    };
    std::vector<Tick> ticks;
    std::map<std::string, std::size_t> lane_index;
    std::map<std::string, std::size_t> class_index;
    Timestamp t0 = log.records.front().timestamp;
    Timestamp t1 = t0;
    for (const auto& r : log.records) {
        t0 = std::min(t0, r.timestamp);
        t1 = std::max(t1, r.timestamp);
        for (const auto& g : r.groups) {
            for (const auto& e : g.entities) {
                ticks.push_back({key == LaneKey::location ? g.location_id : e.property, e.property, r.timestamp});
                lane_index.emplace(ticks.back().lane, 0);
                class_index.emplace(e.property, 0);
            }
        }
    }
    GanttChart chart;
    for (auto& [name, idx] : lane_index) {
        idx = chart.lanes.size();
        chart.lanes.push_back(name);
    }
    std::size_t next_class = 0;
    for (auto& [name, idx] : class_index) idx = next_class++;
    chart.ticks = ticks.size();

    constexpr double left = 130.0, top = 40.0, plot_w = 900.0, lane_h = 28.0, right = 170.0;
    const double span = std::max(seconds_between(t1, t0), 1.0);
    const double plot_h = lane_h * static_cast<double>(chart.lanes.size());
    const double width = left + plot_w + right;
    const double height = top + plot_h + 60.0;
    const auto x_of = [&](Timestamp t) { return left + plot_w * seconds_between(t, t0) / span; };

    std::string& s = chart.svg;
    s += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        width, height, width, height);
    s += fmt::format("<title>{} event starts from {}</title>\n", detail::xml_escape(log.label.empty() ? "log" : log.label),
                     format_timestamp(t0));
    s += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += fmt::format("<text x=\"{:.1f}\" y=\"20\" font-weight=\"bold\">{} (start {})</text>\n", left,
                     detail::xml_escape(log.label.empty() ? "Event starts" : log.label), format_timestamp(t0));

    s += "<g class=\"lanes\">\n";
    for (std::size_t i = 0; i < chart.lanes.size(); ++i) {
        const double y = top + lane_h * static_cast<double>(i);
        s += fmt::format("<rect class=\"lane\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"/>\n",
                         left, y, plot_w, lane_h, i % 2 == 0 ? "#f4f4f4" : "#ffffff");
        s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", left - 8.0,
                         y + lane_h * 0.65, detail::xml_escape(chart.lanes[i]));
    }
    s += "</g>\n";

    const double axis_y = top + plot_h;
    const double step = detail::axis_step(span);
    s += "<g class=\"axis\">\n";
    s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n", left, axis_y,
                     left + plot_w, axis_y);
    for (double t = 0.0; t <= span + 1e-9; t += step) {
        const double x = left + plot_w * t / span;
        s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n", x, axis_y, x,
                         axis_y + 5.0);
        s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:g}</text>\n", x, axis_y + 18.0, t);
    }
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">time since start [s]</text>\n",
                     left + plot_w / 2.0, axis_y + 38.0);
    s += "</g>\n";

    s += "<g class=\"events\">\n";
    for (const auto& t : ticks) {
        const double y = top + lane_h * static_cast<double>(lane_index.at(t.lane));
        const double x = x_of(t.time);
        s += fmt::format(
            "<line class=\"event\" x1=\"{:.2f}\" y1=\"{:.1f}\" x2=\"{:.2f}\" y2=\"{:.1f}\" stroke=\"{}\" "
            "stroke-width=\"2\"><title>{} {} {}</title></line>\n",
            x, y + 4.0, x, y + lane_h - 4.0, palette[class_index.at(t.cls) % palette.size()],
            detail::xml_escape(t.lane), detail::xml_escape(t.cls), format_timestamp(t.time));
    }
    s += "</g>\n";

    s += "<g class=\"legend\">\n";
    for (const auto& [name, idx] : class_index) {
        const double y = top + 18.0 * static_cast<double>(idx);
        const double x = left + plot_w + 20.0;
        s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", x, y,
                         palette[idx % palette.size()]);
        s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", x + 18.0, y + 10.0, detail::xml_escape(name));
    }
    s += "</g>\n</svg>\n";
    return chart;
}

}  // namespace spm
