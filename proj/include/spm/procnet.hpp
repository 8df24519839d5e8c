#pragma once

// Directly-follows process network mined from one cycle's event log.

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "spm/error.hpp"
#include "spm/eventlog.hpp"
#include "spm/matrix.hpp"
#include "spm/text_util.hpp"

namespace spm {

/// Entity role plus location, rendered `role_location` (e.g. RP_s14).
/// The role never contains '_', which keeps the rendering injective.
struct NodeLabel {
    std::string role;
    std::string location;

    NodeLabel() = default;
    NodeLabel(std::string role_, std::string location_) : role(std::move(role_)), location(std::move(location_)) {
        if (role.empty() || location.empty()) throw DomainError("node label needs a role and a location");
        if (role.find('_') != std::string::npos) {
            throw DomainError(fmt::format("role '{}' must not contain '_' (map it with a role table)", role));
        }
    }

    static NodeLabel parse(std::string_view rendered) {
        const auto us = rendered.find('_');
        if (us == std::string_view::npos) {
            throw DomainError(fmt::format("node label '{}' is not of the form role_location", rendered));
        }
        return {std::string(rendered.substr(0, us)), std::string(rendered.substr(us + 1))};
    }

    [[nodiscard]] std::string render() const { return role + "_" + location; }

    friend auto operator<=>(const NodeLabel&, const NodeLabel&) = default;
};

using Labeler = std::function<std::vector<NodeLabel>(const EventRecord&)>;

/// One label per (location, entity) in record order. `role_map` translates
/// entity properties to roles (e.g. worker-right -> RP); unmapped properties
/// are used verbatim.
inline Labeler default_labeler(std::map<std::string, std::string> role_map = {}) {
    return [roles = std::move(role_map)](const EventRecord& r) {
        std::vector<NodeLabel> out;
        for (const auto& g : r.groups) {
            for (const auto& e : g.entities) {
                const auto it = roles.find(e.property);
                out.emplace_back(it == roles.end() ? e.property : it->second, g.location_id);
            }
        }
        return out;
    };
}

struct ProcessNetwork {
    std::vector<NodeLabel> nodes;                                 // first-appearance order
    std::map<std::pair<std::size_t, std::size_t>, double> edges;  // (from, to) -> directly-follows weight
    std::vector<std::size_t> activities;                          // parallel to nodes

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }

    [[nodiscard]] std::size_t index_of(const NodeLabel& n) const {
        const auto it = std::find(nodes.begin(), nodes.end(), n);
        if (it == nodes.end()) throw DomainError("unknown node " + n.render());
        return static_cast<std::size_t>(it - nodes.begin());
    }

    [[nodiscard]] double edge(const NodeLabel& from, const NodeLabel& to) const {
        const auto it = edges.find({index_of(from), index_of(to)});
        return it == edges.end() ? 0.0 : it->second;
    }

    [[nodiscard]] double total_weight() const {
        double s = 0.0;
        for (const auto& [_, w] : edges) s += w;
        return s;
    }
};

inline ProcessNetwork build_dfg(const EventLog& log, const Labeler& labeler = default_labeler()) {
    ProcessNetwork net;
    std::map<NodeLabel, std::size_t> index;
    std::optional<std::size_t> prev;
    for (const auto& r : log.records) {
        for (const auto& label : labeler(r)) {
            auto [it, inserted] = index.try_emplace(label, net.nodes.size());
            if (inserted) {
                net.nodes.push_back(label);
                net.activities.push_back(0);
            }
            const std::size_t cur = it->second;
            ++net.activities[cur];
            if (prev) net.edges[{*prev, cur}] += 1.0;
            prev = cur;
        }
    }
    return net;
}

inline ProcessNetwork build_dfg(const Cycle& cycle, const Labeler& labeler = default_labeler()) {
    return build_dfg(cycle.log, labeler);
}

/// Top-k nodes by activity count, ties broken by rendered label.
inline std::vector<std::pair<NodeLabel, std::size_t>> activity_ranking(const ProcessNetwork& net, std::size_t k) {
    if (k == 0) throw DomainError("k must be >= 1");
    std::vector<std::pair<NodeLabel, std::size_t>> out;
    for (std::size_t i = 0; i < net.size(); ++i) out.emplace_back(net.nodes[i], net.activities[i]);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.render() < b.first.render();
    });
    if (out.size() > k) out.resize(k);
    return out;
}

/// Labeled square link matrix; L(i, j) is the weight of edge i -> j.
struct LinkMatrix {
    std::vector<std::string> labels;
    Matrix L;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
};

inline LinkMatrix link_matrix(const ProcessNetwork& net) {
    if (net.size() == 0) throw DomainError("link matrix of an empty network");
    LinkMatrix lm;
    for (const auto& n : net.nodes) lm.labels.push_back(n.render());
    lm.L = Matrix(net.size(), net.size());
    for (const auto& [key, w] : net.edges) lm.L(key.first, key.second) = w;
    return lm;
}

/// Inverse of link_matrix on edges. Activity counts are not stored in L; when
/// omitted they are estimated as max(in-weight, out-weight), at least 1.
inline ProcessNetwork network_from_link_matrix(const LinkMatrix& lm, std::vector<std::size_t> activities = {}) {
    const std::size_t n = lm.size();
    if (!lm.L.square() || lm.L.rows() != n) throw DomainError("link matrix must be square and match its labels");
    ProcessNetwork net;
    for (const auto& l : lm.labels) net.nodes.push_back(NodeLabel::parse(l));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double w = lm.L(i, j);
            if (w < 0.0) throw DomainError(fmt::format("negative weight at ({}, {})", i, j));
            if (w != 0.0) net.edges[{i, j}] = w;
        }
    }
    if (activities.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            double in = 0.0, out = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                in += lm.L(j, i);
                out += lm.L(i, j);
            }
            activities.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::max(in, out)))));
        }
    }
    if (activities.size() != n) throw DomainError("activity count vector does not match node count");
    net.activities = std::move(activities);
    return net;
}

inline void write_link_matrix_csv(std::ostream& out, const LinkMatrix& lm) {
    for (const auto& l : lm.labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < lm.size(); ++i) {
        out << lm.labels[i];
        for (std::size_t j = 0; j < lm.size(); ++j) out << ',' << fmt::format("{}", lm.L(i, j));
        out << '\n';
    }
}

inline LinkMatrix read_link_matrix_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    LinkMatrix lm;
    std::vector<std::vector<double>> rows;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto f = detail::split(t, ',');
        if (!header) {
            if (f.size() < 2 || !f.front().empty()) throw ParseError("header must start with an empty corner cell", line_no);
            for (std::size_t i = 1; i < f.size(); ++i) {
                if (f[i].empty()) throw ParseError("empty node label", line_no);
                lm.labels.emplace_back(f[i]);
            }
            header = true;
            continue;
        }
        if (f.size() != lm.labels.size() + 1) {
            throw ParseError(fmt::format("expected {} fields, got {}", lm.labels.size() + 1, f.size()), line_no);
        }
        if (rows.size() >= lm.labels.size() || f.front() != lm.labels[rows.size()]) {
            throw ParseError(fmt::format("row label '{}' does not match the column order", f.front()), line_no);
        }
        std::vector<double> row;
        for (std::size_t i = 1; i < f.size(); ++i) {
            const std::string cell(f[i]);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != cell.size() || cell.empty()) throw ParseError(fmt::format("'{}' is not a number", cell), line_no);
            if (v < 0.0) throw ParseError("link weights must be non-negative", line_no);
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (!header) throw ParseError("empty link matrix file");
    if (rows.size() != lm.labels.size()) throw ParseError("link matrix must be square");
    lm.L = Matrix(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.size(); ++j) lm.L(i, j) = rows[i][j];
    }
    return lm;
}

/// Graphviz DOT edge list; node labels carry activity counts.
inline void write_dot(std::ostream& out, const ProcessNetwork& net) {
    out << "digraph process {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        out << fmt::format("  \"{}\" [label=\"{}\\n({})\"];\n", net.nodes[i].render(), net.nodes[i].render(),
                           net.activities[i]);
    }
    for (const auto& [key, w] : net.edges) {
        out << fmt::format("  \"{}\" -> \"{}\" [label=\"{}\", weight={}];\n", net.nodes[key.first].render(),
                           net.nodes[key.second].render(), w, w);
    }
    out << "}\n";
}

}  // namespace spm
