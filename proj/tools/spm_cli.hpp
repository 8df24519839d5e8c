#pragma once

// `spm` command line: tracks -> events -> logs -> cycles -> network -> rankings.
//
// Exit codes: 0 success, 2 usage (bad flag, missing file), 3 data, 4 convergence.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spm/spm.hpp"

namespace spm::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kConvergence = 4 };

/// Missing or unreadable file.
class FileError : public Error {
public:
    using Error::Error;
};

enum class Verbosity { quiet, warn, info };

inline Verbosity verbosity_from_env() {
    const char* v = std::getenv("SPM_LOG_LEVEL");
    if (v == nullptr) return Verbosity::warn;
    const std::string s(v);
    if (s == "quiet" || s == "error" || s == "off") return Verbosity::quiet;
    if (s == "info" || s == "debug") return Verbosity::info;
    return Verbosity::warn;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError(fmt::format("cannot open '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a temporary sibling and rename so readers never see partial files.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path() && !fs::exists(target.parent_path())) {
        throw FileError(fmt::format("directory '{}' does not exist", target.parent_path().string()));
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileError(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        if (!out) throw FileError(fmt::format("write to '{}' failed", tmp.string()));
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw FileError(fmt::format("cannot rename '{}' to '{}': {}", tmp.string(), path, ec.message()));
}

class App {
public:
    App(std::ostream& out, std::ostream& err) : out_(out), err_(err), verbosity_(verbosity_from_env()) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"Spatial process mining toolkit: event detection, process networks and spectral node ranking",
                     "spm"};
        app.require_subcommand(1);
        app.fallthrough();
        app.add_flag("--json", json_, "Machine-readable JSON on stdout");

        add_detect(app);
        add_merge(app);
        add_gantt(app);
        add_cycles(app);
        add_dfg(app);
        add_rank(app);
        add_compare(app);
        add_precision(app);
        add_simulate(app);
        add_tables(app);

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out_ << app.help();
            return kOk;
        } catch (const CLI::CallForAllHelp&) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kOk;
        } catch (const CLI::ParseError& e) {
            err_ << "spm: " << e.what() << '\n';
            return kUsage;
        }

        try {
            action_();
            return kOk;
        } catch (const FileError& e) {
            return fail(kUsage, e.what());
        } catch (const ConvergenceError& e) {
            return fail(kConvergence, e.what());
        } catch (const Error& e) {
            return fail(kData, e.what());
        } catch (const std::exception& e) {
            return fail(kData, e.what());
        }
    }

private:
    // -- shared plumbing -----------------------------------------------------

    int fail(int code, const std::string& what) {
        err_ << fmt::format("spm {}: stage '{}' failed: {}\n", command_, stage_, what);
        return code;
    }

    void stage(std::string name) {
        stage_ = std::move(name);
        if (verbosity_ == Verbosity::info) err_ << fmt::format("spm {}: {}\n", command_, stage_);
    }

    void warn(const std::string& msg) {
        if (verbosity_ != Verbosity::quiet) err_ << "warning: " << msg << '\n';
    }

    void emit(const std::string& path, const std::string& content) {
        if (path.empty() || path == "-") {
            out_ << content;
        } else {
            write_file_atomic(path, content);
        }
    }

    void emit_json(const nlohmann::ordered_json& j) { out_ << j.dump(2) << '\n'; }

    EventLog load_log(const std::string& path) {
        stage("read log " + path);
        const auto text = read_file(path);
        const auto first = text.find_first_not_of(" \t\r\n");
        const bool jsonl = first != std::string::npos && text.compare(first, 2, "{\"") == 0;
        auto parsed = jsonl ? parse_log_jsonl(text) : parse_log(text);
        for (const auto& w : parsed.warnings) warn(path + ": " + w);
        return std::move(parsed.log);
    }

    std::string render_log(const EventLog& log, const std::string& format) const {
        return format == "jsonl" ? serialize_log_jsonl(log) : serialize_log(log);
    }

    struct CycleSelection {
        std::string anchor;
        std::string boundaries;
        std::size_t cycle = 0;
    };

    static void add_cycle_options(CLI::App* sub, CycleSelection& sel) {
        auto* a = sub->add_option("--anchor", sel.anchor, "Regex over location ids / property_location labels");
        auto* b = sub->add_option("--boundaries", sel.boundaries, "Comma-separated cycle start timestamps");
        a->excludes(b);
        sub->add_option("--cycle", sel.cycle, "1-based cycle to analyse (requires --anchor or --boundaries)");
    }

    static std::optional<CycleAnchor> anchor_of(const CycleSelection& sel) {
        if (!sel.anchor.empty()) return CycleAnchor{sel.anchor};
        if (!sel.boundaries.empty()) {
            std::vector<Timestamp> times;
            for (auto part : detail::split(sel.boundaries, ',')) times.push_back(parse_timestamp(part));
            return CycleAnchor{std::move(times)};
        }
        return std::nullopt;
    }

    EventLog select_cycle(const EventLog& log, const CycleSelection& sel) {
        const auto anchor = anchor_of(sel);
        if (!anchor) {
            if (sel.cycle != 0) throw CLI::ValidationError("--cycle", "needs --anchor or --boundaries");
            return log;
        }
        stage("segment cycles");
        auto cycles = segment_cycles(log, *anchor);
        if (sel.cycle == 0 || sel.cycle > cycles.size()) {
            throw DomainError(fmt::format("--cycle must lie in [1, {}]", cycles.size()));
        }
        return std::move(cycles[sel.cycle - 1].log);
    }

    Labeler labeler_from(const std::string& role_map_path) {
        if (role_map_path.empty()) return default_labeler();
        stage("read role map");
        try {
            return default_labeler(nlohmann::json::parse(read_file(role_map_path)).get<std::map<std::string, std::string>>());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("role map: ") + e.what());
        }
    }

    // -- subcommands -----------------------------------------------------------

    void add_detect(CLI::App& app) {
        auto* sub = app.add_subcommand("detect", "Detect zone events in tracks and write an event log");
        sub->add_option("--tracks", detect_.tracks, "Track CSV")->required();
        sub->add_option("--zones", detect_.zones, "Zones JSON")->required();
        sub->add_option("--min-duration", detect_.cfg.min_duration, "Seconds of overlap before an event counts")
            ->capture_default_str();
        sub->add_option("--min-overlap", detect_.cfg.min_overlap_ratio, "Overlap ratio threshold")->capture_default_str();
        sub->add_option("--sample-period", detect_.cfg.sample_period, "Seconds between samples")->capture_default_str();
        sub->add_option("--dedup-window", detect_.cfg.dedup_window, "Cross-camera merge window (s)")
            ->capture_default_str();
        sub->add_option("--label", detect_.label, "Log label, e.g. EL1");
        sub->add_option("--format", detect_.format, "text or jsonl")->check(CLI::IsMember({"text", "jsonl"}));
        sub->add_option("-o,--output", detect_.output, "Output log path (stdout when omitted)");
        sub->callback([this] {
            command_ = "detect";
            action_ = [this] {
                stage("read tracks");
                std::ifstream tin(detect_.tracks);
                if (!tin) throw FileError(fmt::format("cannot open '{}'", detect_.tracks));
                const auto samples = read_tracks_csv(tin);
                stage("read zones");
                std::ifstream zin(detect_.zones);
                if (!zin) throw FileError(fmt::format("cannot open '{}'", detect_.zones));
                const auto zones = read_zones_json(zin);
                stage("detect events");
                const auto occ = detect_all_cameras(samples, zones, detect_.cfg);
                const auto log = occurrences_to_log(occ, detect_.label);
                stage("write log");
                if (json_) {
                    if (!detect_.output.empty()) emit(detect_.output, render_log(log, detect_.format));
                    emit_json({{"samples", samples.size()},
                               {"occurrences", occ.size()},
                               {"records", log.records.size()},
                               {"output", detect_.output}});
                } else {
                    emit(detect_.output, render_log(log, detect_.format));
                }
            };
        });
    }

    void add_merge(CLI::App& app) {
        auto* sub = app.add_subcommand("merge", "Merge per-camera event logs with cross-camera de-duplication");
        sub->add_option("-i,--input", merge_.inputs, "Event logs to merge")->required()->expected(1, -1);
        sub->add_option("--dedup-window", merge_.window, "Seconds within which duplicates collapse")
            ->capture_default_str();
        sub->add_option("--label", merge_.label, "Label of the merged log");
        sub->add_option("--format", merge_.format, "text or jsonl")->check(CLI::IsMember({"text", "jsonl"}));
        sub->add_option("-o,--output", merge_.output, "Output log path");
        sub->callback([this] {
            command_ = "merge";
            action_ = [this] {
                std::vector<std::vector<Occurrence>> streams;
                std::string label = merge_.label;
                for (const auto& p : merge_.inputs) {
                    const auto log = load_log(p);
                    if (label.empty()) label = log.label;
                    streams.push_back(log_to_occurrences(log));
                }
                stage("merge");
                const auto merged = occurrences_to_log(merge_camera_streams(streams, merge_.window), label);
                emit(merge_.output, render_log(merged, merge_.format));
            };
        });
    }

    void add_gantt(CLI::App& app) {
        auto* sub = app.add_subcommand("gantt", "Draw the event-start Gantt chart as SVG");
        sub->add_option("--log", gantt_.log, "Event log")->required();
        sub->add_option("--lane", gantt_.lane, "location or entity")->check(CLI::IsMember({"location", "entity"}));
        sub->add_option("-o,--output", gantt_.output, "SVG path")->required();
        sub->callback([this] {
            command_ = "gantt";
            action_ = [this] {
                const auto log = load_log(gantt_.log);
                stage("draw");
                const auto chart = gantt(log, gantt_.lane == "entity" ? LaneKey::entity : LaneKey::location);
                emit(gantt_.output, chart.svg);
                if (json_) emit_json({{"lanes", chart.lanes}, {"ticks", chart.ticks}, {"output", gantt_.output}});
            };
        });
    }

    void add_cycles(CLI::App& app) {
        auto* sub = app.add_subcommand("cycles", "Segment a log into production cycles and report cycle times");
        sub->add_option("--log", cycles_.log, "Event log")->required();
        add_cycle_options(sub, cycles_.sel);
        sub->add_option("--write-prefix", cycles_.prefix, "Write each cycle to <prefix><index>.log");
        sub->callback([this] {
            command_ = "cycles";
            action_ = [this] {
                const auto log = load_log(cycles_.log);
                const auto anchor = anchor_of(cycles_.sel);
                if (!anchor) throw CLI::ValidationError("cycles", "--anchor or --boundaries is required");
                stage("segment cycles");
                const auto cycles = segment_cycles(log, *anchor);
                auto arr = nlohmann::ordered_json::array();
                std::string text = "cycle  start                 records  cycle_time_s\n";
                for (const auto& c : cycles) {
                    const auto start = format_timestamp(c.log.records.front().timestamp);
                    arr.push_back({{"index", c.index},
                                   {"start", start},
                                   {"records", c.log.records.size()},
                                   {"cycle_time", c.cycle_time}});
                    text += fmt::format("{:<6} {:<21} {:>7}  {:g}\n", c.index, start, c.log.records.size(), c.cycle_time);
                    if (!cycles_.prefix.empty()) {
                        write_file_atomic(fmt::format("{}{}.log", cycles_.prefix, c.index), serialize_log(c.log));
                    }
                }
                if (json_) emit_json({{"cycles", arr}});
                else out_ << text;
            };
        });
    }

    void add_dfg(CLI::App& app) {
        auto* sub = app.add_subcommand("dfg", "Mine the directly-follows network and list node activities");
        sub->add_option("--log", dfg_.log, "Event log")->required();
        add_cycle_options(sub, dfg_.sel);
        sub->add_option("--role-map", dfg_.role_map, "JSON object mapping entity property to role abbreviation");
        sub->add_option("--matrix-out", dfg_.matrix_out, "Write the labeled link matrix CSV");
        sub->add_option("--dot-out", dfg_.dot_out, "Write the network as Graphviz DOT");
        sub->add_option("--k", dfg_.k, "Number of nodes to list")->capture_default_str()->check(CLI::PositiveNumber);
        sub->callback([this] {
            command_ = "dfg";
            action_ = [this] {
                const auto log = select_cycle(load_log(dfg_.log), dfg_.sel);
                const auto labeler = labeler_from(dfg_.role_map);
                stage("mine network");
                const auto net = build_dfg(log, labeler);
                if (net.size() == 0) throw DomainError("log yields no events");
                const auto lm = link_matrix(net);
                if (!dfg_.matrix_out.empty()) {
                    std::ostringstream ss;
                    write_link_matrix_csv(ss, lm);
                    write_file_atomic(dfg_.matrix_out, ss.str());
                }
                if (!dfg_.dot_out.empty()) {
                    std::ostringstream ss;
                    write_dot(ss, net);
                    write_file_atomic(dfg_.dot_out, ss.str());
                }
                const auto top = activity_ranking(net, dfg_.k);
                if (json_) {
                    auto arr = nlohmann::ordered_json::array();
                    for (const auto& [node, count] : top) arr.push_back({{"node", node.render()}, {"activities", count}});
                    emit_json({{"nodes", net.size()}, {"edges", net.edges.size()}, {"ranking", arr}});
                } else {
                    out_ << fmt::format("{} nodes, {} edges\nrank  node          activities\n", net.size(), net.edges.size());
                    for (std::size_t i = 0; i < top.size(); ++i) {
                        out_ << fmt::format("{:<5} {:<13} {}\n", i + 1, top[i].first.render(), top[i].second);
                    }
                }
            };
        });
    }

    void add_rank(CLI::App& app) {
        auto* sub = app.add_subcommand("rank", "Rank network nodes with a spectral algorithm");
        auto* log_opt = sub->add_option("--log", rank_.log, "Event log to mine");
        auto* mat_opt = sub->add_option("--matrix", rank_.matrix, "Labeled link matrix CSV");
        log_opt->excludes(mat_opt);
        add_cycle_options(sub, rank_.sel);
        sub->add_option("--role-map", rank_.role_map, "JSON object mapping entity property to role abbreviation");
        sub->add_option("--algorithm", rank_.algorithm, "gradient, hits_pm_norm or pagerank_norm")
            ->capture_default_str()
            ->check(CLI::IsMember({"gradient", "hits_pm_norm", "hits", "pagerank_norm", "pagerank"}));
        sub->add_option("--kind", rank_.kind, "authority or hub")
            ->capture_default_str()
            ->check(CLI::IsMember({"authority", "hub"}));
        sub->add_option("--alpha", rank_.opt.alpha, "Teleport weight for HITS/PageRank")->capture_default_str();
        sub->add_option("--convention", rank_.convention, "squared, raw or l1")
            ->capture_default_str()
            ->check(CLI::IsMember({"squared", "raw", "l1"}));
        sub->add_option("--k", rank_.k, "Number of nodes to report")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--tol", rank_.opt.tol, "Residual tolerance")->capture_default_str();
        sub->add_option("-o,--output", rank_.output, "Also write the JSON report here");
        sub->callback([this] {
            command_ = "rank";
            action_ = [this] {
                if (rank_.log.empty() == rank_.matrix.empty()) {
                    throw CLI::ValidationError("rank", "exactly one of --log or --matrix is required");
                }
                LinkMatrix lm;
                if (!rank_.matrix.empty()) {
                    stage("read matrix " + rank_.matrix);
                    std::istringstream in(read_file(rank_.matrix));
                    lm = read_link_matrix_csv(in);
                } else {
                    const auto log = select_cycle(load_log(rank_.log), rank_.sel);
                    const auto labeler = labeler_from(rank_.role_map);
                    stage("mine network");
                    lm = link_matrix(build_dfg(log, labeler));
                }
                rank_.opt.algorithm = parse_algorithm(rank_.algorithm);
                rank_.opt.kind = parse_kind(rank_.kind);
                rank_.opt.convention = parse_convention(rank_.convention);
                stage("rank");
                const auto ranked = rank_nodes(lm, rank_.opt, rank_.k);
                const auto report = ranking_report(ranked);
                if (!rank_.output.empty()) write_file_atomic(rank_.output, report.dump(2) + "\n");
                if (json_) {
                    emit_json(report);
                    return;
                }
                const auto& r = ranked.result;
                out_ << fmt::format("{} / {} / {}{}\n", to_string(r.algorithm), to_string(r.kind),
                                    to_string(r.convention), r.alpha ? fmt::format(" / alpha={}", *r.alpha) : "");
                out_ << "rank  node          value\n";
                for (std::size_t i = 0; i < ranked.top.size(); ++i) {
                    out_ << fmt::format("{:<5} {:<13} {:.3e}\n", i + 1, ranked.top[i].first, ranked.top[i].second);
                }
                out_ << fmt::format("entropy {:.4f}  participation_ratio {:.4f}  iterations {}\n",
                                    ranked.stats.shannon_entropy, ranked.stats.participation_ratio, r.iterations);
            };
        });
    }

    std::vector<std::string> load_node_list(const std::string& path) {
        stage("read ranking " + path);
        const auto text = read_file(path);
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            try {
                return report_nodes(nlohmann::json::parse(text));
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(path + ": " + e.what());
            }
        }
        std::vector<std::string> out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            const auto t = detail::trim(line);
            if (!t.empty() && t.front() != '#') out.emplace_back(t);
        }
        return out;
    }

    void add_compare(CLI::App& app) {
        auto* sub = app.add_subcommand("compare", "Compare the top-k node sets of two rankings");
        sub->add_option("--a", compare_.a, "Ranking report JSON or one label per line")->required();
        sub->add_option("--b", compare_.b, "Ranking report JSON or one label per line")->required();
        sub->add_option("--k", compare_.k, "Top-k cut")->capture_default_str()->check(CLI::PositiveNumber);
        sub->callback([this] {
            command_ = "compare";
            action_ = [this] {
                const auto a = load_node_list(compare_.a);
                const auto b = load_node_list(compare_.b);
                stage("compare");
                const auto c = compare_topk(a, b, compare_.k);
                if (json_) {
                    emit_json({{"k", compare_.k},
                               {"common", c.common},
                               {"only_a", c.only_a},
                               {"only_b", c.only_b},
                               {"jaccard", c.jaccard}});
                    return;
                }
                const auto join = [](const std::set<std::string>& s) {
                    std::string o;
                    for (const auto& x : s) o += (o.empty() ? "" : " ") + x;
                    return o;
                };
                out_ << fmt::format("common ({}): {}\nonly_a ({}): {}\nonly_b ({}): {}\njaccard: {:.4f}\n",
                                    c.common.size(), join(c.common), c.only_a.size(), join(c.only_a), c.only_b.size(),
                                    join(c.only_b), c.jaccard);
            };
        });
    }

    void add_precision(CLI::App& app) {
        auto* sub = app.add_subcommand("precision", "Precision of detected events against ground truth");
        sub->add_option("--detected", precision_.detected, "Detected event log")->required();
        sub->add_option("--truth", precision_.truth, "Ground-truth event log")->required();
        sub->add_option("--window", precision_.window, "Match window in seconds")->capture_default_str();
        sub->callback([this] {
            command_ = "precision";
            action_ = [this] {
                const auto det = log_to_occurrences(load_log(precision_.detected));
                const auto truth = log_to_occurrences(load_log(precision_.truth));
                stage("match");
                const double p = precision(det, truth, precision_.window);
                if (json_) emit_json({{"precision", p}, {"detected", det.size()}, {"truth", truth.size()}});
                else out_ << fmt::format("precision {:.4f} ({} detected, {} truth)\n", p, det.size(), truth.size());
            };
        });
    }

    void add_simulate(CLI::App& app) {
        auto* sub = app.add_subcommand("simulate", "Generate synthetic tracks and ground truth from a scenario");
        auto* scen = sub->add_option("--scenario", sim_.scenario, "Scenario JSON");
        auto* ex = sub->add_flag("--example", sim_.example, "Use the built-in two-camera cell scenario");
        scen->excludes(ex);
        sub->add_option("--seed", sim_.seed, "Override the scenario seed");
        sub->add_option("--dropout", sim_.dropout, "Override the dropout probability");
        sub->add_option("--jitter", sim_.jitter, "Override the position jitter (px)");
        sub->add_option("--tracks-out", sim_.tracks_out, "Track CSV output");
        sub->add_option("--truth-out", sim_.truth_out, "Ground-truth event log output");
        sub->add_option("--zones-out", sim_.zones_out, "Zones JSON output");
        sub->add_option("--write-scenario", sim_.scenario_out, "Write the effective scenario JSON");
        sub->add_option("--label", sim_.label, "Label of the ground-truth log");
        sub->callback([this] {
            command_ = "simulate";
            action_ = [this] {
                Scenario sc;
                if (sim_.example) {
                    sc = example_cell_scenario();
                } else if (!sim_.scenario.empty()) {
                    stage("read scenario");
                    try {
                        sc = scenario_from_json(nlohmann::json::parse(read_file(sim_.scenario)));
                    } catch (const nlohmann::json::exception& e) {
                        throw ParseError(std::string("scenario: ") + e.what());
                    }
                } else {
                    throw CLI::ValidationError("simulate", "--scenario or --example is required");
                }
                if (sim_.seed) sc.seed = *sim_.seed;
                if (sim_.dropout) sc.noise.dropout = *sim_.dropout;
                if (sim_.jitter) sc.noise.jitter_px = *sim_.jitter;
                stage("simulate");
                const auto result = simulate(sc);
                stage("write outputs");
                if (!sim_.scenario_out.empty()) write_file_atomic(sim_.scenario_out, scenario_to_json(sc).dump(2) + "\n");
                if (!sim_.tracks_out.empty()) {
                    std::ostringstream ss;
                    write_tracks_csv(ss, result.samples);
                    write_file_atomic(sim_.tracks_out, ss.str());
                }
                if (!sim_.zones_out.empty()) {
                    std::ostringstream ss;
                    write_zones_json(ss, sc.zones);
                    write_file_atomic(sim_.zones_out, ss.str());
                }
                if (!sim_.truth_out.empty()) {
                    write_file_atomic(sim_.truth_out, serialize_log(occurrences_to_log(result.truth, sim_.label)));
                }
                if (json_) {
                    emit_json({{"samples", result.samples.size()},
                               {"truth", result.truth.size()},
                               {"sub_threshold", result.sub_threshold.size()}});
                } else {
                    out_ << fmt::format("{} samples, {} ground-truth events, {} sub-threshold stops\n",
                                        result.samples.size(), result.truth.size(), result.sub_threshold.size());
                }
            };
        });
    }

    void add_tables(CLI::App& app) {
        auto* sub = app.add_subcommand("tables", "Score the built-in 3- and 4-node networks with all algorithms");
        sub->callback([this] {
            command_ = "tables";
            action_ = [this] {
                stage("rank reference networks");
                const std::vector<std::pair<std::string, Matrix>> nets{{"L0", reference::link_matrix_3()},
                                                                      {"L1", reference::link_matrix_4()}};
                nlohmann::ordered_json j;
                for (const auto& [name, L] : nets) {
                    const auto table = reference::score_table(L);
                    nlohmann::ordered_json cols;
                    for (const auto& c : table) cols[c.name] = c.scores;
                    j[name] = {{"nodes", detail::default_labels(L.rows())}, {"columns", cols}};
                    if (json_) continue;
                    out_ << fmt::format("{} ({} nodes, squared components)\n{:<5}", name, L.rows(), "node");
                    for (const auto& c : table) out_ << fmt::format(" {:>19}", c.name);
                    out_ << '\n';
                    for (std::size_t i = 0; i < L.rows(); ++i) {
                        out_ << fmt::format("x{:<4}", i + 1);
                        for (const auto& c : table) out_ << fmt::format(" {:>19.3e}", c.scores[i]);
                        out_ << '\n';
                    }
                    out_ << '\n';
                }
                if (json_) emit_json(j);
            };
        });
    }

    std::ostream& out_;
    std::ostream& err_;
    Verbosity verbosity_;
    bool json_ = false;
    std::string command_ = "?";
    std::string stage_ = "start";
    std::function<void()> action_;

    struct {
        std::string tracks, zones, label, format = "text", output;
        DetectionConfig cfg;
    } detect_;
    struct {
        std::vector<std::string> inputs;
        double window = 2.0;
        std::string label, format = "text", output;
    } merge_;
    struct {
        std::string log, lane = "location", output;
    } gantt_;
    struct {
        std::string log, prefix;
        CycleSelection sel;
    } cycles_;
    struct {
        std::string log, role_map, matrix_out, dot_out;
        CycleSelection sel;
        std::size_t k = 10;
    } dfg_;
    struct {
        std::string log, matrix, role_map, algorithm = "gradient", kind = "authority", convention = "squared", output;
        CycleSelection sel;
        RankOptions opt;
        std::size_t k = 10;
    } rank_;
    struct {
        std::string a, b;
        std::size_t k = 10;
    } compare_;
    struct {
        std::string detected, truth;
        double window = 2.0;
    } precision_;
    struct {
        std::string scenario, tracks_out, truth_out, zones_out, scenario_out, label;
        bool example = false;
        std::optional<std::uint64_t> seed;
        std::optional<double> dropout, jitter;
    } sim_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    App app(out, err);
    return app.run(argc, argv);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"spm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace spm::cli
