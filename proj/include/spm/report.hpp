#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spm/error.hpp"
#include "spm/ranking.hpp"

namespace spm {

/// {algorithm, alpha, kind, convention, scores:[{node, value}], entropy,
///  participation_ratio, max_score, iterations, residual}
inline nlohmann::ordered_json ranking_report(const RankedNodes& r) {
    nlohmann::ordered_json j;
    j["algorithm"] = std::string(to_string(r.result.algorithm));
    j["alpha"] = r.result.alpha ? nlohmann::ordered_json(*r.result.alpha) : nlohmann::ordered_json(nullptr);
    j["kind"] = std::string(to_string(r.result.kind));
    j["convention"] = std::string(to_string(r.result.convention));
    auto scores = nlohmann::ordered_json::array();
    for (const auto& [node, value] : r.top) scores.push_back({{"node", node}, {"value", value}});
    j["scores"] = std::move(scores);
    j["entropy"] = r.stats.shannon_entropy;
    j["participation_ratio"] = r.stats.participation_ratio;
    j["max_score"] = r.stats.max_score;
    j["iterations"] = r.result.iterations;
    j["residual"] = r.result.residual;
    return j;
}

/// Node order of a ranking report.
inline std::vector<std::string> report_nodes(const nlohmann::json& j) {
    std::vector<std::string> out;
    try {
        for (const auto& s : j.at("scores")) out.push_back(s.at("node").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ranking report: ") + e.what());
    }
    return out;
}

}  // namespace spm
