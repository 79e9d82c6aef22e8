#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bounds.hpp"
#include "counting.hpp"
#include "spectral.hpp"
#include "spin_system.hpp"

namespace spingap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

// JSON has no infinity; unbounded quantities are written as the string "inf".
inline Json number(double x) {
    if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
    if (std::isnan(x)) return Json(nullptr);
    return Json(x);
}

inline Json to_json(const SpectrumReport& r) {
    Json ev = Json::array();
    for (double x : r.eigenvalues) ev.push_back(x);
    return Json{{"eigenvalues", ev},
                {"gap", r.gap},
                {"tau_rel", number(r.relaxation_time)},
                {"state_count", r.state_count},
                {"reversibility_residual", r.reversibility_residual},
                {"reducible", r.reducible},
                {"communicating_classes", r.communicating_classes}};
}

inline Json to_json(const Pinning& p) {
    Json j = Json::object();
    for (Vertex v = 0; v < p.n(); ++v)
        if (p.is_pinned(v)) j[std::to_string(v)] = p.spin(v);
    return j;
}

inline Json to_json(const SIProfile& prof) {
    Json levels = Json::array();
    for (std::size_t k = 0; k < prof.etas.size(); ++k)
        levels.push_back(Json{{"k", k},
                              {"eta_k", prof.etas[k]},
                              {"zeta_k", prof.zetas.empty() ? Json(nullptr) : number(prof.zetas[k])},
                              {"pinnings_checked", prof.pinnings_checked[k]},
                              {"witness", to_json(prof.witnesses[k])}});
    return Json{{"levels", levels},
                {"C", prof.fitted_C},
                {"eta", prof.fitted_eta},
                {"max_imag", prof.max_imag},
                {"local_walk_deviation", prof.local_walk_deviation},
                {"local_walk_deviation_flag", prof.local_walk_deviation > 1e-8},
                {"exhaustive", prof.exhaustive}};
}

inline Json to_json(const TelescopeTrace& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps)
        steps.push_back(Json{{"vertex", s.vertex},
                             {"residual_size", s.residual_size},
                             {"marginal", s.marginal},
                             {"standard_error", s.standard_error},
                             {"log_z_delta", s.log_z_delta}});
    return Json{{"steps", steps},
                {"skipped", t.skipped},
                {"final_residual", t.residuals.back()},
                {"final_edgeless", t.final_edgeless},
                {"log_z_final", t.log_z_final},
                {"logZ", t.log_z},
                {"logZ_standard_error", t.log_z_standard_error}};
}

inline Json to_json(const AnnealResult& a) {
    Json levels = Json::array();
    for (const auto& l : a.levels)
        levels.push_back(Json{{"lambda_from", l.lambda_from},
                              {"lambda_to", l.lambda_to},
                              {"ratio", l.ratio},
                              {"standard_error", l.standard_error},
                              {"flagged", l.flagged}});
    return Json{{"lambda0", a.lambda0},
                {"log_z0", a.log_z0},
                {"anchor_remainder", a.anchor_remainder},
                {"levels", levels},
                {"logZ", a.log_z},
                {"logZ_standard_error", a.log_z_standard_error}};
}

inline Json to_json(const BisReport& b) {
    Json left = Json::array(), right = Json::array();
    for (auto [v, d] : b.left_degrees) left.push_back(Json{{"vertex", v}, {"degree", d}});
    for (auto [v, d] : b.right_degrees) right.push_back(Json{{"vertex", v}, {"degree", d}});
    return Json{{"Delta_L", b.max_degree_left},
                {"delta_R", b.min_degree_right ? Json(*b.min_degree_right) : Json(nullptr)},
                {"threshold", b.threshold},
                {"pass", b.pass},
                {"left_degrees", left},
                {"right_degrees", right}};
}

inline Json to_json(const bounds::RegimeReport& r) {
    Json values = Json::object(), flags = Json::object(), notes = Json::object();
    for (const auto& [k, v] : r.values) values[k] = v;
    for (const auto& [k, v] : r.flags) flags[k] = v;
    for (const auto& [k, v] : r.notes) notes[k] = v;
    return Json{{"kind", r.kind}, {"values", values}, {"flags", flags}, {"notes", notes}};
}

// Model-config document: "key = value" lines, '#' comments.
struct ModelConfig {
    std::string model = "hardcore";
    double lambda = 1.0;
    int k = 3;
};

inline ModelConfig parse_model_config(std::istream& in, ModelConfig cfg = {}) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        try {
            if (key == "model") {
                if (value != "hardcore" && value != "coloring" && value != "matching")
                    throw ParseError("model must be hardcore, coloring, or matching", line_no);
                cfg.model = value;
            } else if (key == "lambda") {
                std::size_t used = 0;
                cfg.lambda = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } else if (key == "k") {
                std::size_t used = 0;
                cfg.k = std::stoi(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } else {
                throw ParseError("unknown key '" + key + "'", line_no);
            }
        } catch (const std::logic_error&) {
            throw ParseError("bad value '" + value + "' for key '" + key + "'", line_no);
        }
    }
    return cfg;
}

inline ModelConfig parse_model_config(const std::string& text, ModelConfig cfg = {}) {
    std::istringstream in(text);
    return parse_model_config(in, cfg);
}

}  // namespace spingap
