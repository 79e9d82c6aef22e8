#pragma once

// Command-line front end. dispatch() runs one subcommand and writes a JSON
// (or CSV) report; tools/spingap.cpp is a thin main() around it.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bounds.hpp"
#include "counting.hpp"
#include "exact.hpp"
#include "generators.hpp"
#include "glauber.hpp"
#include "graph.hpp"
#include "report.hpp"
#include "spectral.hpp"
#include "spin_system.hpp"

namespace spingap::cli {

struct Options {
    // model and I/O
    std::string graph_path, config_path, model, out_path, format = "json";
    double lambda = std::numeric_limits<double>::quiet_NaN();
    int k = -1;
    std::uint64_t seed = 1, steps = 100000, burnin = 1000, cap = kDefaultEnumerationCap;
    std::size_t matrix_cap = kDefaultMatrixCap;
    int chains = 8;
    // command specific
    int s_level = -1, r_level = -1;
    double eps = 0.01;
    std::uint64_t max_steps = 0;
    std::string start, init = "greedy", method = "telescope", marginals = "exact", order;
    int levels = 0;
    bool swap = false, reduce = false;
    // bounds
    std::string formula, kind, etas;
    int n = -1, max_degree = -1, ell = -1, size = 1;
    double c = 0.0, eta = 0.0, theta = 0.1, c_ell = 1.0, tau_rel = 1.0, min_mu = 1.0, warm_ratio = 1.0, delta = 0.1;
    // gen
    std::string family;
    int degree = 3, a = 1, b = 1, rows = 1, cols = 1, leaves = 1;
    double d = 1.0;
};

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("bad integer '" + item + "' in " + what);
        }
    }
    return out;
}

inline std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("bad number '" + item + "' in " + what);
        }
    }
    return out;
}

struct Instance {
    Graph graph;          // the input graph
    SpinSystem system;    // on the input graph, or its line graph for matchings
    ModelConfig config;
};

inline Graph read_graph(const std::string& path) {
    if (path.empty()) throw UsageError("--graph is required for this command");
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open graph file '" + path + "'");
    return load_graph(in);
}

inline Instance load_instance(const Options& o) {
    Graph g = read_graph(o.graph_path);
    ModelConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw UsageError("cannot open config file '" + o.config_path + "'");
        cfg = parse_model_config(in);
    }
    if (!o.model.empty()) cfg.model = o.model;
    if (!std::isnan(o.lambda)) cfg.lambda = o.lambda;
    if (o.k >= 0) cfg.k = o.k;
    if (cfg.model == "hardcore") return {g, hardcore_system(g, cfg.lambda), cfg};
    if (cfg.model == "coloring") return {g, coloring_system(g, cfg.k), cfg};
    if (cfg.model == "matching") return {g, monomer_dimer_system(g, cfg.lambda), cfg};
    throw UsageError("--model must be hardcore, coloring, or matching");
}

inline Json model_json(const Instance& inst) {
    Json j{{"model", inst.config.model}, {"n", inst.system.n()}, {"q", inst.system.q()},
           {"Delta", max_degree(inst.system.graph())}};
    if (inst.config.model == "coloring") j["k"] = inst.config.k;
    else j["lambda"] = inst.config.lambda;
    return j;
}

// Shortest text that reads back to the same double.
inline std::string real_field(double x) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

struct CommandOutput {
    Json results;
    std::string csv;  // empty when the command has no tabular form
};

// ---------------------------------------------------------------------------

inline CommandOutput cmd_exact(const Options& o) {
    Instance inst = load_instance(o);
    StateSpace space = enumerate(inst.system, o.cap);
    Json marg = Json::array();
    Pinning none(inst.system.n());
    for (Vertex v = 0; v < inst.system.n(); ++v) {
        Json row = Json::array();
        for (Spin x = 0; x < inst.system.q(); ++x) row.push_back(marginal(space, none, v, x));
        marg.push_back(row);
    }
    Json r = model_json(inst);
    r["logZ"] = space.log_z();
    r["Z"] = std::exp(space.log_z());
    r["state_count"] = space.size();
    r["marginals"] = marg;
    if (inst.config.model == "matching") {
        Json em = Json::array();
        for (auto [u, v] : inst.system.edge_map()) em.push_back(Json::array({u, v}));
        r["edge_map"] = em;
    }
    return {r, {}};
}

inline Json bounds_for(const Instance& inst, const SIProfile& prof, const SpectrumReport& spectrum) {
    const int n = inst.system.n();
    Json j = Json::object();
    try {
        j["alo_bound"] = bounds::alo_gap_bound(prof.etas);
        j["alo_holds"] = spectrum.gap >= j["alo_bound"].get<double>() - 1e-9;
    } catch (const InvalidInput& e) {
        j["alo_bound"] = nullptr;
        j["alo_note"] = e.what();
    }
    if (prof.fitted_eta < 1) {
        j["alo_bound_CH"] = bounds::alo_gap_bound_ch(n, prof.fitted_C, prof.fitted_eta);
        auto mb = bounds::main_gap_bound(n, max_degree(inst.system.graph()), prof.fitted_C, prof.fitted_eta);
        j["main_bound"] = Json{{"value", mb.value}, {"precondition_met", mb.precondition_met}, {"constant_c", "nominal (1)"}};
    } else {
        j["alo_bound_CH"] = nullptr;
        j["main_bound"] = nullptr;
        j["note"] = "fitted eta >= 1: (C, eta) bounds not applicable";
    }
    return j;
}

inline CommandOutput cmd_gap(const Options& o) {
    Instance inst = load_instance(o);
    StateSpace space = enumerate(inst.system, o.cap);
    Kernel k = glauber_matrix(inst.system, space, nullptr, o.matrix_cap);
    SpectrumReport spectrum = spectral_gap(k);
    Json r = model_json(inst);
    r["spectrum"] = to_json(spectrum);
    r["gap"] = spectrum.gap;
    r["tau_rel"] = number(spectrum.relaxation_time);
    if (spectrum.reducible)
        r["diagnosis"] = "reducible: " + std::to_string(spectrum.communicating_classes) + " communicating classes";
    else
        r["C_1"] = 1.0 / (inst.system.n() * spectrum.gap);
    if (inst.system.n() >= 2 && inst.system.n() <= 10) {
        SIProfile prof = si_profile(space, {.local_walks = false});
        r["eta"] = prof.fitted_eta;
        r["C"] = prof.fitted_C;
        r["bounds"] = bounds_for(inst, prof, spectrum);
    }
    std::string csv = "index,eigenvalue\n";
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
        csv += std::to_string(i) + "," + real_field(spectrum.eigenvalues[i]) + "\n";
    return {r, csv};
}

inline CommandOutput cmd_si(const Options& o) {
    Instance inst = load_instance(o);
    StateSpace space = enumerate(inst.system, o.cap);
    SIProfile prof = si_profile(space, {.seed = o.seed});
    Json r = model_json(inst);
    r["profile"] = to_json(prof);
    const int n = inst.system.n();
    Json theory = Json::object();
    if (inst.config.model == "hardcore") {
        double eta_model = inst.config.lambda / (1.0 + inst.config.lambda);
        bool holds = true;
        for (std::size_t kk = 0; kk < prof.etas.size(); ++kk)
            holds = holds && prof.etas[kk] <= eta_model * (n - static_cast<int>(kk) - 1) + 1e-9;
        theory["eta_model"] = eta_model;
        theory["eta_model_holds"] = holds;
        int delta = max_degree(inst.graph);
        if (delta >= 3) {
            theory["lambda_c"] = bounds::lambda_critical(delta);
            theory["below_lambda_c"] = inst.config.lambda <= bounds::lambda_critical(delta);
        }
    } else if (inst.config.model == "matching") {
        int delta = max_degree(inst.graph);
        double c_model = 2.0 * std::sqrt(1.0 + delta);
        bool holds = true;
        for (double e : prof.etas) holds = holds && e <= c_model + 1e-9;
        theory["C_model"] = c_model;
        theory["C_model_holds"] = holds;
    } else {
        bounds::RegimeParams p;
        p.max_degree = max_degree(inst.graph);
        p.k = inst.config.k;
        p.n = n;
        p.delta = o.delta;
        theory["regime"] = to_json(bounds::regime_checks("coloring", p));
    }
    r["theory"] = theory;
    std::string csv = "k,eta_k,zeta_k,pinnings_checked\n";
    for (std::size_t kk = 0; kk < prof.etas.size(); ++kk)
        csv += std::to_string(kk) + "," + real_field(prof.etas[kk]) + "," + real_field(prof.zetas[kk]) + "," +
               std::to_string(prof.pinnings_checked[kk]) + "\n";
    return {r, csv};
}

inline CommandOutput cmd_downup(const Options& o) {
    Instance inst = load_instance(o);
    if (o.s_level < 0 || o.r_level < 0) throw UsageError("downup needs --s and --r");
    StateSpace space = enumerate(inst.system, o.cap);
    auto du = down_up_matrix(space, o.s_level, o.r_level, 6, o.matrix_cap);
    Json r = model_json(inst);
    r["s"] = o.s_level;
    r["r"] = o.r_level;
    r["spectrum"] = to_json(du.spectrum);
    r["gap"] = du.spectrum.gap;
    SIProfile prof = si_profile(space, {.local_walks = false});
    r["C"] = prof.fitted_C;
    r["eta"] = prof.fitted_eta;
    if (prof.fitted_eta < 1) {
        double kappa = bounds::kappa_rs(inst.system.n(), o.r_level, o.s_level, prof.fitted_C, prof.fitted_eta);
        r["kappa"] = kappa;
        r["kappa_holds"] = du.spectrum.gap >= kappa - 1e-9;
    } else {
        r["kappa"] = nullptr;
    }
    return {r, {}};
}

inline CommandOutput cmd_bounds(const Options& o) {
    const std::string& f = o.formula;
    Json r{{"formula", f}};
    auto need = [](bool ok, const char* what) {
        if (!ok) throw UsageError(what);
    };
    if (f == "alo") {
        need(!o.etas.empty(), "--etas is required");
        r["gap_bound"] = bounds::alo_gap_bound(parse_real_list(o.etas, "--etas"));
    } else if (f == "alo_ch") {
        need(o.n > 0, "--n is required");
        r["gap_bound"] = bounds::alo_gap_bound_ch(o.n, o.c, o.eta);
    } else if (f == "main") {
        need(o.n > 0 && o.max_degree >= 0, "--n and --delta-cap are required");
        auto mb = bounds::main_gap_bound(o.n, o.max_degree, o.c, o.eta);
        r["gap_bound"] = mb.value;
        r["precondition_met"] = mb.precondition_met;
        r["constant_c"] = "nominal (1)";
    } else if (f == "kappa") {
        need(o.n > 0 && o.s_level >= 0 && o.r_level >= 0, "--n, --s and --r are required");
        r["kappa"] = bounds::kappa_rs(o.n, o.r_level, o.s_level, o.c, o.eta);
    } else if (f == "bf") {
        need(o.n > 0, "--n is required");
        auto bf = bounds::block_factorization(o.n, o.theta, o.c, o.eta);
        r["ell"] = bf.ell;
        r["C_ell"] = bf.exact;
        r["C_ell_simple"] = bf.simple;
        r["simple_applicable"] = bf.simple_applicable;
    } else if (f == "at_chain") {
        need(o.ell > 0 && o.max_degree >= 1, "--ell and --delta-cap are required");
        r["C_1_chain"] = bounds::at_chain_bound(o.c_ell, o.c, o.eta, o.max_degree, o.theta, o.ell);
        r["constant_C37"] = "nominal (1)";
    } else if (f == "component_tail") {
        need(o.n > 0 && o.max_degree >= 0, "--n and --delta-cap are required");
        r["tail_bound"] = bounds::component_tail_bound(o.n, o.max_degree, o.theta, o.size);
    } else if (f == "lambda_c") {
        need(o.max_degree >= 0, "--delta-cap is required");
        r["lambda_c"] = bounds::lambda_critical(o.max_degree);
    } else if (f == "alpha_star") {
        r["alpha_star"] = bounds::alpha_star();
    } else if (f == "mixing") {
        auto m = bounds::mixing_relations(o.tau_rel, o.eps, o.min_mu, o.warm_ratio);
        r["warm_bound"] = m.warm_bound;
        r["worst_bound"] = m.worst_bound;
        r["lower_bound"] = m.lower_bound;
    } else if (f == "regime") {
        bounds::RegimeParams p;
        p.max_degree = o.max_degree;
        p.delta = o.delta;
        p.k = o.k;
        p.n = o.n;
        p.lambda = std::isnan(o.lambda) ? 1.0 : o.lambda;
        r["regime"] = to_json(bounds::regime_checks(o.kind, p));
    } else {
        throw UsageError("unknown --formula '" + f +
                         "' (alo, alo_ch, main, kappa, bf, at_chain, component_tail, lambda_c, alpha_star, mixing, regime)");
    }
    return {r, {}};
}

inline Configuration parse_configuration(const std::string& text, int n) {
    auto xs = parse_int_list(text, "configuration");
    if (static_cast<int>(xs.size()) != n) throw UsageError("configuration must list " + std::to_string(n) + " spins");
    return xs;
}

inline CommandOutput cmd_sample(const Options& o) {
    Instance inst = load_instance(o);
    InitialState init = GreedyFeasible{};
    if (o.init == "warm") init = WarmStart{};
    else if (o.init != "greedy") init = parse_configuration(o.init, inst.system.n());
    auto sum = run_chain(inst.system, init, o.steps, o.seed, nullptr, {o.burnin, o.cap});
    Json r = model_json(inst);
    r["steps"] = sum.steps;
    r["recorded"] = sum.recorded;
    r["initial"] = sum.initial;
    r["final"] = sum.final_state;
    r["frequency"] = sum.frequency;
    std::optional<StateSpace> space;
    try {
        space.emplace(enumerate(inst.system, o.cap));
    } catch (const CapExceeded&) {
    }
    const bool compare = space && sum.recorded > 0;
    std::string csv = "vertex,spin,frequency,exact\n";
    double worst = 0.0;
    Json exact = Json::array();
    Pinning none(inst.system.n());
    for (Vertex v = 0; v < inst.system.n(); ++v) {
        Json row = Json::array();
        for (Spin x = 0; x < inst.system.q(); ++x) {
            double e = space ? marginal(*space, none, v, x) : std::numeric_limits<double>::quiet_NaN();
            row.push_back(number(e));
            if (compare) worst = std::max(worst, std::abs(e - sum.frequency[v][x]));
            csv += std::to_string(v) + "," + std::to_string(x) + "," + real_field(sum.frequency[v][x]) + "," +
                   (space ? real_field(e) : std::string("")) + "\n";
        }
        exact.push_back(row);
    }
    if (space) {
        r["exact_marginals"] = exact;
        if (compare) r["max_abs_deviation"] = worst;
    }
    return {r, csv};
}

inline CommandOutput cmd_mix(const Options& o) {
    Instance inst = load_instance(o);
    StateSpace space = enumerate(inst.system, o.cap);
    Kernel k = glauber_matrix(inst.system, space, nullptr, o.matrix_cap);
    SpectrumReport spectrum = spectral_gap(k);
    if (spectrum.reducible) throw InvalidInput("Glauber chain is reducible; mixing is undefined");
    auto rel = bounds::mixing_relations(spectrum.relaxation_time, o.eps, space.min_probability());
    const auto t_up = static_cast<std::uint64_t>(std::ceil(rel.worst_bound));
    const auto t_lo = static_cast<std::uint64_t>(std::max(0.0, std::ceil(rel.lower_bound - 1.0)));
    double tv_up = worst_case_tv(k, t_up), tv_lo = worst_case_tv(k, t_lo);
    std::size_t start = 0;
    if (!o.start.empty()) {
        auto idx = space.index_of(parse_configuration(o.start, inst.system.n()));
        if (!idx) throw InvalidInput("start configuration is infeasible");
        start = *idx;
    }
    std::uint64_t horizon = o.max_steps ? o.max_steps : t_up;
    auto from_start = tv_curve_from(k, start, horizon);
    std::vector<double> worst;
    if (space.size() <= 400) worst = worst_case_tv_curve(k, horizon);
    Json r = model_json(inst);
    r["gap"] = spectrum.gap;
    r["tau_rel"] = spectrum.relaxation_time;
    r["eps"] = o.eps;
    r["min_mu"] = space.min_probability();
    r["relations"] = Json{{"warm_bound", rel.warm_bound}, {"worst_bound", rel.worst_bound}, {"lower_bound", rel.lower_bound}};
    r["t_upper"] = t_up;
    r["tv_at_t_upper"] = tv_up;
    r["upper_holds"] = tv_up <= o.eps;
    r["t_lower"] = t_lo;
    r["tv_at_t_lower"] = tv_lo;
    r["lower_holds"] = tv_lo > o.eps;
    r["start"] = space.state(start);
    r["tv_from_start"] = from_start;
    if (!worst.empty()) {
        r["tv_worst"] = worst;
        for (std::size_t t = 0; t < worst.size(); ++t)
            if (worst[t] <= o.eps) {
                r["t_mix"] = t;
                break;
            }
    }
    std::string csv = "step,tv_start,tv_worst\n";
    for (std::size_t t = 0; t < from_start.size(); ++t)
        csv += std::to_string(t) + "," + real_field(from_start[t]) + "," +
               (worst.empty() ? std::string("") : real_field(worst[t])) + "\n";
    return {r, csv};
}

inline TelescopeOptions telescope_options(const Options& o) {
    TelescopeOptions t;
    if (o.marginals == "exact") t.mode = MarginalMode::Exact;
    else if (o.marginals == "mcmc") t.mode = MarginalMode::Mcmc;
    else throw UsageError("--marginals must be exact or mcmc");
    t.mcmc = {o.steps, o.burnin, o.chains, o.seed};
    t.cap = o.cap;
    return t;
}

inline void attach_oracle(Json& r, const Graph& g, double lambda, double estimate, std::uint64_t cap) {
    try {
        double exact = enumerate(hardcore_system(g, lambda), cap).log_z();
        r["exact_logZ"] = exact;
        r["relative_error"] = std::expm1(estimate - exact);
    } catch (const CapExceeded&) {
        r["exact_logZ"] = nullptr;
    }
}

inline CommandOutput cmd_count(const Options& o) {
    Instance inst = load_instance(o);
    if (inst.config.model == "coloring") throw UsageError("count supports hardcore and matching models");
    const Graph& g = inst.system.graph();
    Json r = model_json(inst);
    r["method"] = o.method;
    double estimate = 0.0;
    if (o.method == "telescope") {
        std::vector<Vertex> order;
        if (o.order.empty())
            for (Vertex v = 0; v < g.vertex_count(); ++v) order.push_back(v);
        else
            order = parse_int_list(o.order, "--order");
        auto trace = telescoping_partition(g, inst.config.lambda, order, telescope_options(o));
        r["trace"] = to_json(trace);
        estimate = trace.log_z;
    } else if (o.method == "anneal") {
        AnnealOptions a;
        a.levels = o.levels;
        a.steps_per_level = o.steps;
        a.burnin = o.burnin;
        a.chains = o.chains;
        a.seed = o.seed;
        auto res = annealing_partition(g, inst.config.lambda, a);
        r["anneal"] = to_json(res);
        estimate = res.log_z;
    } else {
        throw UsageError("--method must be telescope or anneal");
    }
    r["logZ"] = estimate;
    attach_oracle(r, g, inst.config.lambda, estimate, o.cap);
    return {r, {}};
}

inline CommandOutput cmd_bis(const Options& o) {
    Graph g = read_graph(o.graph_path);
    auto part = bipartite_partition(g);
    if (!part) throw InvalidInput("graph is not bipartite");
    if (o.swap) std::swap(part->left, part->right);
    Json r{{"n", g.vertex_count()}, {"L", part->left}, {"R", part->right}};
    r["check"] = to_json(bis_condition_check(g, *part));
    if (o.reduce) {
        double lambda = std::isnan(o.lambda) ? 1.0 : o.lambda;
        auto trace = fptas_reduction(g, *part, lambda, telescope_options(o));
        r["lambda"] = lambda;
        r["reduction"] = to_json(trace);
        r["logZ"] = trace.log_z;
        attach_oracle(r, g, lambda, trace.log_z, o.cap);
    }
    return {r, {}};
}

inline CommandOutput cmd_gen(const Options& o, std::ostream& out, bool& wrote_graph) {
    GraphParams p;
    const std::string& f = o.family;
    if (f == "cycle" || f == "path" || f == "complete") p["n"] = o.n;
    else if (f == "complete_bipartite") p = {{"a", o.a}, {"b", o.b}};
    else if (f == "star") p["leaves"] = o.leaves;
    else if (f == "grid") p = {{"rows", o.rows}, {"cols", o.cols}};
    else if (f == "random_regular") p = {{"n", o.n}, {"degree", o.degree}};
    else if (f == "gnp") p = {{"n", o.n}, {"d", o.d}};
    else throw UsageError("unknown --kind '" + f + "'");
    Graph g = generate(f, p, o.seed);
    if (o.out_path.empty()) {
        save_graph(g, out);
        wrote_graph = true;
        return {};
    }
    std::ofstream file(o.out_path);
    if (!file) throw UsageError("cannot write '" + o.out_path + "'");
    save_graph(g, file);
    return {Json{{"kind", f}, {"n", g.vertex_count()}, {"m", g.edge_count()}, {"path", o.out_path}}, {}};
}

// ---------------------------------------------------------------------------

inline void add_model_flags(CLI::App* sub, Options& o) {
    sub->add_option("--graph", o.graph_path, "edge-list file");
    sub->add_option("--config", o.config_path, "model-config document");
    sub->add_option("--model", o.model, "hardcore | coloring | matching");
    sub->add_option("--lambda", o.lambda, "fugacity");
    sub->add_option("--k", o.k, "number of colors");
    sub->add_option("--cap", o.cap, "enumeration cap");
    sub->add_option("--matrix-cap", o.matrix_cap, "dense matrix cap");
}

inline void add_run_flags(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed);
    sub->add_option("--steps", o.steps);
    sub->add_option("--burnin", o.burnin);
    sub->add_option("--chains", o.chains);
}

inline void add_output_flags(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out_path, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

inline Json echo_inputs(const CLI::App* sub) {
    Json j = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        auto res = opt->results();
        std::string name = opt->get_name();
        if (name.rfind("--", 0) == 0) name = name.substr(2);
        if (res.size() == 1) j[name] = res.front();
        else if (res.empty()) j[name] = true;
        else j[name] = res;
    }
    return j;
}

// Runs one subcommand. Returns the process exit code.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spin-system spectral toolkit", "spingap"};
    app.require_subcommand(1);
    Options o;
    std::map<std::string, std::function<CommandOutput()>> handlers;
    bool wrote_graph = false;

    auto model_cmd = [&](const std::string& name, const std::string& help, auto fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_model_flags(sub, o);
        add_run_flags(sub, o);
        add_output_flags(sub, o);
        handlers[name] = [fn, &o] { return fn(o); };
        return sub;
    };
    model_cmd("exact", "partition function and marginals by enumeration", cmd_exact);
    model_cmd("gap", "exact Glauber spectrum and gap bounds", cmd_gap);
    auto* si = model_cmd("si", "spectral-independence profile", cmd_si);
    si->add_option("--delta", o.delta, "slack delta for regime thresholds");
    auto* du = model_cmd("downup", "exact s<->r down-up gap vs kappa", cmd_downup);
    du->add_option("--s", o.s_level)->required();
    du->add_option("--r", o.r_level)->required();
    auto* sample = model_cmd("sample", "run Glauber dynamics", cmd_sample);
    sample->add_option("--init", o.init, "greedy | warm | comma-separated spins");
    auto* mix = model_cmd("mix", "exact TV decay by kernel powering", cmd_mix);
    mix->add_option("--eps", o.eps);
    mix->add_option("--start", o.start, "comma-separated spins");
    mix->add_option("--max-steps", o.max_steps);
    auto* count = model_cmd("count", "partition-function estimation", cmd_count);
    count->add_option("--method", o.method, "telescope | anneal");
    count->add_option("--marginals", o.marginals, "exact | mcmc");
    count->add_option("--order", o.order, "comma-separated vertex order");
    count->add_option("--levels", o.levels, "annealing levels (0 = default)");

    CLI::App* bis = app.add_subcommand("bis-check", "bipartite degree condition");
    bis->add_option("--graph", o.graph_path)->required();
    bis->add_option("--lambda", o.lambda);
    bis->add_option("--cap", o.cap);
    bis->add_flag("--swap", o.swap, "exchange L and R");
    bis->add_flag("--reduce", o.reduce, "also run the telescoping reduction over L");
    bis->add_option("--marginals", o.marginals, "exact | mcmc");
    add_run_flags(bis, o);
    add_output_flags(bis, o);
    handlers["bis-check"] = [&o] { return cmd_bis(o); };

    CLI::App* bnd = app.add_subcommand("bounds", "evaluate closed-form bounds");
    bnd->add_option("--formula", o.formula)->required();
    bnd->add_option("--n", o.n);
    bnd->add_option("--delta-cap", o.max_degree, "maximum degree");
    bnd->add_option("--C", o.c);
    bnd->add_option("--eta", o.eta);
    bnd->add_option("--etas", o.etas, "comma-separated eta_0..eta_{n-2}");
    bnd->add_option("--s", o.s_level);
    bnd->add_option("--r", o.r_level);
    bnd->add_option("--ell", o.ell);
    bnd->add_option("--theta", o.theta);
    bnd->add_option("--c-ell", o.c_ell);
    bnd->add_option("--size", o.size, "component size k");
    bnd->add_option("--tau-rel", o.tau_rel);
    bnd->add_option("--eps", o.eps);
    bnd->add_option("--min-mu", o.min_mu);
    bnd->add_option("--warm-ratio", o.warm_ratio);
    bnd->add_option("--kind", o.kind, "regime kind");
    bnd->add_option("--delta", o.delta);
    bnd->add_option("--k", o.k);
    bnd->add_option("--lambda", o.lambda);
    add_output_flags(bnd, o);
    handlers["bounds"] = [&o] { return cmd_bounds(o); };

    CLI::App* gen = app.add_subcommand("gen", "generate a graph");
    gen->add_option("--kind", o.family)->required();
    gen->add_option("--n", o.n);
    gen->add_option("--degree", o.degree);
    gen->add_option("--d", o.d);
    gen->add_option("--a", o.a);
    gen->add_option("--b", o.b);
    gen->add_option("--rows", o.rows);
    gen->add_option("--cols", o.cols);
    gen->add_option("--leaves", o.leaves);
    gen->add_option("--seed", o.seed);
    gen->add_option("--out", o.out_path);
    handlers["gen"] = [&] { return cmd_gen(o, out, wrote_graph); };

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        auto t0 = std::chrono::steady_clock::now();
        CommandOutput res = handlers.at(name)();
        if (wrote_graph) return 0;
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string body;
        if (o.format == "csv" && name != "gen") {
            if (res.csv.empty()) throw UsageError("command '" + name + "' has no CSV form");
            body = res.csv;
        } else {
            Json report{{"command", name}, {"inputs", echo_inputs(chosen)}, {"seed", o.seed},
                        {"results", res.results}, {"version", kVersion}, {"wall_time_s", wall}};
            body = report.dump(2) + "\n";
        }
        if (!o.out_path.empty() && name != "gen") {
            std::ofstream file(o.out_path);
            if (!file) throw UsageError("cannot write '" + o.out_path + "'");
            file << body;
        } else {
            out << body;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace spingap::cli
