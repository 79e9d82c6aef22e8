#pragma once

// Partition-function estimation for the hardcore model.
//
// Self-reducibility: with G_0 = G and G_i = G_{i-1} minus the closed
// neighborhood of v_i, every step satisfies
//     mu_{G_{i-1}}(v_i occupied) * Z(G_{i-1}) = lambda * Z(G_i),
// so  log Z(G) = m log(lambda) + log Z(G_m) - sum_i log mu_{G_{i-1}}(v_i).
// The product form sometimes quoted for this telescoping, Z(G) =
// prod_i mu_{G_{i-1}}(v_i) * Z(G_m), inverts the marginals and drops the
// lambda^m factor; it does not reproduce Z even on a single vertex.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "glauber.hpp"
#include "graph.hpp"
#include "spin_system.hpp"

namespace spingap {

enum class MarginalMode { Exact, Mcmc };

struct TelescopeStep {
    Vertex vertex;             // original id
    std::size_t residual_size; // |V(G_{i-1})|
    double marginal;           // mu_{G_{i-1}, lambda}(v_i)
    double standard_error;     // 0 in exact mode
    double log_z_delta;        // log Z(G_{i-1}) - log Z(G_i) = log(lambda) - log(marginal)
};

struct TelescopeTrace {
    std::vector<TelescopeStep> steps;
    std::vector<Vertex> skipped;        // order entries already removed by an earlier neighborhood
    std::vector<VertexSet> residuals;   // G_0, G_1, ..., G_m as original vertex sets
    double log_z_final = 0.0;           // log Z(G_m)
    bool final_edgeless = false;
    double log_z = 0.0;
    double log_z_standard_error = 0.0;  // delta method over the per-step estimates
};

struct TelescopeOptions {
    MarginalMode mode = MarginalMode::Exact;
    EstimateParams mcmc;
    std::uint64_t cap = kDefaultEnumerationCap;
};

inline double exact_occupation(const Graph& g, double lambda, Vertex v, std::uint64_t cap) {
    StateSpace space = enumerate(hardcore_system(g, lambda), cap);
    return marginal(space, Pinning(g.vertex_count()), v, 1);
}

inline TelescopeTrace telescoping_partition(const Graph& g, double lambda, const std::vector<Vertex>& order,
                                            const TelescopeOptions& opt = {}) {
    if (!(lambda > 0)) throw InvalidInput("fugacity lambda must be positive");
    const int n = g.vertex_count();
    std::vector<char> alive(static_cast<std::size_t>(n), 1), listed(static_cast<std::size_t>(n), 0);
    for (Vertex v : order) {
        if (v < 0 || v >= n) throw InvalidInput("order lists a vertex outside the graph");
        if (listed[v]) throw InvalidInput("order lists vertex " + std::to_string(v) + " twice");
        listed[v] = 1;
    }
    auto alive_set = [&] {
        VertexSet out;
        for (Vertex v = 0; v < n; ++v)
            if (alive[v]) out.push_back(v);
        return out;
    };
    TelescopeTrace trace;
    trace.residuals.push_back(alive_set());
    double var_log = 0.0;
    for (Vertex v : order) {
        if (!alive[v]) {
            trace.skipped.push_back(v);
            continue;
        }
        InducedSubgraph sub = induced_subgraph(g, trace.residuals.back());
        Vertex local = static_cast<Vertex>(std::lower_bound(sub.original.begin(), sub.original.end(), v) - sub.original.begin());
        TelescopeStep step{v, sub.original.size(), 0.0, 0.0, 0.0};
        if (opt.mode == MarginalMode::Exact) {
            step.marginal = exact_occupation(sub.graph, lambda, local, opt.cap);
        } else {
            EstimateParams p = opt.mcmc;
            p.seed = opt.mcmc.seed * 1000003ULL + static_cast<std::uint64_t>(trace.steps.size());
            auto est = estimate_marginal(hardcore_system(sub.graph, lambda), Pinning(sub.graph.vertex_count()), local, 1, p);
            step.marginal = est.estimate;
            step.standard_error = est.standard_error;
        }
        if (!(step.marginal > 0 && step.marginal < 1))
            throw InvalidInput("marginal estimate " + std::to_string(step.marginal) + " at vertex " + std::to_string(v) +
                               " is outside (0, 1)");
        step.log_z_delta = std::log(lambda) - std::log(step.marginal);
        var_log += (step.standard_error / step.marginal) * (step.standard_error / step.marginal);
        alive[v] = 0;
        for (Vertex w : g.neighbors(v)) alive[w] = 0;
        trace.steps.push_back(step);
        trace.residuals.push_back(alive_set());
    }
    InducedSubgraph last = induced_subgraph(g, trace.residuals.back());
    trace.final_edgeless = last.graph.edge_count() == 0;
    trace.log_z_final = trace.final_edgeless
                            ? static_cast<double>(last.graph.vertex_count()) * std::log1p(lambda)
                            : enumerate(hardcore_system(last.graph, lambda), opt.cap).log_z();
    trace.log_z = trace.log_z_final;
    for (const auto& s : trace.steps) trace.log_z += s.log_z_delta;
    trace.log_z_standard_error = std::sqrt(var_log);
    return trace;
}

// ---------------------------------------------------------------------------

struct BisReport {
    int max_degree_left = 0;               // Delta_L (0 when L is empty)
    std::optional<int> min_degree_right;   // delta_R (nullopt when R is empty)
    double threshold = 1.0;                // 2^{Delta_L}
    bool pass = false;
    std::vector<std::pair<Vertex, int>> left_degrees, right_degrees;
};

inline BisReport bis_condition_check(const Graph& g, const BipartitePartition& part) {
    if (!is_valid_partition(g, part)) throw InvalidInput("not a valid bipartition of the graph");
    BisReport rep;
    for (Vertex v : part.left) {
        rep.left_degrees.emplace_back(v, g.degree(v));
        rep.max_degree_left = std::max(rep.max_degree_left, g.degree(v));
    }
    for (Vertex v : part.right) {
        rep.right_degrees.emplace_back(v, g.degree(v));
        rep.min_degree_right = rep.min_degree_right ? std::min(*rep.min_degree_right, g.degree(v)) : g.degree(v);
    }
    rep.threshold = std::ldexp(1.0, rep.max_degree_left);
    rep.pass = !rep.min_degree_right || *rep.min_degree_right >= rep.threshold;
    return rep;
}

// Telescoping over the left side in increasing id order; the final residual
// graph is edgeless.
inline TelescopeTrace fptas_reduction(const Graph& g, const BipartitePartition& part, double lambda,
                                      const TelescopeOptions& opt = {}) {
    if (!is_valid_partition(g, part)) throw InvalidInput("not a valid bipartition of the graph");
    VertexSet order = part.left;
    std::sort(order.begin(), order.end());
    return telescoping_partition(g, lambda, order, opt);
}

// ---------------------------------------------------------------------------
// Simulated annealing with a fixed schedule geometric in (1 + lambda).

struct AnnealOptions {
    int levels = 0;  // 0: ceil(8 n ln(1 + lambda_target))
    std::uint64_t steps_per_level = 20000;
    std::uint64_t burnin = 500;
    int chains = 8;
    std::uint64_t seed = 1;
    double rse_threshold = 0.05;  // flag levels with larger relative standard error
};

struct AnnealLevel {
    double lambda_from, lambda_to;
    double ratio;           // estimate of Z(lambda_to) / Z(lambda_from)
    double standard_error;
    bool flagged;
};

struct AnnealResult {
    double lambda0 = 0.0;
    double log_z0 = 0.0;           // log(1 + n lambda0)
    double anchor_remainder = 0.0; // relative: ((1+l0)^n - 1 - n l0) / (1 + n l0)
    std::vector<AnnealLevel> levels;
    double log_z = 0.0;
    double log_z_standard_error = 0.0;
};

struct LevelRatio {
    double ratio;
    double standard_error;
};

// E_{mu_from}[(lambda_to / lambda_from)^{|occupied|}] over independent
// chains; chain states are advanced in place.
inline LevelRatio anneal_level_ratio(const Graph& g, double lambda_from, double lambda_to,
                                     std::vector<ChainState>& chains, std::uint64_t burnin, std::uint64_t steps) {
    SpinSystem s = hardcore_system(g, lambda_from);
    GlauberSampler sampler(s);
    const int n = g.vertex_count();
    std::vector<double> powers(static_cast<std::size_t>(n) + 1, 1.0);
    const double r = lambda_to / lambda_from;
    for (int k = 1; k <= n; ++k) powers[k] = powers[k - 1] * r;
    std::vector<double> means;
    for (auto& st : chains) {
        for (std::uint64_t t = 0; t < burnin; ++t) sampler.step(st);
        int occupied = 0;
        for (Spin x : st.configuration) occupied += x;
        double acc = 0.0;
        for (std::uint64_t t = 0; t < steps; ++t) {
            auto up = sampler.step(st);
            occupied += st.configuration[up.vertex] - up.old_spin;
            acc += powers[occupied];
        }
        means.push_back(steps ? acc / static_cast<double>(steps) : 1.0);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(means.size());
    return {mean, jackknife_standard_error(means)};
}

inline AnnealResult annealing_partition(const Graph& g, double lambda_target, const AnnealOptions& opt = {}) {
    if (!(lambda_target > 0)) throw InvalidInput("target fugacity must be positive");
    if (opt.chains < 1) throw InvalidInput("need at least one chain");
    const int n = g.vertex_count();
    if (n < 1) throw InvalidInput("graph has no vertices");
    AnnealResult res;
    res.lambda0 = std::min(lambda_target, 0.01 / n);
    res.log_z0 = std::log1p(n * res.lambda0);
    res.anchor_remainder = (std::pow(1.0 + res.lambda0, n) - 1.0 - n * res.lambda0) / (1.0 + n * res.lambda0);
    int levels = opt.levels > 0 ? opt.levels : static_cast<int>(std::ceil(8.0 * n * std::log1p(lambda_target)));
    if (res.lambda0 >= lambda_target) levels = 0;
    std::vector<double> schedule{res.lambda0};
    const double growth = std::pow((1.0 + lambda_target) / (1.0 + res.lambda0), 1.0 / std::max(levels, 1));
    for (int i = 1; i < levels; ++i) schedule.push_back((1.0 + res.lambda0) * std::pow(growth, i) - 1.0);
    if (levels > 0) schedule.push_back(lambda_target);

    std::vector<ChainState> chains;
    for (int c = 0; c < opt.chains; ++c)
        chains.push_back({Configuration(static_cast<std::size_t>(n), 0), 0, make_stream(opt.seed, static_cast<std::uint64_t>(c))});
    double var_log = 0.0;
    res.log_z = res.log_z0;
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
        auto lr = anneal_level_ratio(g, schedule[i], schedule[i + 1], chains, opt.burnin, opt.steps_per_level);
        double rse = lr.standard_error / lr.ratio;
        res.levels.push_back({schedule[i], schedule[i + 1], lr.ratio, lr.standard_error, rse > opt.rse_threshold});
        res.log_z += std::log(lr.ratio);
        var_log += rse * rse;
    }
    res.log_z_standard_error = std::sqrt(var_log);
    return res;
}

}  // namespace spingap
