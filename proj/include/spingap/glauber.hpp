#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "exact.hpp"
#include "rng.hpp"
#include "spin_system.hpp"

namespace spingap {

struct ChainState {
    Configuration configuration;
    std::uint64_t step = 0;
    Rng rng;
};

// Single-site heat-bath updates restricted to the unpinned vertices.
class GlauberSampler {
public:
    GlauberSampler(const SpinSystem& s, const Pinning* pinning = nullptr)
        : system_(&s), weights_(static_cast<std::size_t>(s.q())) {
        if (pinning && pinning->n() != s.n()) throw InvalidInput("pinning size does not match vertex count");
        for (Vertex v = 0; v < s.n(); ++v)
            if (!pinning || !pinning->is_pinned(v)) free_.push_back(v);
        if (free_.empty()) throw InvalidInput("every vertex is pinned; nothing to update");
    }

    const VertexSet& free_vertices() const noexcept { return free_; }

    // Conditional law of the spin at v given every other spin, unnormalized.
    const std::vector<double>& conditional_weights(const Configuration& sigma, Vertex v) {
        const SpinSystem& s = *system_;
        for (Spin x = 0; x < s.q(); ++x) {
            double w = s.h(x);
            for (Vertex u : s.graph().neighbors(v)) w *= s.a(x, sigma[u]);
            weights_[x] = w;
        }
        return weights_;
    }

    struct Update {
        Vertex vertex;
        Spin old_spin;
    };

    Update step(ChainState& st) {
        Vertex v = free_[uniform_index(st.rng, free_.size())];
        const auto& w = conditional_weights(st.configuration, v);
        double total = 0.0;
        for (double x : w) total += x;
        if (!(total > 0)) throw std::logic_error("heat-bath conditional has zero mass: state was infeasible");
        double u = uniform01(st.rng) * total;
        Spin chosen = system_->q() - 1;
        for (Spin x = 0; x < system_->q(); ++x) {
            if (u < w[x]) {
                chosen = x;
                break;
            }
            u -= w[x];
        }
        while (w[chosen] <= 0) --chosen;  // guards the rounding tail
        Update up{v, st.configuration[v]};
        st.configuration[v] = chosen;
        ++st.step;
        return up;
    }

private:
    const SpinSystem* system_;
    VertexSet free_;
    std::vector<double> weights_;
};

inline void glauber_step(const SpinSystem& s, ChainState& st, const Pinning* pinning = nullptr) {
    GlauberSampler(s, pinning).step(st);
}

// Initial-state strategies.
struct WarmStart {};      // exact sample from mu (enumeration; desk scale only)
struct GreedyFeasible {}; // first compatible spin per vertex in index order
using InitialState = std::variant<Configuration, WarmStart, GreedyFeasible>;

inline Configuration greedy_feasible(const SpinSystem& s, const Pinning* pinning = nullptr) {
    Configuration sigma(static_cast<std::size_t>(s.n()), Pinning::kFree);
    if (pinning)
        for (Vertex v = 0; v < s.n(); ++v)
            if (pinning->is_pinned(v)) sigma[v] = pinning->spin(v);
    for (Vertex v = 0; v < s.n(); ++v) {
        if (sigma[v] >= 0) continue;
        for (Spin x = 0; x < s.q(); ++x) {
            bool ok = true;
            for (Vertex u : s.graph().neighbors(v))
                if (sigma[u] >= 0 && !s.compatible(x, sigma[u])) ok = false;
            if (ok) {
                sigma[v] = x;
                break;
            }
        }
        if (sigma[v] < 0) throw InvalidInput("greedy initialization found no compatible spin at vertex " + std::to_string(v));
    }
    if (weight(s, sigma).is_zero()) throw InvalidInput("greedy initialization produced an infeasible state");
    return sigma;
}

inline Configuration sample_exact(const StateSpace& space, Rng& rng, const Pinning* pinning = nullptr) {
    double mass = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (!pinning || pinning->consistent_with(space.state(i))) mass += space.probability(i);
    if (!(mass > 0)) throw InvalidInput("infeasible pinning");
    double u = uniform01(rng) * mass;
    std::size_t last = 0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (pinning && !pinning->consistent_with(space.state(i))) continue;
        last = i;
        if (u < space.probability(i)) return space.state(i);
        u -= space.probability(i);
    }
    return space.state(last);
}

struct RunOptions {
    std::uint64_t burnin = 0;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct ChainSummary {
    Configuration initial;
    Configuration final_state;
    std::uint64_t steps = 0;     // total updates, burn-in included
    std::uint64_t recorded = 0;  // updates after burn-in
    // frequency[v][x]: fraction of recorded steps with sigma_v = x.
    std::vector<std::vector<double>> frequency;
};

inline Configuration initial_configuration(const SpinSystem& s, const InitialState& init, Rng& rng,
                                           const Pinning* pinning, std::uint64_t cap) {
    if (auto* c = std::get_if<Configuration>(&init)) {
        if (c->size() != static_cast<std::size_t>(s.n())) throw InvalidInput("initial configuration has wrong length");
        if (weight(s, *c).is_zero()) throw InvalidInput("initial configuration is infeasible");
        if (pinning && !pinning->consistent_with(*c)) throw InvalidInput("initial configuration violates the pinning");
        return *c;
    }
    if (std::holds_alternative<WarmStart>(init)) return sample_exact(enumerate(s, cap), rng, pinning);
    return greedy_feasible(s, pinning);
}

inline ChainSummary run_chain(const SpinSystem& s, const InitialState& init, std::uint64_t steps,
                              std::uint64_t seed, const Pinning* pinning = nullptr, RunOptions opt = {}) {
    ChainState st{{}, 0, make_stream(seed)};
    st.configuration = initial_configuration(s, init, st.rng, pinning, opt.enumeration_cap);
    ChainSummary out;
    out.initial = st.configuration;
    out.frequency.assign(static_cast<std::size_t>(s.n()), std::vector<double>(static_cast<std::size_t>(s.q()), 0.0));
    GlauberSampler sampler(s, pinning);
    for (std::uint64_t t = 0; t < opt.burnin; ++t) sampler.step(st);
    for (std::uint64_t t = 0; t < steps; ++t) {
        sampler.step(st);
        for (Vertex v = 0; v < s.n(); ++v) out.frequency[v][st.configuration[v]] += 1.0;
    }
    out.recorded = steps;
    if (steps > 0)
        for (auto& row : out.frequency)
            for (double& x : row) x /= static_cast<double>(steps);
    out.final_state = st.configuration;
    out.steps = st.step;
    return out;
}

struct MarginalEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::vector<double> chain_means;
};

// Jackknife standard error of the mean across independent replicates.
inline double jackknife_standard_error(const std::vector<double>& xs) {
    const std::size_t c = xs.size();
    if (c < 2) return 0.0;
    double total = 0.0;
    for (double x : xs) total += x;
    std::vector<double> loo(c);
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        loo[i] = (total - xs[i]) / static_cast<double>(c - 1);
        loo_mean += loo[i];
    }
    loo_mean /= static_cast<double>(c);
    double acc = 0.0;
    for (double x : loo) acc += (x - loo_mean) * (x - loo_mean);
    return std::sqrt(acc * static_cast<double>(c - 1) / static_cast<double>(c));
}

struct EstimateParams {
    std::uint64_t steps = 100000;
    std::uint64_t burnin = 1000;
    int chains = 8;
    std::uint64_t seed = 1;
};

// Time-averaged indicator of sigma_v = spin over `chains` independent chains,
// each started greedily and run for burnin + steps updates.
inline MarginalEstimate estimate_marginal(const SpinSystem& s, const Pinning& p, Vertex v, Spin spin,
                                          const EstimateParams& params) {
    if (params.chains < 1) throw InvalidInput("need at least one chain");
    if (p.n() != s.n()) throw InvalidInput("pinning size does not match vertex count");
    if (p.is_pinned(v)) throw InvalidInput("vertex " + std::to_string(v) + " is pinned");
    Configuration start = greedy_feasible(s, &p);
    GlauberSampler sampler(s, &p);
    MarginalEstimate out;
    for (int c = 0; c < params.chains; ++c) {
        ChainState st{start, 0, make_stream(params.seed, static_cast<std::uint64_t>(c))};
        for (std::uint64_t t = 0; t < params.burnin; ++t) sampler.step(st);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < params.steps; ++t) {
            sampler.step(st);
            hits += st.configuration[v] == spin;
        }
        out.chain_means.push_back(params.steps ? static_cast<double>(hits) / static_cast<double>(params.steps) : 0.0);
    }
    for (double m : out.chain_means) out.estimate += m;
    out.estimate /= static_cast<double>(params.chains);
    out.standard_error = jackknife_standard_error(out.chain_means);
    return out;
}

// ---------------------------------------------------------------------------
// Down-up walk on the subset encoding.

struct SubsetState {
    std::vector<GroundElement> elements;  // sorted
};

// Level-s distribution plus the machinery for one s <-> r move.
class DownUpWalk {
public:
    DownUpWalk(const StateSpace& space, int level) : level_dist_(space, level) {}

    const LevelDistribution& distribution() const noexcept { return level_dist_; }
    int level() const noexcept { return level_dist_.level(); }

    SubsetState step(const SubsetState& st, int r, Rng& rng) const {
        const int s = static_cast<int>(st.elements.size());
        if (s != level()) throw InvalidInput("subset size does not match the walk level");
        if (r < 0 || r > s) throw InvalidInput("down level must satisfy 0 <= r <= s");
        if (r == s) return st;
        std::vector<GroundElement> drop = st.elements;
        std::shuffle(drop.begin(), drop.end(), rng);
        drop.resize(static_cast<std::size_t>(r));
        Pinning kept = from_elements(level_dist_.n(), drop);

        double total = 0.0;
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < level_dist_.size(); ++i)
            if (is_subset_of(kept, level_dist_.sets()[i])) {
                candidates.push_back(i);
                total += level_dist_.probabilities()[i];
            }
        if (candidates.empty() || !(total > 0)) throw std::logic_error("no feasible superset: state outside support");
        double u = uniform01(rng) * total;
        std::size_t pick = candidates.back();
        for (std::size_t i : candidates) {
            if (u < level_dist_.probabilities()[i]) {
                pick = i;
                break;
            }
            u -= level_dist_.probabilities()[i];
        }
        return {to_elements(level_dist_.sets()[pick])};
    }

private:
    LevelDistribution level_dist_;
};

inline SubsetState encode(const Configuration& sigma) {
    SubsetState st;
    for (std::size_t v = 0; v < sigma.size(); ++v) st.elements.push_back({static_cast<Vertex>(v), sigma[v]});
    return st;
}

inline Configuration decode(const SubsetState& st, int n) {
    if (st.elements.size() != static_cast<std::size_t>(n)) throw InvalidInput("not a full configuration");
    Configuration sigma(static_cast<std::size_t>(n), Pinning::kFree);
    for (auto e : st.elements) sigma.at(e.vertex) = e.spin;
    return sigma;
}

}  // namespace spingap
