#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "errors.hpp"
#include "spin_system.hpp"

namespace spingap {

// Feasible configurations of a spin system in lexicographic order together
// with their exact Gibbs probabilities.
class StateSpace {
public:
    StateSpace(int n, int q, std::vector<Configuration> states, std::vector<double> log_weights)
        : n_(n), q_(q), states_(std::move(states)) {
        if (states_.empty()) throw InvalidInput("no feasible configuration: every weight is zero");
        double top = *std::max_element(log_weights.begin(), log_weights.end());
        double acc = 0.0;
        for (double lw : log_weights) acc += std::exp(lw - top);
        log_z_ = top + std::log(acc);
        probabilities_.reserve(log_weights.size());
        for (double lw : log_weights) probabilities_.push_back(std::exp(lw - log_z_));
        for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
    }

    int n() const noexcept { return n_; }
    int q() const noexcept { return q_; }
    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<Configuration>& states() const noexcept { return states_; }
    const Configuration& state(std::size_t i) const { return states_.at(i); }
    const std::vector<double>& probabilities() const noexcept { return probabilities_; }
    double probability(std::size_t i) const { return probabilities_.at(i); }
    double log_z() const noexcept { return log_z_; }
    double min_probability() const { return *std::min_element(probabilities_.begin(), probabilities_.end()); }

    std::optional<std::size_t> index_of(const Configuration& sigma) const {
        auto it = index_.find(sigma);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    int n_, q_;
    std::vector<Configuration> states_;
    std::vector<double> probabilities_;
    double log_z_ = 0.0;
    std::map<Configuration, std::size_t> index_;
};

// Real function on the feasible states, aligned with StateSpace order.
using FunctionTable = std::vector<double>;

inline StateSpace enumerate(const SpinSystem& s, std::uint64_t cap = kDefaultEnumerationCap,
                            const Pinning* pinning = nullptr) {
    std::vector<Configuration> states;
    std::vector<double> log_weights;
    Pinning none(s.n());
    // The node budget is generous relative to the state cap: pruned dead ends
    // cost at most q nodes per live partial assignment.
    std::uint64_t node_cap = cap * static_cast<std::uint64_t>(std::max(2, s.q())) * 4;
    detail::for_each_extension(
        s, pinning ? *pinning : none,
        [&](const Configuration& sigma) {
            if (states.size() >= cap)
                throw CapExceeded("more than " + std::to_string(cap) + " feasible states");
            states.push_back(sigma);
            log_weights.push_back(weight(s, sigma).log());
            return true;
        },
        node_cap);
    return StateSpace(s.n(), s.q(), std::move(states), std::move(log_weights));
}

inline double partition_function(const SpinSystem& s, std::uint64_t cap = kDefaultEnumerationCap) {
    return std::exp(enumerate(s, cap).log_z());
}

namespace detail {

inline void check_pinning(const StateSpace& space, const Pinning& p) {
    if (p.n() != space.n()) throw InvalidInput("pinning size does not match vertex count");
}

// Total probability of states consistent with p.
inline double pinning_mass(const StateSpace& space, const Pinning& p) {
    double mass = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (p.consistent_with(space.state(i))) mass += space.probability(i);
    return mass;
}

}  // namespace detail

// mu(sigma_v = spin | sigma_Lambda = tau).
inline double marginal(const StateSpace& space, const Pinning& p, Vertex v, Spin spin) {
    detail::check_pinning(space, p);
    if (v < 0 || v >= space.n()) throw InvalidInput("vertex out of range");
    if (p.is_pinned(v)) throw InvalidInput("vertex " + std::to_string(v) + " is pinned");
    double mass = 0.0, hit = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& sigma = space.state(i);
        if (!p.consistent_with(sigma)) continue;
        mass += space.probability(i);
        if (sigma[v] == spin) hit += space.probability(i);
    }
    if (mass <= 0) throw InvalidInput("infeasible pinning");
    return hit / mass;
}

// Variance of f under mu_S^tau, where tau pins exactly V \ S.
inline double var_S_tau(const StateSpace& space, std::span<const double> f, const VertexSet& S,
                        const Pinning& tau) {
    detail::check_pinning(space, tau);
    if (f.size() != space.size()) throw InvalidInput("function table does not match state space");
    std::vector<char> in_s(static_cast<std::size_t>(space.n()), 0);
    for (Vertex v : S) in_s.at(v) = 1;
    for (Vertex v = 0; v < space.n(); ++v)
        if (static_cast<bool>(in_s[v]) == tau.is_pinned(v))
            throw InvalidInput("pinning must cover exactly the complement of S");
    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (tau.consistent_with(space.state(i))) {
            mass += space.probability(i);
            mean += space.probability(i) * f[i];
        }
    if (mass <= 0) throw InvalidInput("infeasible pinning");
    mean /= mass;
    double var = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (tau.consistent_with(space.state(i))) var += space.probability(i) * (f[i] - mean) * (f[i] - mean);
    return var / mass;
}

// Group states by their restriction to `outside`, return per-group
// (mass, conditional mean). Indices into the groups are in `group_of`.
namespace detail {

struct Grouping {
    std::vector<std::size_t> group_of;
    std::vector<double> mass;
    std::vector<double> mean;
};

inline Grouping group_by_restriction(const StateSpace& space, std::span<const double> f,
                                     const VertexSet& outside) {
    Grouping g;
    std::map<std::vector<Spin>, std::size_t> ids;
    g.group_of.resize(space.size());
    std::vector<Spin> key(outside.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t k = 0; k < outside.size(); ++k) key[k] = space.state(i)[outside[k]];
        auto [it, inserted] = ids.emplace(key, g.mass.size());
        if (inserted) {
            g.mass.push_back(0.0);
            g.mean.push_back(0.0);
        }
        g.group_of[i] = it->second;
        g.mass[it->second] += space.probability(i);
        g.mean[it->second] += space.probability(i) * f[i];
    }
    for (std::size_t k = 0; k < g.mass.size(); ++k) g.mean[k] /= g.mass[k];
    return g;
}

inline VertexSet complement(int n, const VertexSet& S) {
    std::vector<char> in_s(static_cast<std::size_t>(n), 0);
    for (Vertex v : S) in_s.at(v) = 1;
    VertexSet out;
    for (Vertex v = 0; v < n; ++v)
        if (!in_s[v]) out.push_back(v);
    return out;
}

}  // namespace detail

// E_tau[Var_S^tau(f)] with tau ~ mu restricted to V \ S.
inline double var_S(const StateSpace& space, std::span<const double> f, const VertexSet& S) {
    if (f.size() != space.size()) throw InvalidInput("function table does not match state space");
    auto grouping = detail::group_by_restriction(space, f, detail::complement(space.n(), S));
    double acc = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        double d = f[i] - grouping.mean[grouping.group_of[i]];
        acc += space.probability(i) * d * d;
    }
    return acc;
}

// mu^tau[Var_B(f)]: the block conditional variance Var_B(f) (given every
// spin outside B) averaged over mu conditioned on tau. B must avoid the
// pinned vertices of tau.
inline double expected_block_variance(const StateSpace& space, std::span<const double> f, const Pinning& tau,
                                      const VertexSet& block) {
    detail::check_pinning(space, tau);
    if (f.size() != space.size()) throw InvalidInput("function table does not match state space");
    for (Vertex v : block)
        if (tau.is_pinned(v)) throw InvalidInput("block overlaps the pinned set");
    auto grouping = detail::group_by_restriction(space, f, detail::complement(space.n(), block));
    double acc = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!tau.consistent_with(space.state(i))) continue;
        double d = f[i] - grouping.mean[grouping.group_of[i]];
        acc += space.probability(i) * d * d;
        mass += space.probability(i);
    }
    if (!(mass > 0)) throw InvalidInput("infeasible pinning");
    return acc / mass;
}

inline double mean(const StateSpace& space, std::span<const double> f) {
    double m = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) m += space.probability(i) * f[i];
    return m;
}

inline double variance(const StateSpace& space, std::span<const double> f) {
    double m = mean(space, f), acc = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) acc += space.probability(i) * (f[i] - m) * (f[i] - m);
    return acc;
}

inline double tv_distance(std::span<const double> p1, std::span<const double> p2) {
    if (p1.size() != p2.size()) throw InvalidInput("distributions have different lengths");
    double acc = 0.0;
    for (std::size_t i = 0; i < p1.size(); ++i) acc += std::abs(p1[i] - p2[i]);
    return 0.5 * acc;
}

// ---------------------------------------------------------------------------
// Subset encoding. A configuration sigma is the n-subset {(v, sigma_v)} of
// the ground set V x [q]; an s-subset in the support of the level-s
// distribution is a partial configuration on s distinct vertices, stored as
// a Pinning.

struct GroundElement {
    Vertex vertex;
    Spin spin;
    friend auto operator<=>(const GroundElement&, const GroundElement&) = default;
};

inline std::vector<GroundElement> to_elements(const Pinning& set) {
    std::vector<GroundElement> out;
    for (Vertex v = 0; v < set.n(); ++v)
        if (set.is_pinned(v)) out.push_back({v, set.spin(v)});
    return out;
}

inline Pinning from_elements(int n, std::span<const GroundElement> elements) {
    Pinning p(n);
    for (auto e : elements) {
        if (p.is_pinned(e.vertex)) throw InvalidInput("two ground elements on one vertex have zero mass");
        p.pin(e.vertex, e.spin);
    }
    return p;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Vertex subsets of {0..n-1} of size k, lexicographic.
inline std::vector<VertexSet> subsets_of_size(int n, int k) {
    std::vector<VertexSet> out;
    if (k < 0 || k > n) return out;
    VertexSet cur(static_cast<std::size_t>(k));
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// mu^{(s)}(T) = (1 / C(n, s)) * sum over n-sets containing T of mu.
class LevelDistribution {
public:
    LevelDistribution(const StateSpace& space, int level) : n_(space.n()), level_(level) {
        if (level < 0 || level > space.n()) throw InvalidInput("level must lie in [0, n]");
        const double norm = binomial(n_, level);
        std::map<Pinning, double> acc;
        for (const auto& vs : subsets_of_size(n_, level))
            for (std::size_t i = 0; i < space.size(); ++i)
                acc[Pinning::restrict(space.state(i), vs)] += space.probability(i) / norm;
        for (auto& [set, p] : acc) {
            index_.emplace(set, sets_.size());
            sets_.push_back(set);
            prob_.push_back(p);
        }
    }

    int n() const noexcept { return n_; }
    int level() const noexcept { return level_; }
    std::size_t size() const noexcept { return sets_.size(); }
    const std::vector<Pinning>& sets() const noexcept { return sets_; }
    const std::vector<double>& probabilities() const noexcept { return prob_; }
    std::optional<std::size_t> index_of(const Pinning& set) const {
        auto it = index_.find(set);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    int n_, level_;
    std::vector<Pinning> sets_;
    std::vector<double> prob_;
    std::map<Pinning, std::size_t> index_;
};

inline bool is_subset_of(const Pinning& small, const Pinning& big) {
    for (Vertex v = 0; v < small.n(); ++v)
        if (small.is_pinned(v) && big.spin(v) != small.spin(v)) return false;
    return true;
}

// f^{(level)}(R) = sum over n-sets S containing R of U(R, S) f(S), where U
// moves proportionally to mu. Aligned with `lower.sets()`.
inline std::vector<double> project_function(const StateSpace& space, std::span<const double> f,
                                            const LevelDistribution& lower) {
    std::vector<double> num(lower.size(), 0.0), den(lower.size(), 0.0);
    for (std::size_t r = 0; r < lower.size(); ++r)
        for (std::size_t i = 0; i < space.size(); ++i) {
            const auto& R = lower.sets()[r];
            bool contained = true;
            for (Vertex v = 0; v < R.n() && contained; ++v)
                if (R.is_pinned(v) && space.state(i)[v] != R.spin(v)) contained = false;
            if (!contained) continue;
            num[r] += space.probability(i) * f[i];
            den[r] += space.probability(i);
        }
    for (std::size_t r = 0; r < lower.size(); ++r) num[r] /= den[r];
    return num;
}

// |(Var(f) - Var_{mu^{(n-l)}}(f^{(n-l)})) - (1/C(n,l)) sum_{|S|=l} Var_S(f)|.
// The left side goes through the subset encoding, the right side through
// block conditional variances.
struct DecompositionResidual {
    double lhs;
    double rhs;
    double residual;
};

inline DecompositionResidual variance_decomposition_check(const StateSpace& space, std::span<const double> f,
                                                          int ell) {
    const int n = space.n();
    if (ell < 1 || ell > n) throw InvalidInput("block size must satisfy 1 <= l <= n");
    LevelDistribution lower(space, n - ell);
    std::vector<double> projected = project_function(space, f, lower);
    double m = 0.0;
    for (std::size_t r = 0; r < lower.size(); ++r) m += lower.probabilities()[r] * projected[r];
    double var_lower = 0.0;
    for (std::size_t r = 0; r < lower.size(); ++r)
        var_lower += lower.probabilities()[r] * (projected[r] - m) * (projected[r] - m);
    double lhs = variance(space, f) - var_lower;

    double rhs = 0.0;
    auto blocks = subsets_of_size(n, ell);
    for (const auto& S : blocks) rhs += var_S(space, f, S);
    rhs /= static_cast<double>(blocks.size());
    return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace spingap
