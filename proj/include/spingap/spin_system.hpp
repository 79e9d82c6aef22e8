#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace spingap {

using Spin = int;
using Configuration = std::vector<Spin>;

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

// Non-negative weight held either as an exact zero or as its logarithm.
class LogWeight {
public:
    static LogWeight zero() { return LogWeight(); }
    static LogWeight from_log(double log_value) { return LogWeight(log_value); }
    static LogWeight from_value(double value) {
        if (value < 0) throw InvalidInput("weights must be non-negative");
        return value == 0 ? zero() : LogWeight(std::log(value));
    }

    bool is_zero() const noexcept { return !log_.has_value(); }
    double log() const { return log_.value_or(-std::numeric_limits<double>::infinity()); }
    double value() const { return log_ ? std::exp(*log_) : 0.0; }

    friend LogWeight operator*(LogWeight a, LogWeight b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return LogWeight(*a.log_ + *b.log_);
    }

private:
    LogWeight() = default;
    explicit LogWeight(double l) : log_(l) {}
    std::optional<double> log_;
};

enum class ModelKind { Generic, Hardcore, Coloring, MonomerDimer };

inline const char* model_name(ModelKind k) {
    switch (k) {
        case ModelKind::Hardcore: return "hardcore";
        case ModelKind::Coloring: return "coloring";
        case ModelKind::MonomerDimer: return "matching";
        default: return "generic";
    }
}

// A q-spin system on a graph: symmetric non-negative interaction matrix A and
// positive field h. The Gibbs weight of sigma is
//   prod_{uv in E} A(sigma_u, sigma_v) * prod_v h(sigma_v).
class SpinSystem {
public:
    SpinSystem(Graph graph, int q, std::vector<double> interaction, std::vector<double> field,
               ModelKind kind = ModelKind::Generic)
        : graph_(std::move(graph)), q_(q), a_(std::move(interaction)), h_(std::move(field)), kind_(kind) {
        if (q_ < 2) throw InvalidInput("spin count q must be at least 2");
        if (a_.size() != static_cast<std::size_t>(q_ * q_)) throw InvalidInput("interaction matrix must be q x q");
        if (h_.size() != static_cast<std::size_t>(q_)) throw InvalidInput("field vector must have length q");
        for (int i = 0; i < q_; ++i)
            for (int j = 0; j < q_; ++j) {
                if (a(i, j) < 0) throw InvalidInput("interaction entries must be non-negative");
                if (a(i, j) != a(j, i)) throw InvalidInput("interaction matrix must be symmetric");
            }
        for (double x : h_)
            if (!(x > 0)) throw InvalidInput("field entries must be positive");
        log_a_.resize(a_.size());
        for (std::size_t i = 0; i < a_.size(); ++i)
            log_a_[i] = a_[i] > 0 ? std::log(a_[i]) : -std::numeric_limits<double>::infinity();
        for (double x : h_) log_h_.push_back(std::log(x));
    }

    const Graph& graph() const noexcept { return graph_; }
    int n() const noexcept { return graph_.vertex_count(); }
    int q() const noexcept { return q_; }
    ModelKind kind() const noexcept { return kind_; }
    double a(Spin i, Spin j) const { return a_[static_cast<std::size_t>(i * q_ + j)]; }
    double h(Spin i) const { return h_[static_cast<std::size_t>(i)]; }
    double log_a(Spin i, Spin j) const { return log_a_[static_cast<std::size_t>(i * q_ + j)]; }
    double log_h(Spin i) const { return log_h_[static_cast<std::size_t>(i)]; }
    bool compatible(Spin i, Spin j) const { return a(i, j) > 0; }

    // Model parameter (fugacity for hardcore/matching, colors for coloring).
    double lambda() const { return kind_ == ModelKind::Coloring ? 0.0 : h_.back(); }

    // For monomer-dimer systems: line-graph vertex -> original edge.
    const std::vector<Edge>& edge_map() const noexcept { return edge_map_; }
    void set_edge_map(std::vector<Edge> m) { edge_map_ = std::move(m); }

private:
    Graph graph_;
    int q_;
    std::vector<double> a_, h_, log_a_, log_h_;
    ModelKind kind_;
    std::vector<Edge> edge_map_;
};

// Spin 1 = occupied.
inline SpinSystem hardcore_system(Graph g, double lambda) {
    if (!(lambda > 0)) throw InvalidInput("hardcore fugacity lambda must be positive");
    return SpinSystem(std::move(g), 2, {1, 1, 1, 0}, {1, lambda}, ModelKind::Hardcore);
}

inline SpinSystem coloring_system(Graph g, int k) {
    if (k < 2) throw InvalidInput("colorings need k >= 2");
    std::vector<double> a(static_cast<std::size_t>(k * k), 1.0);
    for (int i = 0; i < k; ++i) a[static_cast<std::size_t>(i * k + i)] = 0.0;
    return SpinSystem(std::move(g), k, std::move(a), std::vector<double>(static_cast<std::size_t>(k), 1.0),
                      ModelKind::Coloring);
}

// Hardcore model on the line graph; configurations are matchings of g.
inline SpinSystem monomer_dimer_system(const Graph& g, double lambda) {
    if (g.edge_count() == 0) throw InvalidInput("monomer-dimer needs a graph with at least one edge");
    if (!(lambda > 0)) throw InvalidInput("monomer-dimer fugacity lambda must be positive");
    LineGraph lg = line_graph(g);
    SpinSystem s(std::move(lg.graph), 2, {1, 1, 1, 0}, {1, lambda}, ModelKind::MonomerDimer);
    s.set_edge_map(std::move(lg.edge_of));
    return s;
}

inline LogWeight weight(const SpinSystem& s, const Configuration& sigma) {
    if (sigma.size() != static_cast<std::size_t>(s.n()))
        throw InvalidInput("configuration length does not match vertex count");
    double lw = 0.0;
    for (Spin x : sigma) {
        if (x < 0 || x >= s.q()) throw InvalidInput("spin out of range");
        lw += s.log_h(x);
    }
    for (auto [u, v] : s.graph().edges()) {
        if (!s.compatible(sigma[u], sigma[v])) return LogWeight::zero();
        lw += s.log_a(sigma[u], sigma[v]);
    }
    return LogWeight::from_log(lw);
}

// Partial configuration: spin per vertex, or kFree.
class Pinning {
public:
    static constexpr Spin kFree = -1;

    Pinning() = default;
    explicit Pinning(int n) : spins_(static_cast<std::size_t>(n), kFree) {}
    Pinning(int n, const std::map<Vertex, Spin>& pins) : Pinning(n) {
        for (auto [v, x] : pins) pin(v, x);
    }

    int n() const noexcept { return static_cast<int>(spins_.size()); }
    bool is_pinned(Vertex v) const { return spins_.at(static_cast<std::size_t>(v)) != kFree; }
    Spin spin(Vertex v) const { return spins_.at(static_cast<std::size_t>(v)); }
    void pin(Vertex v, Spin x) {
        if (v < 0 || v >= n()) throw InvalidInput("pinned vertex " + std::to_string(v) + " out of range");
        if (x < 0) throw InvalidInput("pinned spin must be non-negative");
        spins_[static_cast<std::size_t>(v)] = x;
    }
    void unpin(Vertex v) { spins_.at(static_cast<std::size_t>(v)) = kFree; }

    int pinned_count() const {
        int c = 0;
        for (Spin x : spins_) c += x != kFree;
        return c;
    }
    VertexSet pinned_vertices() const {
        VertexSet out;
        for (int v = 0; v < n(); ++v)
            if (is_pinned(v)) out.push_back(v);
        return out;
    }
    VertexSet free_vertices() const {
        VertexSet out;
        for (int v = 0; v < n(); ++v)
            if (!is_pinned(v)) out.push_back(v);
        return out;
    }
    bool consistent_with(const Configuration& sigma) const {
        for (std::size_t v = 0; v < spins_.size(); ++v)
            if (spins_[v] != kFree && spins_[v] != sigma[v]) return false;
        return true;
    }
    const std::vector<Spin>& raw() const noexcept { return spins_; }

    // Restriction of sigma to `vertices`.
    static Pinning restrict(const Configuration& sigma, const VertexSet& vertices) {
        Pinning p(static_cast<int>(sigma.size()));
        for (Vertex v : vertices) p.pin(v, sigma[static_cast<std::size_t>(v)]);
        return p;
    }

    friend bool operator==(const Pinning&, const Pinning&) = default;
    friend auto operator<=>(const Pinning&, const Pinning&) = default;

private:
    std::vector<Spin> spins_;
};

namespace detail {

// Depth-first extension of `partial` over the free vertices (increasing
// order), pruning as soon as an edge factor vanishes. Calls visit(sigma) on
// every positive-weight completion in lexicographic order; visit returns
// false to stop. Throws CapExceeded once `node_cap` search nodes are used.
template <class Visit>
void for_each_extension(const SpinSystem& s, const Pinning& partial, Visit&& visit,
                        std::uint64_t node_cap) {
    const int n = s.n();
    const Graph& g = s.graph();
    Configuration sigma(static_cast<std::size_t>(n), Pinning::kFree);
    for (Vertex v = 0; v < n; ++v) {
        if (!partial.is_pinned(v)) continue;
        Spin x = partial.spin(v);
        if (x < 0 || x >= s.q()) throw InvalidInput("pinned spin out of range at vertex " + std::to_string(v));
        sigma[v] = x;
    }
    for (auto [u, v] : g.edges())
        if (sigma[u] >= 0 && sigma[v] >= 0 && !s.compatible(sigma[u], sigma[v])) return;

    VertexSet free = partial.free_vertices();
    std::uint64_t nodes = 0;
    bool stop = false;
    auto ok_at = [&](Vertex v, Spin x) {
        for (Vertex w : g.neighbors(v))
            if (sigma[w] >= 0 && !s.compatible(x, sigma[w])) return false;
        return true;
    };
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
        if (stop) return;
        if (depth == free.size()) {
            if (!visit(static_cast<const Configuration&>(sigma))) stop = true;
            return;
        }
        Vertex v = free[depth];
        for (Spin x = 0; x < s.q() && !stop; ++x) {
            if (++nodes > node_cap)
                throw CapExceeded("search exceeded the enumeration cap of " + std::to_string(node_cap) + " nodes");
            if (!ok_at(v, x)) continue;
            sigma[v] = x;
            self(self, depth + 1);
        }
        sigma[v] = Pinning::kFree;
    };
    recurse(recurse, 0);
}

}  // namespace detail

// True iff some completion of p has positive weight.
inline bool is_feasible_pinning(const SpinSystem& s, const Pinning& p,
                                std::uint64_t cap = kDefaultEnumerationCap) {
    if (p.n() != s.n()) throw InvalidInput("pinning size does not match vertex count");
    bool found = false;
    detail::for_each_extension(
        s, p,
        [&](const Configuration&) {
            found = true;
            return false;
        },
        cap);
    return found;
}

}  // namespace spingap
