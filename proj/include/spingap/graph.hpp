#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace spingap {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;
using VertexSet = std::vector<Vertex>;

// Simple undirected graph on {0, ..., n-1}. Immutable after construction.
// Edges are stored normalized (u < v) and sorted lexicographically.
class Graph {
public:
    Graph() = default;

    explicit Graph(int n, std::vector<Edge> edges = {}) : n_(checked_count(n)), adjacency_(static_cast<std::size_t>(n)) {
        std::set<Edge> seen;
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw InvalidInput("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                   ") has a vertex outside [0, " + std::to_string(n) + ")");
            if (u == v) throw InvalidInput("self-loop at vertex " + std::to_string(u));
            Edge e = std::minmax(u, v);
            if (!seen.insert(e).second)
                throw InvalidInput("duplicate edge (" + std::to_string(e.first) + "," +
                                   std::to_string(e.second) + ")");
        }
        edges_.assign(seen.begin(), seen.end());
        for (auto [u, v] : edges_) {
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
    }

    int vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
    int degree(Vertex v) const { return static_cast<int>(adjacency_.at(v).size()); }

    bool has_edge(Vertex u, Vertex v) const {
        const auto& nb = adjacency_.at(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    static int checked_count(int n) {
        if (n < 0) throw InvalidInput("vertex count must be non-negative");
        return n;
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
};

// Two sides of a bipartite graph; every edge crosses.
struct BipartitePartition {
    VertexSet left;
    VertexSet right;
};

// Parses the edge-list format: '#' comment lines, a header "n m", then m
// lines "u v" (0-indexed).
inline Graph load_graph(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::pair<long long, long long>> header;
    std::vector<Edge> edges;
    std::set<Edge> seen;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        long long a = 0, b = 0;
        std::string extra;
        if (!(fields >> a >> b)) throw ParseError("expected two integers", line_no);
        if (fields >> extra) throw ParseError("unexpected trailing token '" + extra + "'", line_no);
        if (!header) {
            if (a < 0 || b < 0) throw ParseError("negative count in header", line_no);
            header.emplace(a, b);
            continue;
        }
        if (static_cast<long long>(edges.size()) == header->second)
            throw ParseError("more edge lines than the declared " + std::to_string(header->second),
                             line_no);
        const long long n = header->first;
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw ParseError("vertex out of range [0, " + std::to_string(n) + ")", line_no);
        if (a == b) throw ParseError("self-loop at vertex " + std::to_string(a), line_no);
        Edge e = std::minmax(static_cast<Vertex>(a), static_cast<Vertex>(b));
        if (!seen.insert(e).second)
            throw ParseError("duplicate edge " + std::to_string(e.first) + " " + std::to_string(e.second),
                             line_no);
        edges.push_back(e);
    }
    if (!header) throw ParseError("missing 'n m' header", line_no);
    if (static_cast<long long>(edges.size()) != header->second)
        throw ParseError("declared " + std::to_string(header->second) + " edges but found " +
                             std::to_string(edges.size()),
                         line_no);
    return Graph(static_cast<int>(header->first), std::move(edges));
}

inline Graph load_graph(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

inline void save_graph(const Graph& g, std::ostream& out) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    save_graph(g, out);
    return out.str();
}

inline int max_degree(const Graph& g) {
    int d = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) d = std::max(d, g.degree(v));
    return d;
}

inline int min_degree(const Graph& g, const VertexSet& vs) {
    int d = -1;
    for (Vertex v : vs) d = (d < 0) ? g.degree(v) : std::min(d, g.degree(v));
    return d;
}

// Shortest cycle length; nullopt for forests. BFS from every vertex.
inline std::optional<int> girth(const Graph& g) {
    const int n = g.vertex_count();
    int best = -1;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<Vertex> parent(static_cast<std::size_t>(n));
    for (Vertex root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::queue<Vertex> frontier;
        dist[root] = 0;
        frontier.push(root);
        while (!frontier.empty()) {
            Vertex u = frontier.front();
            frontier.pop();
            for (Vertex w : g.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    frontier.push(w);
                } else if (parent[u] != w) {
                    int len = dist[u] + dist[w] + 1;
                    if (best < 0 || len < best) best = len;
                }
            }
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

struct LineGraph {
    Graph graph;
    std::vector<Edge> edge_of;  // line-graph vertex -> original edge
};

inline LineGraph line_graph(const Graph& g) {
    const auto& edges = g.edges();
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(g.vertex_count()));
    for (std::size_t i = 0; i < edges.size(); ++i) {
        incident[edges[i].first].push_back(static_cast<int>(i));
        incident[edges[i].second].push_back(static_cast<int>(i));
    }
    std::set<Edge> adj;
    for (const auto& inc : incident)
        for (std::size_t a = 0; a < inc.size(); ++a)
            for (std::size_t b = a + 1; b < inc.size(); ++b) adj.insert(std::minmax(inc[a], inc[b]));
    return {Graph(static_cast<int>(edges.size()), {adj.begin(), adj.end()}), edges};
}

// Connected components of the induced subgraph G[s], each sorted, listed in
// order of their smallest vertex.
inline std::vector<VertexSet> components(const Graph& g, const VertexSet& s) {
    std::vector<char> in_s(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex v : s) in_s.at(v) = 1;
    std::vector<char> seen(in_s.size(), 0);
    VertexSet sorted = s;
    std::sort(sorted.begin(), sorted.end());
    std::vector<VertexSet> out;
    for (Vertex start : sorted) {
        if (seen[start]) continue;
        VertexSet comp;
        std::vector<Vertex> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (Vertex w : g.neighbors(u))
                if (in_s[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

// S_v: the component of G[s] that contains v.
inline VertexSet component_of(const Graph& g, const VertexSet& s, Vertex v) {
    if (std::find(s.begin(), s.end(), v) == s.end())
        throw InvalidInput("vertex " + std::to_string(v) + " is not in the given set");
    for (auto& comp : components(g, s))
        if (std::binary_search(comp.begin(), comp.end(), v)) return comp;
    return {};  // unreachable
}

// BFS 2-coloring. The side holding each component's smallest vertex is the
// left side, so isolated vertices land in L. nullopt if an odd cycle exists.
inline std::optional<BipartitePartition> bipartite_partition(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> side(static_cast<std::size_t>(n), -1);
    for (Vertex root = 0; root < n; ++root) {
        if (side[root] >= 0) continue;
        side[root] = 0;
        std::queue<Vertex> frontier;
        frontier.push(root);
        while (!frontier.empty()) {
            Vertex u = frontier.front();
            frontier.pop();
            for (Vertex w : g.neighbors(u)) {
                if (side[w] < 0) {
                    side[w] = 1 - side[u];
                    frontier.push(w);
                } else if (side[w] == side[u]) {
                    return std::nullopt;
                }
            }
        }
    }
    BipartitePartition part;
    for (Vertex v = 0; v < n; ++v) (side[v] == 0 ? part.left : part.right).push_back(v);
    return part;
}

inline bool is_valid_partition(const Graph& g, const BipartitePartition& part) {
    std::vector<int> side(static_cast<std::size_t>(g.vertex_count()), -1);
    for (Vertex v : part.left) {
        if (v < 0 || v >= g.vertex_count() || side[v] >= 0) return false;
        side[v] = 0;
    }
    for (Vertex v : part.right) {
        if (v < 0 || v >= g.vertex_count() || side[v] >= 0) return false;
        side[v] = 1;
    }
    if (std::find(side.begin(), side.end(), -1) != side.end()) return false;
    for (auto [u, v] : g.edges())
        if (side[u] == side[v]) return false;
    return true;
}

// Induced subgraph on `keep` (any order), relabeled 0..|keep|-1 in sorted
// order of the original ids. `original` maps new ids back.
struct InducedSubgraph {
    Graph graph;
    VertexSet original;
};

inline InducedSubgraph induced_subgraph(const Graph& g, VertexSet keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<int> index(static_cast<std::size_t>(g.vertex_count()), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<int>(i);
    std::vector<Edge> edges;
    for (auto [u, v] : g.edges())
        if (index[u] >= 0 && index[v] >= 0) edges.emplace_back(index[u], index[v]);
    return {Graph(static_cast<int>(keep.size()), std::move(edges)), std::move(keep)};
}

}  // namespace spingap
