#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace spingap {

using GraphParams = std::map<std::string, double>;

namespace detail {

inline int int_param(const GraphParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw InvalidInput("missing generator parameter '" + key + "'");
    double v = it->second;
    if (v != std::floor(v) || v < 0) throw InvalidInput("parameter '" + key + "' must be a non-negative integer");
    return static_cast<int>(v);
}

inline double real_param(const GraphParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw InvalidInput("missing generator parameter '" + key + "'");
    return it->second;
}

}  // namespace detail

inline Graph cycle_graph(int n) {
    if (n < 3) throw InvalidInput("cycle needs n >= 3");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, edges);
}

inline Graph path_graph(int n) {
    if (n < 1) throw InvalidInput("path needs n >= 1");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, edges);
}

inline Graph complete_graph(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, edges);
}

// Left side 0..a-1, right side a..a+b-1.
inline Graph complete_bipartite_graph(int a, int b) {
    std::vector<Edge> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) edges.emplace_back(i, a + j);
    return Graph(a + b, edges);
}

inline Graph star_graph(int leaves) { return complete_bipartite_graph(1, leaves); }

inline Graph grid_graph(int rows, int cols) {
    std::vector<Edge> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph(rows * cols, edges);
}

// Pairing model: shuffle n*degree half-edges, pair them consecutively, and
// restart on loops or repeated pairs.
inline Graph random_regular_graph(int n, int degree, std::uint64_t seed, int max_attempts = 1000) {
    if (degree < 0 || n <= degree) throw InvalidInput("random_regular needs 0 <= degree < n");
    if ((static_cast<long long>(n) * degree) % 2 != 0)
        throw InvalidInput("random_regular needs n*degree even");
    // Pairing model with Steger-Wormald sequential matching: pick random
    // remaining point pairs, reject only unsuitable pairs, restart when stuck.
    Rng rng = make_stream(seed);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Vertex> points;
        for (int v = 0; v < n; ++v)
            for (int d = 0; d < degree; ++d) points.push_back(v);
        std::set<Edge> edges;
        auto suitable = [&](Vertex u, Vertex v) { return u != v && !edges.count(std::minmax(u, v)); };
        bool stuck = false;
        while (!points.empty() && !stuck) {
            std::size_t i = uniform_index(rng, points.size()), j = uniform_index(rng, points.size());
            if (i == j || !suitable(points[i], points[j])) {
                stuck = true;
                for (std::size_t a = 0; stuck && a < points.size(); ++a)
                    for (std::size_t b = a + 1; stuck && b < points.size(); ++b) stuck = !suitable(points[a], points[b]);
                continue;
            }
            edges.insert(std::minmax(points[i], points[j]));
            if (i < j) std::swap(i, j);
            points.erase(points.begin() + static_cast<long>(i));
            points.erase(points.begin() + static_cast<long>(j));
        }
        if (!stuck) return Graph(n, {edges.begin(), edges.end()});
    }
    throw InvalidInput("random_regular: rejection budget of " + std::to_string(max_attempts) +
                       " attempts exhausted");
}

// Binomial random graph G(n, d/n).
inline Graph gnp_graph(int n, double d, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("gnp needs n >= 1");
    double p = d / n;
    if (p < 0 || p > 1) throw InvalidInput("gnp needs 0 <= d <= n");
    Rng rng = make_stream(seed);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) edges.emplace_back(i, j);
    return Graph(n, edges);
}

// Dispatch by family name. Parameters by family:
//   cycle/path/complete: n;  complete_bipartite: a, b;  star: leaves;
//   grid: rows, cols;  random_regular: n, degree[, attempts];  gnp: n, d
inline Graph generate(const std::string& kind, const GraphParams& params, std::uint64_t seed) {
    using detail::int_param;
    if (kind == "cycle") return cycle_graph(int_param(params, "n"));
    if (kind == "path") return path_graph(int_param(params, "n"));
    if (kind == "complete") return complete_graph(int_param(params, "n"));
    if (kind == "complete_bipartite")
        return complete_bipartite_graph(int_param(params, "a"), int_param(params, "b"));
    if (kind == "star") return star_graph(int_param(params, "leaves"));
    if (kind == "grid") return grid_graph(int_param(params, "rows"), int_param(params, "cols"));
    if (kind == "random_regular") {
        int attempts = params.count("attempts") ? int_param(params, "attempts") : 1000;
        return random_regular_graph(int_param(params, "n"), int_param(params, "degree"), seed, attempts);
    }
    if (kind == "gnp") return gnp_graph(int_param(params, "n"), detail::real_param(params, "d"), seed);
    throw InvalidInput("unknown graph family '" + kind + "'");
}

}  // namespace spingap
