#pragma once

// Independent brute-force reference computations for the test suites. None
// of these call into the library's enumerator or spectral code.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using EdgeList = std::vector<std::pair<int, int>>;

// Sum over independent sets of lambda^{|I|}, by bitmask over all 2^n subsets.
inline double hardcore_z(int n, const EdgeList& edges, double lambda) {
    double z = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (auto [u, v] : edges)
            if ((mask >> u & 1u) && (mask >> v & 1u)) ok = false;
        if (ok) z += std::pow(lambda, __builtin_popcount(mask));
    }
    return z;
}

// Probability that vertex v is occupied.
inline double hardcore_occupation(int n, const EdgeList& edges, double lambda, int v) {
    double z = 0.0, hit = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (auto [a, b] : edges)
            if ((mask >> a & 1u) && (mask >> b & 1u)) ok = false;
        if (!ok) continue;
        double w = std::pow(lambda, __builtin_popcount(mask));
        z += w;
        if (mask >> v & 1u) hit += w;
    }
    return hit / z;
}

// Number of proper k-colorings by exhaustive product enumeration.
inline long proper_colorings(int n, const EdgeList& edges, int k) {
    long count = 0;
    std::vector<int> c(static_cast<std::size_t>(n), 0);
    while (true) {
        bool ok = true;
        for (auto [u, v] : edges)
            if (c[u] == c[v]) ok = false;
        count += ok;
        int i = 0;
        while (i < n && ++c[i] == k) c[i++] = 0;
        if (i == n) break;
    }
    return count;
}

// Matchings of g weighted by lambda^{|M|}, by bitmask over edge subsets.
inline double matching_z(int n, const EdgeList& edges, double lambda, long* count = nullptr) {
    double z = 0.0;
    long c = 0;
    const auto m = static_cast<std::uint32_t>(edges.size());
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> used(static_cast<std::size_t>(n), 0);
        bool ok = true;
        for (std::uint32_t e = 0; e < m && ok; ++e)
            if (mask >> e & 1u)
                if (used[edges[e].first]++ || used[edges[e].second]++) ok = false;
        if (!ok) continue;
        z += std::pow(lambda, __builtin_popcount(mask));
        ++c;
    }
    if (count) *count = c;
    return z;
}

inline EdgeList path_edges(int n) {
    EdgeList e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return e;
}

inline EdgeList cycle_edges(int n) {
    EdgeList e = path_edges(n);
    e.emplace_back(0, n - 1);
    return e;
}

}  // namespace oracle
