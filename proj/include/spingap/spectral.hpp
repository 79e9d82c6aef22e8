#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "rng.hpp"
#include "spin_system.hpp"

namespace spingap {

inline constexpr std::size_t kDefaultMatrixCap = 5000;

// Row-stochastic kernel over an explicit state list with its stationary law.
struct Kernel {
    Eigen::MatrixXd matrix;
    std::vector<double> stationary;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;  // descending
    double gap = 0.0;                 // 1 - max(|lambda_2|, |lambda_min|)
    double relaxation_time = 0.0;     // 1 / gap (infinity when gap == 0)
    std::size_t state_count = 0;
    double reversibility_residual = 0.0;
    bool reducible = false;
    std::size_t communicating_classes = 1;
};

inline double reversibility_residual(const Kernel& k) {
    const auto n = static_cast<Eigen::Index>(k.stationary.size());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            worst = std::max(worst, std::abs(k.stationary[i] * k.matrix(i, j) - k.stationary[j] * k.matrix(j, i)));
    return worst;
}

// Classes of the undirected support graph of a reversible kernel.
inline std::size_t communicating_classes(const Kernel& k) {
    const auto n = static_cast<Eigen::Index>(k.stationary.size());
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    std::size_t classes = 0;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        std::vector<Eigen::Index> stack{s};
        label[s] = static_cast<int>(classes);
        while (!stack.empty()) {
            auto i = stack.back();
            stack.pop_back();
            for (Eigen::Index j = 0; j < n; ++j)
                if (label[j] < 0 && k.matrix(i, j) > 0) {
                    label[j] = static_cast<int>(classes);
                    stack.push_back(j);
                }
        }
        ++classes;
    }
    return classes;
}

// D^{1/2} P D^{-1/2} for D = diag(pi): symmetric when P is reversible.
inline Eigen::MatrixXd symmetrize(const Kernel& k) {
    const auto n = static_cast<Eigen::Index>(k.stationary.size());
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            s(i, j) = std::sqrt(k.stationary[i]) * k.matrix(i, j) / std::sqrt(k.stationary[j]);
    return 0.5 * (s + s.transpose());
}

// The tridiagonal QR can stall on large degenerate eigenspaces (down-up
// kernels are rank deficient); a unit shift moves them off zero.
inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& s) {
    const auto n = s.rows();
    for (double shift : {0.0, 1.0}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s + shift * Eigen::MatrixXd::Identity(n, n),
                                                              Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) continue;
        std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
        for (double& x : ev) x -= shift;
        return ev;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> general(s, false);
    if (general.info() != Eigen::Success) throw std::runtime_error("eigensolve did not converge");
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = general.eigenvalues()[i].real();
    return ev;
}

inline SpectrumReport spectral_gap(const Kernel& k, double tolerance = 1e-10) {
    SpectrumReport rep;
    rep.state_count = k.stationary.size();
    rep.reversibility_residual = reversibility_residual(k);
    if (rep.reversibility_residual > tolerance)
        throw InvalidInput("kernel is not reversible: residual " + std::to_string(rep.reversibility_residual));
    if (rep.state_count == 1) {
        rep.eigenvalues = {1.0};
        rep.gap = 1.0;
        rep.relaxation_time = 1.0;
        return rep;
    }
    rep.eigenvalues = symmetric_eigenvalues(symmetrize(k));
    std::sort(rep.eigenvalues.rbegin(), rep.eigenvalues.rend());
    double second = std::max(std::abs(rep.eigenvalues[1]), std::abs(rep.eigenvalues.back()));
    rep.gap = std::max(0.0, 1.0 - second);
    if (rep.gap <= 1e-12) {
        rep.gap = 0.0;
        rep.reducible = true;
        rep.relaxation_time = std::numeric_limits<double>::infinity();
    } else {
        rep.relaxation_time = 1.0 / rep.gap;
    }
    rep.communicating_classes = communicating_classes(k);
    rep.reducible = rep.reducible || rep.communicating_classes > 1;
    return rep;
}

// States of `space` consistent with an optional pinning, with the
// conditional Gibbs law on them.
struct RestrictedSpace {
    std::vector<std::size_t> members;  // indices into the full space
    std::vector<double> probabilities;
    std::map<Configuration, std::size_t> local_index;
};

inline RestrictedSpace restrict_space(const StateSpace& space, const Pinning* pinning) {
    RestrictedSpace r;
    double mass = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (!pinning || pinning->consistent_with(space.state(i))) {
            r.local_index.emplace(space.state(i), r.members.size());
            r.members.push_back(i);
            r.probabilities.push_back(space.probability(i));
            mass += space.probability(i);
        }
    if (r.members.empty() || !(mass > 0)) throw InvalidInput("infeasible pinning");
    for (double& p : r.probabilities) p /= mass;
    return r;
}

// Exact Glauber kernel over feasible states consistent with the pinning.
// Row order follows the lexicographic order of the state space.
inline Kernel glauber_matrix(const SpinSystem& s, const StateSpace& space, const Pinning* pinning = nullptr,
                             std::size_t cap = kDefaultMatrixCap) {
    RestrictedSpace r = restrict_space(space, pinning);
    const std::size_t m = r.members.size();
    if (m > cap) throw CapExceeded("kernel over " + std::to_string(m) + " states exceeds the matrix cap " + std::to_string(cap));
    VertexSet free;
    for (Vertex v = 0; v < s.n(); ++v)
        if (!pinning || !pinning->is_pinned(v)) free.push_back(v);
    if (free.empty()) throw InvalidInput("every vertex is pinned");
    Kernel k{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)), r.probabilities};
    const double pick = 1.0 / static_cast<double>(free.size());
    std::vector<double> w(static_cast<std::size_t>(s.q()));
    for (std::size_t i = 0; i < m; ++i) {
        Configuration sigma = space.state(r.members[i]);
        for (Vertex v : free) {
            double total = 0.0;
            for (Spin x = 0; x < s.q(); ++x) {
                double wx = s.h(x);
                for (Vertex u : s.graph().neighbors(v)) wx *= s.a(x, sigma[u]);
                w[x] = wx;
                total += wx;
            }
            const Spin keep = sigma[v];
            for (Spin x = 0; x < s.q(); ++x) {
                if (w[x] <= 0) continue;
                sigma[v] = x;
                auto j = r.local_index.at(sigma);
                k.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += pick * w[x] / total;
            }
            sigma[v] = keep;
        }
    }
    return k;
}

// ---------------------------------------------------------------------------
// Influence matrices and spectral independence.

struct InfluenceMatrix {
    std::vector<GroundElement> index;  // (vertex, spin) with positive conditional marginal
    Eigen::MatrixXd entries;
};

namespace detail {

// Conditional statistics of the states in `members` (indices into space),
// which all agree on the pinned set.
struct ConditionalStats {
    std::vector<GroundElement> index;
    std::map<GroundElement, std::size_t> position;
    std::vector<double> marginal;  // aligned with index
    Eigen::MatrixXd joint;         // P(u=i, v=j), u != v
};

inline ConditionalStats conditional_stats(const StateSpace& space, const std::vector<std::size_t>& members,
                                          const Pinning& pinning) {
    ConditionalStats cs;
    const int n = space.n(), q = space.q();
    double mass = 0.0;
    for (auto i : members) mass += space.probability(i);
    std::vector<double> marg(static_cast<std::size_t>(n * q), 0.0);
    for (auto i : members)
        for (Vertex v = 0; v < n; ++v)
            if (!pinning.is_pinned(v)) marg[static_cast<std::size_t>(v * q + space.state(i)[v])] += space.probability(i) / mass;
    for (Vertex v = 0; v < n; ++v)
        for (Spin x = 0; x < q; ++x)
            if (!pinning.is_pinned(v) && marg[static_cast<std::size_t>(v * q + x)] > 0) {
                cs.position.emplace(GroundElement{v, x}, cs.index.size());
                cs.index.push_back({v, x});
                cs.marginal.push_back(marg[static_cast<std::size_t>(v * q + x)]);
            }
    const auto dim = static_cast<Eigen::Index>(cs.index.size());
    cs.joint = Eigen::MatrixXd::Zero(dim, dim);
    VertexSet free = pinning.free_vertices();
    std::vector<Eigen::Index> pos(free.size());
    for (auto i : members) {
        const auto& sigma = space.state(i);
        for (std::size_t a = 0; a < free.size(); ++a) pos[a] = static_cast<Eigen::Index>(cs.position.at({free[a], sigma[free[a]]}));
        const double p = space.probability(i) / mass;
        for (std::size_t a = 0; a < free.size(); ++a)
            for (std::size_t b = 0; b < free.size(); ++b)
                if (a != b) cs.joint(pos[a], pos[b]) += p;
    }
    return cs;
}

inline InfluenceMatrix influence_from_stats(const ConditionalStats& cs) {
    InfluenceMatrix im{cs.index, Eigen::MatrixXd::Zero(cs.joint.rows(), cs.joint.cols())};
    for (Eigen::Index a = 0; a < cs.joint.rows(); ++a)
        for (Eigen::Index b = 0; b < cs.joint.cols(); ++b)
            if (cs.index[a].vertex != cs.index[b].vertex)
                im.entries(a, b) = cs.joint(a, b) / cs.marginal[a] - cs.marginal[b];
    return im;
}

struct Eigenpeak {
    double max_real;
    double max_imag;
};

inline Eigenpeak largest_real_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("general eigensolve did not converge");
    Eigenpeak peak{-std::numeric_limits<double>::infinity(), 0.0};
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        peak.max_real = std::max(peak.max_real, solver.eigenvalues()[i].real());
        peak.max_imag = std::max(peak.max_imag, std::abs(solver.eigenvalues()[i].imag()));
    }
    return peak;
}

// Non-lazy local walk on the unpinned (vertex, spin) pairs:
// (u,i) -> (v,j), v != u, with probability P(v=j | u=i, tau) / (m - 1).
inline double local_walk_lambda2(const ConditionalStats& cs, int free_count) {
    const auto dim = static_cast<Eigen::Index>(cs.index.size());
    if (free_count < 2) throw InvalidInput("local walk needs at least two unpinned vertices");
    Kernel k{Eigen::MatrixXd::Zero(dim, dim), std::vector<double>(static_cast<std::size_t>(dim))};
    for (Eigen::Index a = 0; a < dim; ++a) {
        k.stationary[a] = cs.marginal[a] / free_count;
        for (Eigen::Index b = 0; b < dim; ++b)
            if (cs.index[a].vertex != cs.index[b].vertex)
                k.matrix(a, b) = cs.joint(a, b) / cs.marginal[a] / (free_count - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrize(k), Eigen::EigenvaluesOnly);
    std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    std::sort(ev.rbegin(), ev.rend());
    return ev.size() > 1 ? ev[1] : 0.0;
}

}  // namespace detail

inline InfluenceMatrix influence_matrix(const StateSpace& space, const Pinning& p) {
    if (p.n() != space.n()) throw InvalidInput("pinning size does not match vertex count");
    if (p.pinned_count() > space.n() - 2) throw InvalidInput("influence matrices need |Lambda| <= n - 2");
    RestrictedSpace r = restrict_space(space, &p);
    return detail::influence_from_stats(detail::conditional_stats(space, r.members, p));
}

inline double local_walk_second_eigenvalue(const StateSpace& space, const Pinning& p) {
    if (p.n() != space.n()) throw InvalidInput("pinning size does not match vertex count");
    if (p.pinned_count() > space.n() - 2) throw InvalidInput("local walks need |Lambda| <= n - 2");
    RestrictedSpace r = restrict_space(space, &p);
    return detail::local_walk_lambda2(detail::conditional_stats(space, r.members, p), space.n() - p.pinned_count());
}

struct SIOptions {
    int exhaustive_max_n = 10;
    std::size_t samples_per_level = 200;  // sampled mode only
    std::uint64_t seed = 1;
    bool local_walks = true;
};

struct SIProfile {
    std::vector<double> etas;          // eta_k, k = 0..n-2
    std::vector<Pinning> witnesses;    // pinning attaining eta_k
    std::vector<double> zetas;         // max second eigenvalue of the local walk per level
    std::vector<std::size_t> pinnings_checked;
    double fitted_C = 0.0;
    double fitted_eta = 0.0;
    double max_imag = 0.0;
    // max over pinnings of |zeta - lambda_max(Psi) / (m - 1)|
    double local_walk_deviation = 0.0;
    bool exhaustive = true;
};

// Max of lambda_max(Psi^tau) over every pinning of each size (exhaustive), or
// over uniformly sampled (Lambda, tau) pairs per level when n is too large.
inline SIProfile si_profile(const StateSpace& space, const SIOptions& opt = {}) {
    const int n = space.n();
    SIProfile prof;
    prof.exhaustive = n <= opt.exhaustive_max_n;
    if (n < 2) return prof;
    Rng rng = make_stream(opt.seed, 0x51);
    for (int k = 0; k <= n - 2; ++k) {
        double eta = -std::numeric_limits<double>::infinity();
        double zeta = -std::numeric_limits<double>::infinity();
        Pinning witness(n);
        std::size_t checked = 0;
        auto visit = [&](const std::vector<std::size_t>& members, const Pinning& tau) {
            auto cs = detail::conditional_stats(space, members, tau);
            auto im = detail::influence_from_stats(cs);
            auto peak = detail::largest_real_eigenvalue(im.entries);
            prof.max_imag = std::max(prof.max_imag, peak.max_imag);
            if (peak.max_real > eta) {
                eta = peak.max_real;
                witness = tau;
            }
            if (opt.local_walks) {
                double z = detail::local_walk_lambda2(cs, n - k);
                zeta = std::max(zeta, z);
                prof.local_walk_deviation =
                    std::max(prof.local_walk_deviation, std::abs(z - peak.max_real / (n - k - 1)));
            }
            ++checked;
        };
        auto subsets = subsets_of_size(n, k);
        auto group = [&](const VertexSet& lambda) {
            std::map<Pinning, std::vector<std::size_t>> groups;
            for (std::size_t i = 0; i < space.size(); ++i)
                groups[Pinning::restrict(space.state(i), lambda)].push_back(i);
            return groups;
        };
        if (prof.exhaustive) {
            for (const auto& lambda : subsets)
                for (const auto& [tau, members] : group(lambda)) visit(members, tau);
        } else {
            for (std::size_t t = 0; t < opt.samples_per_level; ++t) {
                const auto& lambda = subsets[uniform_index(rng, subsets.size())];
                auto groups = group(lambda);
                auto it = groups.begin();
                std::advance(it, static_cast<long>(uniform_index(rng, groups.size())));
                visit(it->second, it->first);
            }
        }
        prof.etas.push_back(eta);
        prof.witnesses.push_back(witness);
        prof.zetas.push_back(zeta);
        prof.pinnings_checked.push_back(checked);
        prof.fitted_C = std::max(prof.fitted_C, eta);
        prof.fitted_eta = std::max(prof.fitted_eta, eta / (n - k - 1));
    }
    return prof;
}

// ---------------------------------------------------------------------------
// s <-> r down-up walk on the subset encoding.

struct DownUpResult {
    LevelDistribution level;
    Kernel kernel;
    SpectrumReport spectrum;
};

inline DownUpResult down_up_matrix(const StateSpace& space, int s_level, int r_level, int max_n = 6,
                                   std::size_t cap = kDefaultMatrixCap) {
    const int n = space.n();
    if (n > max_n) throw CapExceeded("down-up matrices are limited to n <= " + std::to_string(max_n));
    if (s_level < 0 || s_level > n || r_level < 0 || r_level > s_level)
        throw InvalidInput("levels must satisfy 0 <= r <= s <= n");
    LevelDistribution upper(space, s_level);
    if (upper.size() > cap) throw CapExceeded("level distribution exceeds the matrix cap");
    // supersets[R] = indices of upper sets containing R.
    std::map<Pinning, std::vector<std::size_t>> supersets;
    std::vector<std::vector<Pinning>> downs(upper.size());
    for (std::size_t i = 0; i < upper.size(); ++i) {
        VertexSet verts = upper.sets()[i].pinned_vertices();
        for (const auto& pick : subsets_of_size(static_cast<int>(verts.size()), r_level)) {
            VertexSet chosen;
            for (int idx : pick) chosen.push_back(verts[idx]);
            Pinning R(n);
            for (Vertex v : chosen) R.pin(v, upper.sets()[i].spin(v));
            supersets[R].push_back(i);
            downs[i].push_back(std::move(R));
        }
    }
    const auto m = static_cast<Eigen::Index>(upper.size());
    Kernel k{Eigen::MatrixXd::Zero(m, m), upper.probabilities()};
    for (std::size_t i = 0; i < upper.size(); ++i) {
        const double drop = 1.0 / static_cast<double>(downs[i].size());
        for (const auto& R : downs[i]) {
            const auto& sup = supersets.at(R);
            double z = 0.0;
            for (auto j : sup) z += upper.probabilities()[j];
            for (auto j : sup)
                k.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += drop * upper.probabilities()[j] / z;
        }
    }
    SpectrumReport rep = spectral_gap(k);
    return {std::move(upper), std::move(k), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Approximate tensorization constant C_1 = 1 / (n * gap).

struct TensorizationResult {
    bool finite = true;
    double exact = std::numeric_limits<double>::infinity();
    double rayleigh = 0.0;  // best Var(f) / sum_v mu[Var_v(f)] found
    std::string diagnosis;
};

// Var(f) / sum_v mu[Var_v(f)], from block conditional variances.
inline double tensorization_ratio(const StateSpace& space, std::span<const double> f, const VertexSet& vertices) {
    double denom = 0.0;
    for (Vertex v : vertices) denom += var_S(space, f, {v});
    double num = variance(space, f);
    return denom > 0 ? num / denom : 0.0;
}

struct RayleighOptions {
    int starts = 1000;
    int warm_iterations = 10;
    int max_refine_iterations = 20000;
    std::uint64_t seed = 7;
};

// Max of the tensorization ratio via power iteration on the Glauber kernel
// from many random starting functions; the ratio is evaluated with the
// block-variance functionals, not with the kernel.
inline double rayleigh_tensorization(const StateSpace& space, const Kernel& k, const RayleighOptions& opt = {}) {
    const auto m = static_cast<Eigen::Index>(space.size());
    VertexSet all(static_cast<std::size_t>(space.n()));
    std::iota(all.begin(), all.end(), 0);
    if (m < 2) return 1.0;
    Eigen::Map<const Eigen::VectorXd> pi(space.probabilities().data(), m);
    Rng rng = make_stream(opt.seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd block(m, opt.starts);
    for (Eigen::Index i = 0; i < m; ++i)
        for (int c = 0; c < opt.starts; ++c) block(i, c) = gauss(rng);
    auto center = [&](Eigen::Ref<Eigen::VectorXd> f) {
        f.array() -= pi.dot(f);
        double norm = std::sqrt((pi.array() * f.array().square()).sum());
        if (norm > 0) f /= norm;
    };
    for (int c = 0; c < opt.starts; ++c) center(block.col(c));
    for (int it = 0; it < opt.warm_iterations; ++it) {
        block = k.matrix * block;
        for (int c = 0; c < opt.starts; ++c) center(block.col(c));
    }
    double best = 0.0;
    Eigen::VectorXd best_f = block.col(0);
    for (int c = 0; c < opt.starts; ++c) {
        std::vector<double> f(block.col(c).data(), block.col(c).data() + m);
        double r = tensorization_ratio(space, f, all);
        if (r > best) {
            best = r;
            best_f = block.col(c);
        }
    }
    // Refine the best start; the quotient <f, Pf>_pi converges monotonically.
    double prev = -1.0;
    for (int it = 0; it < opt.max_refine_iterations; ++it) {
        best_f = k.matrix * best_f;
        center(best_f);
        double q = best_f.dot((pi.array() * (k.matrix * best_f).array()).matrix());
        if (std::abs(q - prev) < 1e-13) break;
        prev = q;
    }
    std::vector<double> f(best_f.data(), best_f.data() + m);
    return std::max(best, tensorization_ratio(space, f, all));
}

inline TensorizationResult tensorization_constant(const SpinSystem& s, const StateSpace& space,
                                                  const RayleighOptions& ropt = {},
                                                  std::size_t cap = kDefaultMatrixCap) {
    TensorizationResult res;
    Kernel k = glauber_matrix(s, space, nullptr, cap);
    SpectrumReport rep = spectral_gap(k);
    if (rep.reducible || rep.gap <= 1e-12) {
        res.finite = false;
        res.diagnosis = "Glauber chain is reducible: " + std::to_string(rep.communicating_classes) +
                        " communicating classes over " + std::to_string(rep.state_count) + " feasible states";
        return res;
    }
    res.exact = 1.0 / (s.n() * rep.gap);
    res.rayleigh = rayleigh_tensorization(space, k, ropt);
    return res;
}

// ---------------------------------------------------------------------------
// Total-variation decay by kernel powering.

inline std::vector<double> tv_curve_from(const Kernel& k, std::size_t start, std::size_t max_steps) {
    const auto m = static_cast<Eigen::Index>(k.stationary.size());
    Eigen::Map<const Eigen::RowVectorXd> pi(k.stationary.data(), m);
    Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(m);
    dist(static_cast<Eigen::Index>(start)) = 1.0;
    std::vector<double> out;
    for (std::size_t t = 0; t <= max_steps; ++t) {
        out.push_back(0.5 * (dist - pi).cwiseAbs().sum());
        dist = dist * k.matrix;
    }
    return out;
}

inline double worst_row_tv(const Eigen::MatrixXd& power, const std::vector<double>& pi) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < power.rows(); ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < power.cols(); ++j) acc += std::abs(power(i, j) - pi[j]);
        worst = std::max(worst, 0.5 * acc);
    }
    return worst;
}

// max over starting states of TV(P^t(x, .), pi), by repeated squaring.
inline double worst_case_tv(const Kernel& k, std::uint64_t t) {
    const auto m = static_cast<Eigen::Index>(k.stationary.size());
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd base = k.matrix;
    while (t > 0) {
        if (t & 1) result = result * base;
        t >>= 1;
        if (t) base = base * base;
    }
    return worst_row_tv(result, k.stationary);
}

inline std::vector<double> worst_case_tv_curve(const Kernel& k, std::size_t max_steps) {
    const auto m = static_cast<Eigen::Index>(k.stationary.size());
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
    std::vector<double> out;
    for (std::size_t t = 0; t <= max_steps; ++t) {
        out.push_back(worst_row_tv(power, k.stationary));
        power = power * k.matrix;
    }
    return out;
}

}  // namespace spingap
