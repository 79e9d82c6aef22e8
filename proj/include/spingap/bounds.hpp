#pragma once

// Closed-form spectral-gap bounds, block-factorization constants, and
// model thresholds. All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace spingap::bounds {

// ceil(2C) with a guard so that C = 0.5 gives 1 and not 2.
inline int ceil_2c(double c) { return std::max(0, static_cast<int>(std::ceil(2.0 * c - 1e-12))); }

// ceil(theta * n) with the same guard (0.3 * 10 must give 3).
inline int ceil_theta_n(double theta, int n) {
    return std::max(0, static_cast<int>(std::ceil(theta * n - 1e-9)));
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput(what);
}

// Product form: (1/n) prod_{i=0}^{n-2} (1 - eta_i / (n - i - 1)), n = |etas| + 1.
inline double alo_gap_bound(const std::vector<double>& etas) {
    const int n = static_cast<int>(etas.size()) + 1;
    double prod = 1.0;
    for (int i = 0; i + 2 <= n; ++i) {
        require(etas[i] < n - i - 1, "eta_" + std::to_string(i) + " must be below n - i - 1");
        prod *= 1.0 - etas[i] / (n - i - 1);
    }
    return prod / n;
}

// (C, eta) form: (1 - eta)^{2+2C} / n^{2C} * (1/n).
inline double alo_gap_bound_ch(int n, double c, double eta) {
    require(n >= 1, "n must be positive");
    require(c >= 0, "C must be non-negative");
    require(eta >= 0 && eta < 1, "eta must lie in [0, 1)");
    return std::pow(1.0 - eta, 2.0 + 2.0 * c) / std::pow(static_cast<double>(n), 2.0 * c) / n;
}

struct MainGapBound {
    double value;  // with the unspecified universal constant set to 1 (nominal)
    bool precondition_met;  // 50 * ceil(2C) * Delta <= n
};

// c * (1-eta)^{1+2C} / (25 Delta ceil(2C))^{5 ceil(2C)} * (1/n), c := 1.
inline MainGapBound main_gap_bound(int n, int max_degree, double c, double eta) {
    require(eta >= 0 && eta < 1, "eta must lie in [0, 1)");
    require(c >= 0, "C must be non-negative");
    require(n >= 1, "n must be positive");
    require(max_degree >= 0, "Delta must be non-negative");
    const int k = ceil_2c(c);
    double log_value = (1.0 + 2.0 * c) * std::log1p(-eta) - std::log(static_cast<double>(n));
    if (k > 0) {
        double base = 25.0 * max_degree * k;
        log_value -= base > 0 ? 5.0 * k * std::log(base) : -std::numeric_limits<double>::infinity();
    }
    return {std::exp(log_value), 50LL * k * max_degree <= n};
}

// zeta_i = min(eta, C / (n - i - 1)); for i = n - 1 the second term is +inf.
inline double zeta(int n, int i, double c, double eta) {
    int denom = n - i - 1;
    return denom > 0 ? std::min(eta, c / denom) : eta;
}

inline double alpha(int n, int i, double c, double eta) {
    double z = zeta(n, i, c, eta);
    return (1.0 - z) / (1.0 + z);
}

// kappa from explicit local contraction rates alpha_0, alpha_1, ...
inline double kappa_from_alphas(const std::vector<double>& alphas, int r, int s) {
    require(0 <= r && r <= s, "levels must satisfy 0 <= r <= s");
    require(s == 0 || static_cast<int>(alphas.size()) >= s - 1, "too few alphas for level s");
    double prefix = 1.0, num = 0.0, den = 0.0;
    for (int k = 0; k < s; ++k) {
        if (k > 0) prefix *= alphas[k - 1];
        den += prefix;
        if (k >= r) num += prefix;
    }
    return den > 0 ? num / den : 0.0;
}

// kappa_{r,s} = sum_{k=r}^{s-1} alpha_0..alpha_{k-1} / sum_{k=0}^{s-1} alpha_0..alpha_{k-1}.
inline double kappa_rs(int n, int r, int s, double c, double eta) {
    require(0 <= r && r <= s && s <= n, "levels must satisfy 0 <= r <= s <= n");
    require(eta >= 0 && eta < 1, "eta must lie in [0, 1)");
    require(c >= 0, "C must be non-negative");
    std::vector<double> alphas;
    for (int i = 0; i + 1 < std::max(s, 1); ++i) alphas.push_back(alpha(n, i, c, eta));
    return kappa_from_alphas(alphas, r, s);
}

struct BlockFactorization {
    int ell;
    double exact;            // (ell / n) / kappa_{n-ell, n}
    double simple;           // (2 / theta)^{ceil(2C) + 1}
    bool simple_applicable;  // theta * n >= 4 ceil(2C)
};

inline double block_factorization_constant(int n, int ell, double c, double eta) {
    require(1 <= ell && ell <= n, "block size must satisfy 1 <= l <= n");
    return (static_cast<double>(ell) / n) / kappa_rs(n, n - ell, n, c, eta);
}

inline double bf_simple_bound(double theta, double c) {
    require(theta > 0 && theta <= 1, "theta must lie in (0, 1]");
    return std::pow(2.0 / theta, ceil_2c(c) + 1);
}

inline BlockFactorization block_factorization(int n, double theta, double c, double eta) {
    require(theta > 0 && theta <= 1, "theta must lie in (0, 1]");
    int ell = std::max(1, ceil_theta_n(theta, n));
    return {ell, block_factorization_constant(n, ell, c, eta), bf_simple_bound(theta, c),
            theta * n >= 4.0 * ceil_2c(c)};
}

// C_l / (1-eta)^{1+2C} * sum_{k=1}^{l} k^{2C} (2 e Delta theta)^{k-1}.
inline double at_chain_bound(double c_ell, double c, double eta, int max_degree, double theta, int ell) {
    require(max_degree >= 1, "Delta must be at least 1");
    require(theta > 0 && theta <= 1.0 / (4.0 * std::numbers::e * max_degree), "theta must satisfy theta <= 1/(4 e Delta)");
    require(eta >= 0 && eta < 1, "eta must lie in [0, 1)");
    require(ell >= 1, "l must be positive");
    const double ratio = 2.0 * std::numbers::e * max_degree * theta;
    double sum = 0.0;
    for (int k = 1; k <= ell; ++k) sum += std::pow(static_cast<double>(k), 2.0 * c) * std::pow(ratio, k - 1);
    return c_ell / std::pow(1.0 - eta, 1.0 + 2.0 * c) * sum;
}

// P[|S_v| = k] <= (l / n) (2 e Delta theta)^{k-1}, l = ceil(theta n).
inline double component_tail_bound(int n, int max_degree, double theta, int k) {
    require(k >= 1, "component size k must be at least 1");
    require(n >= 1, "n must be positive");
    int ell = ceil_theta_n(theta, n);
    return static_cast<double>(ell) / n * std::pow(2.0 * std::numbers::e * max_degree * theta, k - 1);
}

// Tree uniqueness threshold (Delta-1)^{Delta-1} / (Delta-2)^Delta.
inline double lambda_critical(int max_degree) {
    require(max_degree >= 3, "lambda_c needs Delta >= 3");
    const double d = max_degree;
    return std::exp((d - 1) * std::log(d - 1) - d * std::log(d - 2));
}

// Root of x = exp(1/x) on [1.5, 2].
inline double alpha_star() {
    double lo = 1.5, hi = 2.0;
    auto g = [](double x) { return x - std::exp(1.0 / x); };
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct MixingRelations {
    double warm_bound;   // tau_rel * log(warm_ratio / eps)
    double worst_bound;  // tau_rel * log(1 / (eps * min_mu))
    double lower_bound;  // (tau_rel - 1) * log(1 / (2 eps))
};

inline MixingRelations mixing_relations(double tau_rel, double eps, double min_mu, double warm_ratio = 1.0) {
    require(tau_rel >= 1, "tau_rel must be at least 1");
    require(eps > 0 && eps < 1, "eps must lie in (0, 1)");
    require(min_mu > 0 && min_mu <= 1, "min mu must lie in (0, 1]");
    require(warm_ratio >= 1, "warm ratio must be at least 1");
    return {tau_rel * std::log(warm_ratio / eps), tau_rel * std::log(1.0 / (eps * min_mu)),
            (tau_rel - 1.0) * std::log(1.0 / (2.0 * eps))};
}

struct RegimeReport {
    std::string kind;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::pair<std::string, bool>> flags;
    std::vector<std::pair<std::string, std::string>> notes;
};

struct RegimeParams {
    int max_degree = 3;
    double delta = 0.1;
    int k = 0;             // colors
    int n = 0;             // vertex count (coloring HV06 threshold)
    double lambda = 1.0;   // fugacity
};

inline RegimeReport regime_checks(const std::string& kind, const RegimeParams& p) {
    RegimeReport rep{kind, {}, {}, {}};
    if (kind == "coloring") {
        double t1 = (1.0 + p.delta) * alpha_star() * p.max_degree;
        rep.values.emplace_back("alpha_star", alpha_star());
        rep.values.emplace_back("k_threshold_alpha", t1);
        rep.flags.emplace_back("k_ge_alpha_threshold", p.k >= t1);
        if (p.n > 0 && p.delta > 0) {
            double t2 = 288.0 * std::log(96.0 * std::pow(p.n, 3) / p.delta) / (p.delta * p.delta);
            rep.values.emplace_back("k_threshold_log", t2);
            rep.flags.emplace_back("k_ge_log_threshold", p.k >= t2);
            rep.flags.emplace_back("coupling_regime", p.k >= t1 && p.k >= t2);
        }
        rep.notes.emplace_back("C", "O(delta^-2): not evaluable");
        rep.notes.emplace_back("eta", "1 - k^{-O(delta^-2)}: not evaluable");
    } else if (kind == "hardcore") {
        double lc = lambda_critical(p.max_degree);
        rep.values.emplace_back("lambda_c", lc);
        rep.values.emplace_back("lambda_threshold", (1.0 - p.delta) * lc);
        rep.values.emplace_back("eta", p.lambda / (1.0 + p.lambda));
        rep.flags.emplace_back("lambda_le_threshold", p.lambda <= (1.0 - p.delta) * lc);
        rep.notes.emplace_back("C", "O(delta^-1): not evaluable");
    } else if (kind == "matching") {
        require(p.max_degree >= 0, "Delta must be non-negative");
        rep.values.emplace_back("C", 2.0 * std::sqrt(1.0 + p.max_degree));
        rep.values.emplace_back("eta", p.lambda / (1.0 + p.lambda));
        rep.flags.emplace_back("delta_ge_2", p.max_degree >= 2);
    } else {
        throw InvalidInput("regime kind must be coloring, hardcore, or matching");
    }
    return rep;
}

}  // namespace spingap::bounds
