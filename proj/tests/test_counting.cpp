#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "spingap/counting.hpp"
#include "spingap/generators.hpp"

using namespace spingap;

namespace {

oracle::EdgeList edges_of(const Graph& g) { return {g.edges().begin(), g.edges().end()}; }

std::vector<Vertex> identity_order(int n) {
    std::vector<Vertex> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace

TEST(Telescope, PathWithMiddleVertex) {
    auto trace = telescoping_partition(path_graph(3), 1.0, {1});
    ASSERT_EQ(trace.steps.size(), 1u);
    EXPECT_NEAR(trace.steps[0].marginal, 0.2, 1e-12);
    EXPECT_TRUE(trace.residuals.back().empty());
    EXPECT_NEAR(std::exp(trace.log_z), 5.0, 1e-10);
}

TEST(Telescope, SingleVertex) {
    auto trace = telescoping_partition(Graph(1), 2.0, {0});
    EXPECT_NEAR(trace.steps[0].marginal, 2.0 / 3, 1e-12);
    EXPECT_NEAR(std::exp(trace.log_z), 3.0, 1e-10);
}

TEST(Telescope, CycleOfFour) {
    auto trace = telescoping_partition(cycle_graph(4), 1.0, identity_order(4));
    EXPECT_NEAR(trace.log_z, std::log(7.0), 1e-10);
    // 0 removes 1 and 3; 2 survives; 1 and 3 are skipped.
    EXPECT_EQ(trace.skipped, (std::vector<Vertex>{1, 3}));
    EXPECT_EQ(trace.steps.size(), 2u);
}

TEST(Telescope, RejectsBadOrders) {
    EXPECT_THROW(telescoping_partition(path_graph(3), 1.0, {0, 0}), InvalidInput);
    EXPECT_THROW(telescoping_partition(path_graph(3), 1.0, {5}), InvalidInput);
    EXPECT_THROW(telescoping_partition(path_graph(3), 0.0, {0}), InvalidInput);
}

TEST(Telescope, EmptyOrderEnumeratesWholeGraph) {
    auto trace = telescoping_partition(cycle_graph(5), 1.0, {});
    EXPECT_FALSE(trace.final_edgeless);
    EXPECT_NEAR(trace.log_z, std::log(11.0), 1e-10);
}

// Exact marginals reproduce log Z for every instance and many orders.
TEST(Telescope, OrderInvariance) {
    Rng rng = make_stream(17);
    std::vector<Graph> graphs{path_graph(6), cycle_graph(6), star_graph(5), grid_graph(2, 4), complete_graph(4)};
    for (std::uint64_t seed = 0; seed < 10; ++seed) graphs.push_back(gnp_graph(9, 2.5, seed));
    for (const auto& g : graphs)
        for (double lambda : {0.4, 1.0, 2.3}) {
            double exact = std::log(oracle::hardcore_z(g.vertex_count(), edges_of(g), lambda));
            for (int trial = 0; trial < 5; ++trial) {
                auto order = identity_order(g.vertex_count());
                std::shuffle(order.begin(), order.end(), rng);
                order.resize(uniform_index(rng, order.size() + 1));
                auto trace = telescoping_partition(g, lambda, order);
                EXPECT_NEAR(trace.log_z, exact, 1e-10);
            }
        }
}

// mu_{G_{i-1}}(v_i) Z(G_{i-1}) = lambda Z(G_i) at each step, both sides from
// the brute-force oracle on the residual graphs.
TEST(Telescope, PerStepIdentity) {
    Graph g = grid_graph(3, 3);
    const double lambda = 1.7;
    auto trace = telescoping_partition(g, lambda, {4, 0, 8, 2, 6});
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        auto before = induced_subgraph(g, trace.residuals[i]);
        auto after = induced_subgraph(g, trace.residuals[i + 1]);
        double z_before = oracle::hardcore_z(before.graph.vertex_count(), edges_of(before.graph), lambda);
        double z_after = oracle::hardcore_z(after.graph.vertex_count(), edges_of(after.graph), lambda);
        EXPECT_NEAR(trace.steps[i].marginal * z_before, lambda * z_after, 1e-10 * z_before);
    }
}

TEST(Telescope, McmcMarginals) {
    TelescopeOptions opt;
    opt.mode = MarginalMode::Mcmc;
    opt.mcmc = {20000, 500, 8, 5};
    auto trace = telescoping_partition(cycle_graph(6), 1.0, identity_order(6), opt);
    EXPECT_GT(trace.log_z_standard_error, 0.0);
    EXPECT_NEAR(std::exp(trace.log_z), 18.0, 0.1 * 18.0);
    auto again = telescoping_partition(cycle_graph(6), 1.0, identity_order(6), opt);
    EXPECT_EQ(trace.log_z, again.log_z);
}

TEST(Bis, Examples) {
    Graph cherry(3, {{0, 2}, {1, 2}});
    auto pass = bis_condition_check(cherry, {{0, 1}, {2}});
    EXPECT_EQ(pass.max_degree_left, 1);
    EXPECT_EQ(pass.min_degree_right, 2);
    EXPECT_TRUE(pass.pass);
    auto k22 = bis_condition_check(complete_bipartite_graph(2, 2), {{0, 1}, {2, 3}});
    EXPECT_EQ(k22.max_degree_left, 2);
    EXPECT_FALSE(k22.pass);
    auto edgeless = bis_condition_check(Graph(3), {{0}, {1, 2}});
    EXPECT_EQ(edgeless.min_degree_right, 0);
    EXPECT_FALSE(edgeless.pass);
    EXPECT_THROW(bis_condition_check(path_graph(3), {{0, 1}, {2}}), InvalidInput);
}

TEST(Bis, EmptyRightSidePassesVacuously) {
    auto rep = bis_condition_check(Graph(2), {{0, 1}, {}});
    EXPECT_FALSE(rep.min_degree_right.has_value());
    EXPECT_TRUE(rep.pass);
}

// Adding an edge that leaves Delta_L unchanged can only raise delta_R, so a
// passing instance keeps passing.
TEST(Bis, MonotoneUnderEdgesKeepingLeftDegree) {
    Rng rng = make_stream(31);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int nl = 1 + static_cast<int>(uniform_index(rng, 3)), nr = 1 + static_cast<int>(uniform_index(rng, 4));
        BipartitePartition part;
        for (int i = 0; i < nl; ++i) part.left.push_back(i);
        for (int j = 0; j < nr; ++j) part.right.push_back(nl + j);
        std::vector<Edge> edges;
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nr; ++j)
                if (uniform01(rng) < 0.6) edges.emplace_back(i, nl + j);
        Graph g(nl + nr, edges);
        auto rep = bis_condition_check(g, part);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nr; ++j) {
                Edge e{i, nl + j};
                if (std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
                if (g.degree(i) + 1 > rep.max_degree_left) continue;
                auto more = edges;
                more.push_back(e);
                auto after = bis_condition_check(Graph(nl + nr, more), part);
                EXPECT_EQ(after.max_degree_left, rep.max_degree_left);
                if (rep.pass) {
                    EXPECT_TRUE(after.pass);
                    ++checked;
                }
            }
    }
    EXPECT_GT(checked, 0);
}

TEST(Fptas, Examples) {
    Graph cherry(3, {{0, 2}, {1, 2}});
    auto trace = fptas_reduction(cherry, {{0, 1}, {2}}, 1.0);
    EXPECT_TRUE(trace.final_edgeless);
    EXPECT_NEAR(std::exp(trace.log_z), 5.0, 1e-10);
    auto k22 = fptas_reduction(complete_bipartite_graph(2, 2), *bipartite_partition(complete_bipartite_graph(2, 2)), 1.0);
    EXPECT_NEAR(std::exp(k22.log_z), 7.0, 1e-10);
    auto c6 = fptas_reduction(cycle_graph(6), *bipartite_partition(cycle_graph(6)), 1.0);
    EXPECT_NEAR(std::exp(c6.log_z), 18.0, 1e-9);
    EXPECT_TRUE(c6.final_edgeless);
}

TEST(Anneal, ScheduleAndAnchor) {
    AnnealOptions opt;
    opt.steps_per_level = 200;
    opt.chains = 2;
    auto res = annealing_partition(cycle_graph(5), 1.0, opt);
    EXPECT_NEAR(res.lambda0, 0.002, 1e-15);
    EXPECT_NEAR(res.log_z0, std::log1p(5 * 0.002), 1e-15);
    EXPECT_EQ(static_cast<int>(res.levels.size()), static_cast<int>(std::ceil(8 * 5 * std::log(2.0))));
    EXPECT_NEAR(res.levels.back().lambda_to, 1.0, 1e-12);
    EXPECT_NEAR(res.levels.front().lambda_from, res.lambda0, 1e-15);
    for (std::size_t i = 1; i < res.levels.size(); ++i) {
        EXPECT_NEAR(res.levels[i].lambda_from, res.levels[i - 1].lambda_to, 1e-15);
        double g0 = (1 + res.levels[i].lambda_to) / (1 + res.levels[i].lambda_from);
        double g1 = (1 + res.levels[0].lambda_to) / (1 + res.levels[0].lambda_from);
        EXPECT_NEAR(g0, g1, 1e-9);
    }
    // The anchor remainder is the relative error of 1 + n lambda0 vs the
    // edgeless partition function, an upper bound on Z(lambda0) itself.
    double edgeless = std::pow(1 + res.lambda0, 5);
    EXPECT_NEAR(res.anchor_remainder, (edgeless - (1 + 5 * res.lambda0)) / (1 + 5 * res.lambda0), 1e-15);
    double z0 = oracle::hardcore_z(5, oracle::cycle_edges(5), res.lambda0);
    EXPECT_LE(std::abs(z0 / std::exp(res.log_z0) - 1), res.anchor_remainder + 1e-15);
}

TEST(Anneal, UnitRatioLevelIsExactlyOne) {
    std::vector<ChainState> chains{{Configuration(4, 0), 0, make_stream(1)}};
    auto lr = anneal_level_ratio(cycle_graph(4), 0.7, 0.7, chains, 10, 1000);
    EXPECT_EQ(lr.ratio, 1.0);
    EXPECT_EQ(lr.standard_error, 0.0);
}

TEST(Anneal, SingleVertexCoverage) {
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        AnnealOptions opt;
        opt.steps_per_level = 400;
        opt.burnin = 20;
        opt.chains = 8;
        opt.seed = seed;
        auto res = annealing_partition(Graph(1), 1.0, opt);
        covered += std::abs(std::exp(res.log_z) - 2.0) <= 3 * 2.0 * res.log_z_standard_error;
    }
    EXPECT_GE(covered, 90);
}

TEST(Anneal, SmallGraphs) {
    AnnealOptions opt;
    opt.seed = 3;
    auto c5 = annealing_partition(cycle_graph(5), 1.0, opt);
    EXPECT_NEAR(std::exp(c5.log_z), 11.0, 3 * 11.0 * c5.log_z_standard_error);
    auto p3 = annealing_partition(path_graph(3), 1.0, opt);
    EXPECT_NEAR(std::exp(p3.log_z), 5.0, 3 * 5.0 * p3.log_z_standard_error);
}

TEST(Anneal, Errors) {
    EXPECT_THROW(annealing_partition(cycle_graph(3), 0.0), InvalidInput);
    AnnealOptions opt;
    opt.chains = 0;
    EXPECT_THROW(annealing_partition(cycle_graph(3), 1.0, opt), InvalidInput);
}
