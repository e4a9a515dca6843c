#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "support/builders.hpp"
#include "support/tree_oracle.hpp"
#include "treemover/errors.hpp"
#include "treemover/graph.hpp"
#include "treemover/rng.hpp"
#include "treemover/tmd.hpp"

using namespace treemover;
using namespace testsupport;

namespace {

Graph single_node(const FeatureVector& x) {
    Graph g;
    g.node_count = 1;
    g.features = {x};
    return g;
}

Graph two_isolated(const FeatureVector& x) {
    Graph g;
    g.node_count = 2;
    g.features = {x, x};
    return g;
}

WeightFn as_fn(const DepthWeights& w) {
    return [w](int level) { return w.at(level); };
}

std::vector<int> random_permutation(CounterRng& rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_int(0, i));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

Graph scaled(const Graph& g, double c) {
    Graph out = g;
    for (auto& x : out.features) {
        for (double& v : x) v *= c;
    }
    for (auto& e : out.edge_features) {
        for (double& v : e) v *= c;
    }
    return out;
}

}  // namespace

TEST_CASE("level one distances are feature distances") {
    const auto ld = level_distances(single_node({1.0}), single_node({1.0}), 1, DepthWeights());
    CHECK(ld.cross[0][0][0] == 0.0);

    const auto ld2 = level_distances(single_node({3.0, 4.0}), single_node({0.0, 0.0}), 1,
                                     DepthWeights());
    CHECK(ld2.blank_g[0][0] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(ld2.cross[0][0][0] == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("worked example: edge versus two isolated nodes") {
    const Graph edge = path_graph(2);
    const Graph isolated = two_isolated({1.0});

    const auto ld = level_distances(edge, isolated, 2, DepthWeights());
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            CHECK(ld.cross[1][u][v] == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
    CHECK(tmd(edge, isolated, 2, DepthWeights()) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(tmd_oracle(edge, isolated, 2, [](int) { return 1.0; }) ==
          doctest::Approx(2.0).epsilon(1e-15));

    // halving the level-2 weight halves the child-transport term
    CHECK(tmd(edge, isolated, 2, DepthWeights::constant(0.5)) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single-node graphs at depth 1") {
    CHECK(tmd(single_node({1.0}), single_node({4.0}), 1, DepthWeights()) == 3.0);
    CHECK(tmd_oracle(single_node({1.0}), single_node({4.0}), 1, [](int) { return 1.0; }) == 3.0);
}

TEST_CASE("identical graphs are at distance exactly zero") {
    CounterRng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 8, 0.4, 2);
        for (int depth : {1, 2, 4}) {
            CHECK(tmd(g, g, depth, DepthWeights()) == 0.0);
        }
    }
    CHECK(tmd(complete_graph(3), complete_graph(3), 3, DepthWeights()) == 0.0);
}

TEST_CASE("C6 and two triangles are at distance exactly zero at all depths") {
    const Graph c6 = cycle_graph(6);
    const Graph two_c3 = disjoint_union(complete_graph(3), complete_graph(3));
    for (int depth = 1; depth <= 5; ++depth) {
        CHECK(tmd(c6, two_c3, depth, DepthWeights()) == 0.0);
    }
}

TEST_CASE("matches the materialized-tree oracle on random pairs") {
    CounterRng rng(12);
    int checked = 0;
    for (int rep = 0; rep < 70; ++rep) {
        auto sub = rng.split(rep);
        const int dim = 1 + static_cast<int>(sub.uniform_int(0, 1));
        const Graph g = random_graph(sub, 6, 0.4, dim);
        const Graph h = random_graph(sub, 6, 0.4, dim);
        const int depth = 1 + static_cast<int>(sub.uniform_int(0, 2));
        const DepthWeights w =
            rep % 3 == 0 ? DepthWeights::constant(0.7)
                         : (rep % 3 == 1 ? DepthWeights() : DepthWeights::per_level({0.5, 1.5}));
        const double fast = tmd(g, h, depth, w);
        const double slow = tmd_oracle(g, h, depth, as_fn(w));
        CHECK(std::fabs(fast - slow) <= 1e-9);
        ++checked;
    }
    CHECK(checked == 70);
}

TEST_CASE("matches the oracle when graphs carry edge features") {
    CounterRng rng(13);
    for (int rep = 0; rep < 40; ++rep) {
        auto sub = rng.split(rep);
        Graph g = random_graph(sub, 5, 0.5, 1);
        Graph h = random_graph(sub, 5, 0.5, 1);
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            g.edge_features.push_back({sub.uniform(0.0, 2.0)});
        }
        for (std::size_t i = 0; i < h.edges.size(); ++i) {
            h.edge_features.push_back({sub.uniform(0.0, 2.0)});
        }
        if (g.edges.empty() || h.edges.empty()) continue;  // schema mismatch guard trips
        const int depth = 2 + static_cast<int>(sub.uniform_int(0, 1));
        const double fast = tmd(g, h, depth, DepthWeights());
        const double slow = tmd_oracle(g, h, depth, [](int) { return 1.0; });
        CHECK(std::fabs(fast - slow) <= 1e-9);
    }
}

TEST_CASE("uniform edge features do not change the distance") {
    // the extension recovers the plain distance when all edge features agree
    CounterRng rng(14);
    for (int rep = 0; rep < 20; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 6, 0.5, 1);
        const Graph h = random_graph(sub, 6, 0.5, 1);
        if (g.edges.empty() || h.edges.empty()) continue;
        Graph ge = g;
        Graph he = h;
        ge.edge_features.assign(ge.edges.size(), {4.25});
        he.edge_features.assign(he.edges.size(), {4.25});
        const double plain = tmd(g, h, 3, DepthWeights());
        const double dressed = tmd(ge, he, 3, DepthWeights());

        // matched edges contribute zero; blank matches add the shared norm,
        // so distances can only grow, and equal-degree pairs stay equal
        CHECK(dressed >= plain - 1e-12);
        CHECK(tmd(ge, ge, 3, DepthWeights()) == 0.0);
    }
}

TEST_CASE("pseudometric axioms on random triples") {
    CounterRng rng(15);
    for (int rep = 0; rep < 60; ++rep) {
        auto sub = rng.split(rep);
        const Graph a = random_graph(sub, 7, 0.35, 1);
        const Graph b = random_graph(sub, 7, 0.35, 1);
        const Graph c = random_graph(sub, 7, 0.35, 1);
        const int depth = 1 + static_cast<int>(sub.uniform_int(0, 2));
        const DepthWeights w;

        const double ab = tmd(a, b, depth, w);
        const double ba = tmd(b, a, depth, w);
        CHECK(ab == ba);  // bitwise, not approximate
        CHECK(tmd(a, a, depth, w) == 0.0);
        const double ac = tmd(a, c, depth, w);
        const double bc = tmd(b, c, depth, w);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("relabeling nodes leaves the distance unchanged") {
    CounterRng rng(16);
    for (int rep = 0; rep < 40; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 7, 0.4, 1);
        const Graph h = random_graph(sub, 7, 0.4, 1);
        const Graph gp = permute_graph(g, random_permutation(sub, g.node_count));
        const Graph hp = permute_graph(h, random_permutation(sub, h.node_count));
        const int depth = 1 + static_cast<int>(sub.uniform_int(0, 2));
        const double base = tmd(g, h, depth, DepthWeights());
        CHECK(tmd(gp, h, depth, DepthWeights()) == base);
        CHECK(tmd(g, hp, depth, DepthWeights()) == base);
        CHECK(tmd(gp, hp, depth, DepthWeights()) == base);
        CHECK(tmd(g, gp, depth, DepthWeights()) == 0.0);
    }
}

TEST_CASE("feature scaling is homogeneous") {
    CounterRng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        auto sub = rng.split(rep);
        Graph g = random_graph(sub, 6, 0.4, 2);
        Graph h = random_graph(sub, 6, 0.4, 2);
        const double c = sub.uniform(0.1, 5.0);
        const double base = tmd(g, h, 3, DepthWeights());
        const double stretched = tmd(scaled(g, c), scaled(h, c), 3, DepthWeights());
        CHECK(stretched == doctest::Approx(c * base).epsilon(1e-9));
    }
}

TEST_CASE("blank column recursion matches its closed form") {
    CounterRng rng(18);
    for (int rep = 0; rep < 20; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 7, 0.4, 2);
        const Graph h = random_graph(sub, 3, 0.4, 2);
        const int depth = 4;
        const DepthWeights w = DepthWeights::per_level({0.5, 2.0, 1.25});
        const auto ld = level_distances(g, h, depth, w);

        const auto adj = build_adjacency(g);
        std::vector<std::vector<double>> beta(depth, std::vector<double>(g.node_count, 0.0));
        for (int v = 0; v < g.node_count; ++v) beta[0][v] = euclidean_norm(g.features[v]);
        for (int t = 2; t <= depth; ++t) {
            for (int v = 0; v < g.node_count; ++v) {
                double acc = 0.0;
                for (const auto& [s, ei] : adj[v]) acc += beta[t - 2][s];
                beta[t - 1][v] = euclidean_norm(g.features[v]) + w.at(t) * acc;
            }
        }
        for (int t = 0; t < depth; ++t) {
            for (int v = 0; v < g.node_count; ++v) {
                CHECK(ld.blank_g[t][v] == doctest::Approx(beta[t][v]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("pairwise matrix is symmetric with zero diagonal") {
    CounterRng rng(19);
    std::vector<Graph> graphs;
    for (int i = 0; i < 8; ++i) {
        auto sub = rng.split(i);
        graphs.push_back(random_graph(sub, 7, 0.35, 1));
    }
    const auto m = pairwise_tmd(graphs, 3, DepthWeights());
    REQUIRE(m.values.size() == graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        CHECK(m.values[i][i] == 0.0);
        for (std::size_t j = 0; j < graphs.size(); ++j) {
            CHECK(m.values[i][j] == m.values[j][i]);
        }
    }
    CHECK(m.labels.size() == graphs.size());

    // single-graph and duplicated-graph datasets
    const auto one = pairwise_tmd({graphs[0]}, 2, DepthWeights());
    CHECK(one.values == std::vector<std::vector<double>>{{0.0}});
    const auto dup = pairwise_tmd({graphs[1], graphs[1]}, 2, DepthWeights());
    CHECK(dup.values == std::vector<std::vector<double>>{{0.0, 0.0}, {0.0, 0.0}});
}

TEST_CASE("parallel and serial pairwise agree bitwise") {
    CounterRng rng(20);
    std::vector<Graph> graphs;
    for (int i = 0; i < 10; ++i) {
        auto sub = rng.split(i);
        graphs.push_back(random_graph(sub, 8, 0.3, 1));
    }
    const auto par = pairwise_tmd(graphs, 3, DepthWeights());
    const auto ser = pairwise_tmd_serial(graphs, 3, DepthWeights());
    CHECK(par.values == ser.values);

    const auto cross_par = cross_tmd(graphs, graphs, 2, DepthWeights());
    const auto cross_ser = cross_tmd_serial(graphs, graphs, 2, DepthWeights());
    CHECK(cross_par == cross_ser);
}

TEST_CASE("set distance") {
    const auto sd = set_distance({{2.0, 5.0}, {7.0, 1.0}});
    CHECK(sd.minima == std::vector<double>{2.0, 1.0});
    CHECK(sd.xi == 2.0);

    CHECK(set_distance({{3.5}}).xi == 3.5);

    // test contained in train: some column of each row is zero
    const auto zero = set_distance({{0.0, 4.0}, {9.0, 0.0}});
    CHECK(zero.xi == 0.0);

    CHECK_THROWS_AS(set_distance({}), ContractError);
    CHECK_THROWS_AS(set_distance({{}}), ContractError);
    CHECK_THROWS_AS(set_distance({{-1.0}}), ContractError);
}

TEST_CASE("contract violations") {
    const Graph a = single_node({1.0});
    const Graph b = single_node({1.0, 2.0});
    CHECK_THROWS_AS(tmd(a, b, 1, DepthWeights()), ContractError);
    CHECK_THROWS_AS(tmd(a, a, 0, DepthWeights()), ContractError);
    CHECK_THROWS_AS(DepthWeights::constant(0.0), ContractError);
    CHECK_THROWS_AS(DepthWeights::constant(-1.0), ContractError);
    CHECK_THROWS_AS(DepthWeights::per_level({1.0, 0.0}), ContractError);

    Graph with_e = path_graph(3);
    with_e.edge_features = {{1.0}, {1.0}};
    CHECK_THROWS_AS(tmd(with_e, path_graph(3), 2, DepthWeights()), ContractError);
    Graph other_dim = path_graph(3);
    other_dim.edge_features = {{1.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(tmd(with_e, other_dim, 2, DepthWeights()), ContractError);

    // oracle guards
    CHECK_THROWS_AS(tmd_oracle(complete_graph(9), complete_graph(3), 2, [](int) { return 1.0; }),
                    ContractError);
    CHECK_THROWS_AS(tmd_oracle(a, a, 5, [](int) { return 1.0; }), ContractError);
}

TEST_CASE("depth weight lookup clamps to the last level") {
    const auto w = DepthWeights::per_level({0.5, 2.0});
    CHECK(w.at(2) == 0.5);
    CHECK(w.at(3) == 2.0);
    CHECK(w.at(7) == 2.0);
    CHECK_THROWS_AS(w.at(1), ContractError);
}
