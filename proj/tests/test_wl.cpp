#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "support/builders.hpp"
#include "support/tree_oracle.hpp"
#include "treemover/graph.hpp"
#include "treemover/rng.hpp"
#include "treemover/wl.hpp"

using namespace treemover;
using namespace testsupport;

namespace {

std::vector<int> sorted_histogram(const std::vector<int>& colors) {
    std::map<int, int> counts;
    for (int c : colors) ++counts[c];
    std::vector<int> h;
    for (const auto& [color, n] : counts) h.push_back(n);
    std::sort(h.begin(), h.end());
    return h;
}

// walks[l][v] = number of length-l walks starting at v, by neighbor-sum DP
std::vector<std::vector<long long>> walk_counts(const Graph& g, int max_len) {
    std::vector<std::vector<long long>> walks(max_len + 1,
                                              std::vector<long long>(g.node_count, 0));
    walks[0].assign(g.node_count, 1);
    const auto adj = build_adjacency(g);
    for (int l = 1; l <= max_len; ++l) {
        for (int v = 0; v < g.node_count; ++v) {
            for (const auto& [u, idx] : adj[v]) walks[l][v] += walks[l - 1][u];
        }
    }
    return walks;
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

}  // namespace

TEST_CASE("regular graphs stay monochromatic") {
    const auto c = wl_refine(cycle_graph(6), 3);
    for (int t = 0; t <= 3; ++t) CHECK(c.classes_at(t) == 1);
}

TEST_CASE("star splits into center and leaves after one iteration") {
    const auto c = wl_refine(star_graph(3), 1);
    CHECK(c.classes_at(0) == 1);
    CHECK(c.classes_at(1) == 2);
    // center alone in its class
    CHECK(c.colors[1][0] != c.colors[1][1]);
    CHECK(c.colors[1][1] == c.colors[1][2]);
    CHECK(c.colors[1][1] == c.colors[1][3]);
}

TEST_CASE("iteration zero groups by exact feature value") {
    Graph g;
    g.node_count = 3;
    g.features = {{1.0}, {2.0}, {1.0}};
    const auto c = wl_refine(g, 0);
    CHECK(c.classes_at(0) == 2);
    CHECK(c.colors[0][0] == c.colors[0][2]);
    CHECK(c.colors[0][0] != c.colors[0][1]);
    // ids are dense and assigned in first-appearance order
    CHECK(c.colors[0][0] == 0);
    CHECK(c.colors[0][1] == 1);
}

TEST_CASE("a graph never distinguishes itself") {
    CounterRng rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 8, 0.4, 1);
        CHECK_FALSE(wl_distinguishes(g, g, 4).has_value());
    }
}

TEST_CASE("star vs path distinguished by degrees at iteration 1") {
    const auto it = wl_distinguishes(star_graph(3), path_graph(4), 2);
    REQUIRE(it.has_value());
    CHECK(*it == 1);
}

TEST_CASE("C6 vs two triangles are never distinguished") {
    const Graph two_triangles = disjoint_union(complete_graph(3), complete_graph(3));
    CHECK_FALSE(wl_distinguishes(cycle_graph(6), two_triangles, 5).has_value());
}

TEST_CASE("different node counts are distinguished immediately") {
    const auto it = wl_distinguishes(cycle_graph(6), cycle_graph(5), 3);
    REQUIRE(it.has_value());
    CHECK(*it == 0);
}

TEST_CASE("each iteration refines the previous partition") {
    CounterRng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 10, 0.3, 1, {1.0, 2.0, 3.0});
        const auto c = wl_refine(g, 6);
        for (int t = 0; t < 6; ++t) {
            std::map<int, int> fine_to_coarse;
            for (int v = 0; v < g.node_count; ++v) {
                const auto [it, fresh] = fine_to_coarse.emplace(c.colors[t + 1][v], c.colors[t][v]);
                CHECK(it->second == c.colors[t][v]);
            }
        }
    }
}

TEST_CASE("class count is monotone and stable after convergence") {
    CounterRng rng(8);
    for (int rep = 0; rep < 30; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 10, 0.35, 1);
        const auto c = wl_refine(g, 12);
        bool converged = false;
        for (int t = 1; t <= 12; ++t) {
            const int prev = c.classes_at(t - 1);
            const int cur = c.classes_at(t);
            CHECK(cur >= prev);
            if (converged) CHECK(cur == prev);
            if (cur == prev) converged = true;
        }
    }
}

TEST_CASE("relabeling nodes preserves histograms and tree multisets") {
    CounterRng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 8, 0.4, 1, {1.0, 5.0});
        const Graph h = permute_graph(g, random_permutation(sub, g.node_count));

        const auto cg = wl_refine(g, 4);
        const auto ch = wl_refine(h, 4);
        for (int t = 0; t <= 4; ++t) {
            CHECK(sorted_histogram(cg.colors[t]) == sorted_histogram(ch.colors[t]));
        }
        CHECK_FALSE(wl_distinguishes(g, h, 4).has_value());

        auto tg = extract_trees(g, 3);
        auto th = extract_trees(h, 3);
        std::vector<std::string> sg, sh;
        for (const auto& t : tg) sg.push_back(canonical_tree_string(t));
        for (const auto& t : th) sh.push_back(canonical_tree_string(t));
        std::sort(sg.begin(), sg.end());
        std::sort(sh.begin(), sh.end());
        CHECK(sg == sh);
    }
}

TEST_CASE("tree extraction fixed cases") {
    Graph single;
    single.node_count = 1;
    single.features = {{1.0}};
    auto trees = extract_trees(single, 3);
    REQUIRE(trees.size() == 1);
    CHECK(trees[0].depth() == 1);
    CHECK(tree_size(trees[0]) == 1);

    trees = extract_trees(path_graph(2), 2);
    REQUIRE(trees.size() == 2);
    CHECK(canonical_tree_string(trees[0]) == canonical_tree_string(trees[1]));
    CHECK(trees[0].depth() == 2);
    CHECK(trees[0].children.size() == 1);

    trees = extract_trees(complete_graph(3), 2);
    REQUIRE(trees.size() == 3);
    CHECK(trees[0].children.size() == 2);
    CHECK(canonical_tree_string(trees[0]) == canonical_tree_string(trees[2]));

    // depth 3 on an edge: the walk goes back through the parent
    trees = extract_trees(path_graph(2), 3);
    CHECK(tree_size(trees[0]) == 3);
    CHECK(trees[0].children[0].children.size() == 1);
}

TEST_CASE("edge features ride along on child links") {
    Graph g = path_graph(2);
    g.edge_features = {{7.0}};
    const auto trees = extract_trees(g, 2);
    REQUIRE(trees[0].child_edge_features.size() == 1);
    CHECK(trees[0].child_edge_features[0] == FeatureVector{7.0});
}

TEST_CASE("tree node count matches walk counts") {
    CounterRng rng(10);
    for (int rep = 0; rep < 15; ++rep) {
        auto sub = rng.split(rep);
        const Graph g = random_graph(sub, 7, 0.4, 1);
        const auto walks = walk_counts(g, 3);
        for (int depth = 1; depth <= 4; ++depth) {
            const auto trees = extract_trees(g, depth);
            REQUIRE(static_cast<int>(trees.size()) == g.node_count);
            for (int v = 0; v < g.node_count; ++v) {
                long long expected = 1;
                for (int l = 1; l < depth; ++l) expected += walks[l][v];
                CHECK(tree_size(trees[v]) == expected);
            }
        }
    }
}
