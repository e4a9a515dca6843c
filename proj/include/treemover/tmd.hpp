// Tree mover's distance between attributed graphs.
//
// The production path is a level-wise dynamic program: D_t[u][v] holds the
// distance between the depth-t computation trees of u and v, built from
// D_{t-1} with one small assignment solve per node pair. Padding with blank
// trees is realized through the beta columns; no tree is ever materialized.
#pragma once

#include <vector>

#include "treemover/graph.hpp"

namespace treemover {

// Per-level weight applied to the child-transport term. Level 1 has no
// children, so weights are queried at levels >= 2 only. A query past the end
// of a per-level list returns the last value.
class DepthWeights {
public:
    DepthWeights() : values_{1.0} {}

    static DepthWeights constant(double c) { return DepthWeights({c}); }
    static DepthWeights per_level(std::vector<double> values) {
        return DepthWeights(std::move(values));
    }

    double at(int level) const;

private:
    explicit DepthWeights(std::vector<double> values);
    std::vector<double> values_;  // values_[0] applies to level 2
};

struct LevelDistances {
    // cross[t-1][u][v] = distance between depth-t trees of u in g and v in h
    std::vector<std::vector<std::vector<double>>> cross;
    // blank_g[t-1][u] = distance between u's depth-t tree and the blank tree
    std::vector<std::vector<double>> blank_g;
    std::vector<std::vector<double>> blank_h;
};

// Distances between all tree pairs for levels 1..depth. Requires equal node
// feature dimensions and matching edge-feature schemas; violations raise
// ContractError.
LevelDistances level_distances(const Graph& g, const Graph& h, int depth, const DepthWeights& w);

// Transport cost between the two root-tree multisets, padded to equal size
// with blank trees. Exactly symmetric in its arguments (the computation runs
// in a canonical argument order) and exactly 0 for identical graphs.
double tmd(const Graph& g, const Graph& h, int depth, const DepthWeights& w);

struct DistanceMatrix {
    std::vector<int> labels;  // graph indices, row/column order
    std::vector<std::vector<double>> values;
};

// All unordered pairs, computed once and mirrored; diagonal exactly 0.
// Parallelized over pairs; the result is identical for any thread count.
DistanceMatrix pairwise_tmd(const std::vector<Graph>& graphs, int depth, const DepthWeights& w);

// Single-threaded reference of the same computation, kept for tests and the
// benchmark; must produce bitwise-identical output.
DistanceMatrix pairwise_tmd_serial(const std::vector<Graph>& graphs, int depth,
                                   const DepthWeights& w);

// rows = test graphs, cols = train graphs
std::vector<std::vector<double>> cross_tmd(const std::vector<Graph>& test,
                                           const std::vector<Graph>& train, int depth,
                                           const DepthWeights& w);
std::vector<std::vector<double>> cross_tmd_serial(const std::vector<Graph>& test,
                                                  const std::vector<Graph>& train, int depth,
                                                  const DepthWeights& w);

struct SetDistance {
    double xi = 0.0;               // max over test rows of the row minimum
    std::vector<double> minima;    // per-test-graph minimum train distance
};

SetDistance set_distance(const std::vector<std::vector<double>>& test_to_train);

}  // namespace treemover
