// 1-WL color refinement and explicit computation trees.
//
// Colors are interned by value (feature bit patterns at iteration 0, then
// (own color, sorted neighbor colors) tuples), so ids are dense, assigned in
// first-appearance order, and identical across platforms and runs.
#pragma once

#include <optional>
#include <vector>

#include "treemover/graph.hpp"

namespace treemover {

struct Coloring {
    // colors[t][v] = color of node v after t refinement iterations, t = 0..T.
    std::vector<std::vector<int>> colors;

    int iterations() const { return static_cast<int>(colors.size()) - 1; }
    int classes_at(int t) const;
};

Coloring wl_refine(const Graph& g, int iterations);

// Smallest t <= max_iters at which the two graphs' color histograms differ
// when refined jointly over one shared color table, or nullopt if they stay
// equal through max_iters.
std::optional<int> wl_distinguishes(const Graph& g, const Graph& h, int max_iters);

// Depth-t unrolling of message passing rooted at a node. Depth 1 is the bare
// root; at depth t every neighbor contributes its depth-(t-1) tree. Explicit
// trees grow exponentially with depth; they exist for oracles and small
// inputs, the production distance path never builds them.
struct ComputationTree {
    FeatureVector feature;
    std::vector<ComputationTree> children;
    // Parallel to children; present only when the graph has edge features.
    std::vector<FeatureVector> child_edge_features;

    int depth() const {
        int d = 0;
        for (const auto& c : children) d = std::max(d, c.depth());
        return d + 1;
    }
};

// One tree per node, in node order. depth >= 1.
std::vector<ComputationTree> extract_trees(const Graph& g, int depth);

}  // namespace treemover
