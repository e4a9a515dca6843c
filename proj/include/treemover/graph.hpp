// Canonical in-memory representation of attributed undirected graphs.
//
// Graphs are plain value types, canonicalized on construction (edges stored
// with u < v, sorted, no duplicates) and immutable afterwards; they are safe
// to share across worker threads.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treemover/errors.hpp"

namespace treemover {

using FeatureVector = std::vector<double>;

struct Graph {
    int node_count = 0;
    std::vector<FeatureVector> features;   // one per node, uniform dimension
    std::vector<std::pair<int, int>> edges;  // canonical: u < v, sorted ascending
    std::vector<FeatureVector> edge_features;  // empty, or one per edge, uniform dimension

    bool has_edge_features() const { return !edge_features.empty(); }
    int feature_dim() const { return features.empty() ? 0 : static_cast<int>(features[0].size()); }
    int edge_feature_dim() const {
        return edge_features.empty() ? 0 : static_cast<int>(edge_features[0].size());
    }
};

struct GraphDataset {
    std::vector<Graph> graphs;
    std::vector<int> labels;  // empty, or one class id per graph
    int classes = 0;          // K; 0 when unlabeled

    bool has_labels() const { return !labels.empty(); }
    std::size_t size() const { return graphs.size(); }
};

struct GraphStats {
    int max_degree = 0;
    double feature_bound = 0.0;  // max Euclidean node-feature norm
    int node_count = 0;
    std::int64_t edge_count = 0;
};

// Sorts edges into canonical order (u < v, ascending), carrying any edge
// features along. Self-loops and duplicates are left for validate_graph.
void canonicalize_edges(Graph& g);

// Checks every Graph invariant; `graph_index` is used in error messages.
void validate_graph(const Graph& g, std::size_t graph_index);

// Checks dataset-level invariants (label count, label range) and each graph.
void validate_dataset(const GraphDataset& ds);

GraphStats graph_stats(const Graph& g);

// Neighbor lists with the index of the connecting edge, built once per use.
// adjacency[v] = sorted list of (neighbor, edge index into g.edges).
std::vector<std::vector<std::pair<int, int>>> build_adjacency(const Graph& g);

std::vector<int> node_degrees(const Graph& g);

double euclidean_norm(const FeatureVector& x);
double euclidean_distance(const FeatureVector& a, const FeatureVector& b);

// Strict weak order on graphs by (node count, edge count, feature bytes,
// edge list, edge-feature bytes). Used to pick a canonical argument order
// where bitwise-symmetric results are required.
bool graph_order_less(const Graph& a, const Graph& b);

}  // namespace treemover
