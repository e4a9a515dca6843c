#include "treemover/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace treemover {

void canonicalize_edges(Graph& g) {
    const bool with_feats = !g.edge_features.empty();
    std::vector<std::size_t> order(g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        auto& [u, v] = g.edges[i];
        if (u > v) std::swap(u, v);
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return g.edges[a] < g.edges[b];
    });
    std::vector<std::pair<int, int>> sorted_edges(g.edges.size());
    std::vector<FeatureVector> sorted_feats(with_feats ? g.edges.size() : 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted_edges[i] = g.edges[order[i]];
        if (with_feats) sorted_feats[i] = std::move(g.edge_features[order[i]]);
    }
    g.edges = std::move(sorted_edges);
    g.edge_features = std::move(sorted_feats);
}

namespace {

// Messages read "<rule> in graph <i>" with the offending element appended,
// so callers can match on the rule phrase.
void fail(std::size_t graph_index, const std::string& rule, const std::string& detail = "") {
    std::string msg = rule + " in graph " + std::to_string(graph_index);
    if (!detail.empty()) msg += " (" + detail + ")";
    throw ValidationError(msg);
}

void check_finite(const FeatureVector& x, std::size_t graph_index, const std::string& where) {
    for (double v : x) {
        if (!std::isfinite(v)) fail(graph_index, "non-finite feature value", where);
    }
}

}  // namespace

void validate_graph(const Graph& g, std::size_t graph_index) {
    if (g.node_count < 0) fail(graph_index, "negative node count");
    if (g.features.size() != static_cast<std::size_t>(g.node_count)) {
        fail(graph_index, "feature list size does not match node count");
    }
    const std::size_t dim = g.features.empty() ? 0 : g.features[0].size();
    for (std::size_t i = 0; i < g.features.size(); ++i) {
        if (g.features[i].size() != dim) {
            fail(graph_index, "ragged node features", "node " + std::to_string(i));
        }
        check_finite(g.features[i], graph_index, "node " + std::to_string(i));
    }
    if (!g.edge_features.empty() && g.edge_features.size() != g.edges.size()) {
        fail(graph_index, "edge feature list size does not match edge count");
    }
    const std::size_t edim = g.edge_features.empty() ? 0 : g.edge_features[0].size();
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& [u, v] = g.edges[i];
        const std::string edge_name = "edge (" + std::to_string(u) + "," + std::to_string(v) + ")";
        if (u == v) {
            fail(graph_index, "self-loop", "node " + std::to_string(u));
        }
        if (u < 0 || v < 0 || u >= g.node_count || v >= g.node_count) {
            fail(graph_index, "edge endpoint out of range", edge_name);
        }
        if (u > v) {
            fail(graph_index, "edge not in canonical u<v order", edge_name);
        }
        if (i > 0 && g.edges[i - 1] == g.edges[i]) {
            fail(graph_index, "duplicate edge", edge_name);
        }
        if (i > 0 && g.edges[i] < g.edges[i - 1]) {
            fail(graph_index, "edges not sorted", edge_name);
        }
        if (!g.edge_features.empty()) {
            if (g.edge_features[i].size() != edim) {
                fail(graph_index, "ragged edge features", edge_name);
            }
            check_finite(g.edge_features[i], graph_index, edge_name);
        }
    }
}

void validate_dataset(const GraphDataset& ds) {
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) validate_graph(ds.graphs[i], i);
    if (!ds.labels.empty()) {
        if (ds.labels.size() != ds.graphs.size()) {
            throw ValidationError("dataset: label count does not match graph count");
        }
        for (std::size_t i = 0; i < ds.labels.size(); ++i) {
            if (ds.labels[i] < 0 || ds.labels[i] >= ds.classes) {
                throw ValidationError("dataset: label of graph " + std::to_string(i) +
                                      " outside [0," + std::to_string(ds.classes) + ")");
            }
        }
    }
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.node_count = g.node_count;
    s.edge_count = static_cast<std::int64_t>(g.edges.size());
    std::vector<int> deg = node_degrees(g);
    for (int d : deg) s.max_degree = std::max(s.max_degree, d);
    for (const auto& x : g.features) {
        s.feature_bound = std::max(s.feature_bound, euclidean_norm(x));
    }
    return s;
}

std::vector<std::vector<std::pair<int, int>>> build_adjacency(const Graph& g) {
    std::vector<std::vector<std::pair<int, int>>> adj(g.node_count);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& [u, v] = g.edges[i];
        adj[u].emplace_back(v, static_cast<int>(i));
        adj[v].emplace_back(u, static_cast<int>(i));
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

std::vector<int> node_degrees(const Graph& g) {
    std::vector<int> deg(g.node_count, 0);
    for (const auto& [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

double euclidean_norm(const FeatureVector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

int compare_feature_bytes(const std::vector<FeatureVector>& a,
                          const std::vector<FeatureVector>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return a[i].size() < b[i].size() ? -1 : 1;
        if (a[i].empty()) continue;
        const int c = std::memcmp(a[i].data(), b[i].data(), a[i].size() * sizeof(double));
        if (c != 0) return c;
    }
    return 0;
}

}  // namespace

bool graph_order_less(const Graph& a, const Graph& b) {
    if (a.node_count != b.node_count) return a.node_count < b.node_count;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    int c = compare_feature_bytes(a.features, b.features);
    if (c != 0) return c < 0;
    if (a.edges != b.edges) return a.edges < b.edges;
    if (a.edge_features.size() != b.edge_features.size()) {
        return a.edge_features.size() < b.edge_features.size();
    }
    c = compare_feature_bytes(a.edge_features, b.edge_features);
    return c < 0;
}

}  // namespace treemover
