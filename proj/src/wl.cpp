#include "treemover/wl.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <string>
#include <unordered_map>

#include "treemover/errors.hpp"

namespace treemover {

int Coloring::classes_at(int t) const {
    int m = 0;
    for (int c : colors[t]) m = std::max(m, c + 1);
    return m;
}

namespace {

std::string feature_bytes(const FeatureVector& x) {
    std::string s(x.size() * sizeof(double), '\0');
    if (!x.empty()) std::memcpy(s.data(), x.data(), s.size());
    return s;
}

// Joint refinement over the disjoint union of one or two graphs; the shared
// intern table makes colors comparable across the inputs.
std::vector<std::vector<int>> refine_union(const std::vector<const Graph*>& parts,
                                           int iterations) {
    int total = 0;
    std::vector<std::vector<int>> adj;  // flat node indexing across parts
    std::vector<const FeatureVector*> feats;
    for (const Graph* g : parts) {
        for (int v = 0; v < g->node_count; ++v) {
            feats.push_back(&g->features[v]);
            adj.emplace_back();
        }
        for (const auto& [u, v] : g->edges) {
            adj[total + u].push_back(total + v);
            adj[total + v].push_back(total + u);
        }
        total += g->node_count;
    }

    std::vector<std::vector<int>> colors(iterations + 1, std::vector<int>(total, 0));

    std::unordered_map<std::string, int> base_table;
    for (int v = 0; v < total; ++v) {
        const auto [it, fresh] =
            base_table.emplace(feature_bytes(*feats[v]), static_cast<int>(base_table.size()));
        (void)fresh;
        colors[0][v] = it->second;
    }

    for (int t = 1; t <= iterations; ++t) {
        std::map<std::pair<int, std::vector<int>>, int> table;
        const auto& prev = colors[t - 1];
        for (int v = 0; v < total; ++v) {
            std::vector<int> nbr;
            nbr.reserve(adj[v].size());
            for (int u : adj[v]) nbr.push_back(prev[u]);
            std::sort(nbr.begin(), nbr.end());
            const auto [it, fresh] = table.emplace(
                std::make_pair(prev[v], std::move(nbr)), static_cast<int>(table.size()));
            (void)fresh;
            colors[t][v] = it->second;
        }
    }
    return colors;
}

std::vector<int> histogram(const std::vector<int>& colors, int begin, int end) {
    int classes = 0;
    for (int i = begin; i < end; ++i) classes = std::max(classes, colors[i] + 1);
    std::vector<int> h(classes, 0);
    for (int i = begin; i < end; ++i) ++h[colors[i]];
    return h;
}

}  // namespace

Coloring wl_refine(const Graph& g, int iterations) {
    if (iterations < 0) throw ContractError("wl_refine: negative iteration count");
    Coloring out;
    out.colors = refine_union({&g}, iterations);
    return out;
}

std::optional<int> wl_distinguishes(const Graph& g, const Graph& h, int max_iters) {
    if (max_iters < 0) throw ContractError("wl_distinguishes: negative iteration count");
    const auto colors = refine_union({&g, &h}, max_iters);
    for (int t = 0; t <= max_iters; ++t) {
        const auto hg = histogram(colors[t], 0, g.node_count);
        const auto hh = histogram(colors[t], g.node_count, g.node_count + h.node_count);
        if (hg != hh) return t;
    }
    return std::nullopt;
}

std::vector<ComputationTree> extract_trees(const Graph& g, int depth) {
    if (depth < 1) throw ContractError("extract_trees: depth must be >= 1");
    const auto adj = build_adjacency(g);

    // level[v] = depth-d tree rooted at v, built bottom-up
    std::vector<ComputationTree> level(g.node_count);
    for (int v = 0; v < g.node_count; ++v) level[v].feature = g.features[v];
    for (int d = 2; d <= depth; ++d) {
        std::vector<ComputationTree> next(g.node_count);
        for (int v = 0; v < g.node_count; ++v) {
            next[v].feature = g.features[v];
            for (const auto& [u, edge_idx] : adj[v]) {
                next[v].children.push_back(level[u]);
                if (g.has_edge_features()) {
                    next[v].child_edge_features.push_back(g.edge_features[edge_idx]);
                }
            }
        }
        level = std::move(next);
    }
    return level;
}

}  // namespace treemover
