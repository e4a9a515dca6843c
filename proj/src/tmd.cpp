#include "treemover/tmd.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "treemover/assignment.hpp"
#include "treemover/errors.hpp"

namespace treemover {

DepthWeights::DepthWeights(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw ContractError("depth weights: empty level list");
    for (double v : values_) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ContractError("depth weights must be positive finite reals");
        }
    }
}

double DepthWeights::at(int level) const {
    if (level < 2) throw ContractError("depth weights are defined for levels >= 2");
    const std::size_t idx = static_cast<std::size_t>(level - 2);
    return idx < values_.size() ? values_[idx] : values_.back();
}

namespace {

void check_pair(const Graph& g, const Graph& h) {
    if (g.node_count > 0 && h.node_count > 0 && g.feature_dim() != h.feature_dim()) {
        throw ContractError("node feature dimensions differ: " +
                            std::to_string(g.feature_dim()) + " vs " +
                            std::to_string(h.feature_dim()));
    }
    if (g.has_edge_features() != h.has_edge_features()) {
        if (!g.edges.empty() && !h.edges.empty()) {
            throw ContractError("edge features present on one graph only");
        }
    } else if (g.has_edge_features() && g.edge_feature_dim() != h.edge_feature_dim()) {
        throw ContractError("edge feature dimensions differ");
    }
}

std::vector<double> feature_norms(const Graph& g) {
    std::vector<double> norms(g.node_count);
    for (int v = 0; v < g.node_count; ++v) norms[v] = euclidean_norm(g.features[v]);
    return norms;
}

std::vector<double> edge_norms(const Graph& g) {
    std::vector<double> norms(g.edges.size(), 0.0);
    if (g.has_edge_features()) {
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            norms[i] = euclidean_norm(g.edge_features[i]);
        }
    }
    return norms;
}

const FeatureVector* edge_feature_of(const Graph& g, int edge_idx) {
    return g.has_edge_features() ? &g.edge_features[edge_idx] : nullptr;
}

}  // namespace

LevelDistances level_distances(const Graph& g, const Graph& h, int depth, const DepthWeights& w) {
    if (depth < 1) throw ContractError("tree distance depth must be >= 1");
    check_pair(g, h);

    const int n = g.node_count;
    const int m = h.node_count;
    const auto adj_g = build_adjacency(g);
    const auto adj_h = build_adjacency(h);
    const auto norm_g = feature_norms(g);
    const auto norm_h = feature_norms(h);
    const auto enorm_g = edge_norms(g);
    const auto enorm_h = edge_norms(h);
    const bool edge_feats = g.has_edge_features() || h.has_edge_features();

    LevelDistances out;
    out.cross.assign(depth, std::vector<std::vector<double>>(n, std::vector<double>(m, 0.0)));
    out.blank_g.assign(depth, std::vector<double>(n, 0.0));
    out.blank_h.assign(depth, std::vector<double>(m, 0.0));

    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < m; ++v) {
            out.cross[0][u][v] = euclidean_distance(g.features[u], h.features[v]);
        }
    }
    out.blank_g[0] = norm_g;
    out.blank_h[0] = norm_h;

    for (int t = 2; t <= depth; ++t) {
        const auto& prev = out.cross[t - 2];
        const auto& prev_bg = out.blank_g[t - 2];
        const auto& prev_bh = out.blank_h[t - 2];
        const double wt = w.at(t);

        for (int u = 0; u < n; ++u) {
            double acc = 0.0;
            for (const auto& [s, ei] : adj_g[u]) acc += prev_bg[s] + enorm_g[ei];
            out.blank_g[t - 1][u] = norm_g[u] + wt * acc;
        }
        for (int v = 0; v < m; ++v) {
            double acc = 0.0;
            for (const auto& [s, ei] : adj_h[v]) acc += prev_bh[s] + enorm_h[ei];
            out.blank_h[t - 1][v] = norm_h[v] + wt * acc;
        }

        for (int u = 0; u < n; ++u) {
            const auto& cu = adj_g[u];
            for (int v = 0; v < m; ++v) {
                const auto& cv = adj_h[v];
                const std::size_t size = std::max(cu.size(), cv.size());
                double transport = 0.0;
                if (size > 0) {
                    std::vector<std::vector<double>> cost(size, std::vector<double>(size, 0.0));
                    for (std::size_t i = 0; i < size; ++i) {
                        for (std::size_t j = 0; j < size; ++j) {
                            double c;
                            if (i < cu.size() && j < cv.size()) {
                                c = prev[cu[i].first][cv[j].first];
                                if (edge_feats) {
                                    c += euclidean_distance(*edge_feature_of(g, cu[i].second),
                                                            *edge_feature_of(h, cv[j].second));
                                }
                            } else if (i < cu.size()) {
                                c = prev_bg[cu[i].first] + enorm_g[cu[i].second];
                            } else if (j < cv.size()) {
                                c = prev_bh[cv[j].first] + enorm_h[cv[j].second];
                            } else {
                                c = 0.0;  // unreachable: only the smaller side is padded
                            }
                            cost[i][j] = c;
                        }
                    }
                    transport = assignment_cost(cost);
                }
                out.cross[t - 1][u][v] = out.cross[0][u][v] + wt * transport;
            }
        }
    }
    return out;
}

namespace {

double root_transport(const LevelDistances& ld, int depth, int n, int m) {
    const int size = std::max(n, m);
    if (size == 0) return 0.0;
    const auto& d = ld.cross[depth - 1];
    const auto& bg = ld.blank_g[depth - 1];
    const auto& bh = ld.blank_h[depth - 1];
    std::vector<std::vector<double>> cost(size, std::vector<double>(size, 0.0));
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            if (i < n && j < m) {
                cost[i][j] = d[i][j];
            } else if (i < n) {
                cost[i][j] = bg[i];
            } else if (j < m) {
                cost[i][j] = bh[j];
            }
        }
    }
    return assignment_cost(cost);
}

}  // namespace

double tmd(const Graph& g, const Graph& h, int depth, const DepthWeights& w) {
    // Fixed evaluation order makes tmd(g,h) and tmd(h,g) bitwise identical.
    const bool swapped = graph_order_less(h, g);
    const Graph& a = swapped ? h : g;
    const Graph& b = swapped ? g : h;
    const LevelDistances ld = level_distances(a, b, depth, w);
    return root_transport(ld, depth, a.node_count, b.node_count);
}

namespace {

DistanceMatrix pairwise_impl(const std::vector<Graph>& graphs, int depth, const DepthWeights& w,
                             bool parallel) {
    const int n = static_cast<int>(graphs.size());
    if (n == 0) throw ContractError("pairwise distances need a nonempty dataset");
    DistanceMatrix out;
    out.labels.resize(n);
    for (int i = 0; i < n; ++i) out.labels[i] = i;
    out.values.assign(n, std::vector<double>(n, 0.0));

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }

    const auto solve = [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const double d = tmd(graphs[i], graphs[j], depth, w);
        out.values[i][j] = d;
        out.values[j][i] = d;
    };

    if (parallel) {
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            try {
                solve(k);
            } catch (...) {
#pragma omp critical
                {
                    if (!err) err = std::current_exception();
                }
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (std::size_t k = 0; k < pairs.size(); ++k) solve(k);
    }
    return out;
}

std::vector<std::vector<double>> cross_impl(const std::vector<Graph>& test,
                                            const std::vector<Graph>& train, int depth,
                                            const DepthWeights& w, bool parallel) {
    std::vector<std::vector<double>> out(test.size(), std::vector<double>(train.size(), 0.0));
    const std::size_t total = test.size() * train.size();
    const auto solve = [&](std::size_t k) {
        const std::size_t i = k / train.size();
        const std::size_t j = k % train.size();
        out[i][j] = tmd(test[i], train[j], depth, w);
    };
    if (parallel) {
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (std::size_t k = 0; k < total; ++k) {
            try {
                solve(k);
            } catch (...) {
#pragma omp critical
                {
                    if (!err) err = std::current_exception();
                }
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (std::size_t k = 0; k < total; ++k) solve(k);
    }
    return out;
}

}  // namespace

DistanceMatrix pairwise_tmd(const std::vector<Graph>& graphs, int depth, const DepthWeights& w) {
    return pairwise_impl(graphs, depth, w, true);
}

DistanceMatrix pairwise_tmd_serial(const std::vector<Graph>& graphs, int depth,
                                   const DepthWeights& w) {
    return pairwise_impl(graphs, depth, w, false);
}

std::vector<std::vector<double>> cross_tmd(const std::vector<Graph>& test,
                                           const std::vector<Graph>& train, int depth,
                                           const DepthWeights& w) {
    return cross_impl(test, train, depth, w, true);
}

std::vector<std::vector<double>> cross_tmd_serial(const std::vector<Graph>& test,
                                                  const std::vector<Graph>& train, int depth,
                                                  const DepthWeights& w) {
    return cross_impl(test, train, depth, w, false);
}

SetDistance set_distance(const std::vector<std::vector<double>>& test_to_train) {
    if (test_to_train.empty()) throw ContractError("set distance: empty test set");
    SetDistance out;
    out.minima.reserve(test_to_train.size());
    for (const auto& row : test_to_train) {
        if (row.empty()) throw ContractError("set distance: empty train set");
        double lo = row[0];
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ContractError("set distance: entries must be finite and nonnegative");
            }
            lo = std::min(lo, v);
        }
        out.minima.push_back(lo);
        out.xi = std::max(out.xi, lo);
    }
    return out;
}

}  // namespace treemover
