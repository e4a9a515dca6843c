#include "treemover/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <exception>
#include <queue>
#include <stdexcept>

#include "treemover/errors.hpp"

namespace treemover {

namespace {

std::map<std::string, std::string> parse_kv(const std::string& tail, const std::string& full) {
    std::map<std::string, std::string> kv;
    std::size_t start = 0;
    while (start <= tail.size()) {
        const auto comma = tail.find(',', start);
        const std::string item =
            tail.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ValidationError("zeta spec \"" + full + "\": expected key=value, got \"" + item +
                                  "\"");
        }
        kv[item.substr(0, eq)] = item.substr(eq + 1);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return kv;
}

int parse_int_field(const std::map<std::string, std::string>& kv, const std::string& key,
                    const std::string& full) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        throw ValidationError("zeta spec \"" + full + "\": missing \"" + key + "\"");
    }
    try {
        std::size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("zeta spec \"" + full + "\": \"" + key + "\" is not an integer");
    }
}

}  // namespace

ZetaSpec ZetaSpec::parse(const std::string& text) {
    ZetaSpec spec;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (head == "identity") {
        if (!tail.empty()) throw ValidationError("zeta spec \"identity\" takes no parameters");
        spec.variant = Variant::identity;
        return spec;
    }
    if (head == "f-aug") {
        spec.variant = Variant::f_augment;
        auto kv = parse_kv(tail, text);
        const auto mode = kv.find("mode");
        if (mode == kv.end()) throw ValidationError("zeta spec \"" + text + "\": missing \"mode\"");
        if (mode->second == "hom") {
            spec.pattern.mode = PatternFamilySpec::Mode::homomorphism;
        } else if (mode->second == "sub") {
            spec.pattern.mode = PatternFamilySpec::Mode::subgraph;
        } else if (mode->second == "basis") {
            spec.pattern.mode = PatternFamilySpec::Mode::cycle_basis;
        } else {
            throw ValidationError("zeta spec \"" + text + "\": mode must be hom, sub, or basis");
        }
        spec.pattern.max_cycle_length = parse_int_field(kv, "lmax", text);
        if (spec.pattern.max_cycle_length < 3) {
            throw ValidationError("zeta spec \"" + text + "\": lmax must be >= 3");
        }
        kv.erase("mode");
        kv.erase("lmax");
        if (!kv.empty()) {
            throw ValidationError("zeta spec \"" + text + "\": unknown key \"" +
                                  kv.begin()->first + "\"");
        }
        return spec;
    }
    if (head == "k-tuple") {
        spec.variant = Variant::k_tuple;
        auto kv = parse_kv(tail, text);
        spec.k = parse_int_field(kv, "k", text);
        if (spec.k < 2) throw ValidationError("zeta spec \"" + text + "\": k must be >= 2");
        kv.erase("k");
        const auto loc = kv.find("locality");
        if (loc != kv.end()) {
            if (loc->second == "global") {
                spec.locality = Locality::global;
            } else if (loc->second == "local") {
                spec.locality = Locality::local;
            } else {
                throw ValidationError("zeta spec \"" + text +
                                      "\": locality must be global or local");
            }
            kv.erase("locality");
        }
        if (!kv.empty()) {
            throw ValidationError("zeta spec \"" + text + "\": unknown key \"" +
                                  kv.begin()->first + "\"");
        }
        return spec;
    }
    throw ValidationError("unknown zeta spec \"" + text +
                          "\" (expected identity, f-aug:..., or k-tuple:...)");
}

std::string ZetaSpec::to_string() const {
    switch (variant) {
        case Variant::identity:
            return "identity";
        case Variant::f_augment: {
            std::string mode;
            switch (pattern.mode) {
                case PatternFamilySpec::Mode::homomorphism: mode = "hom"; break;
                case PatternFamilySpec::Mode::subgraph: mode = "sub"; break;
                case PatternFamilySpec::Mode::cycle_basis: mode = "basis"; break;
            }
            return "f-aug:mode=" + mode + ",lmax=" + std::to_string(pattern.max_cycle_length);
        }
        case Variant::k_tuple:
            return "k-tuple:k=" + std::to_string(k) + ",locality=" +
                   (locality == Locality::global ? "global" : "local");
    }
    return "identity";
}

namespace {

using CountTable = std::vector<std::vector<long long>>;

CountTable homomorphism_counts(const Graph& g, int max_len) {
    const int n = g.node_count;
    CountTable counts(n, std::vector<long long>(max_len - 2, 0));
    std::vector<long long> a(static_cast<std::size_t>(n) * n, 0);
    for (const auto& [u, v] : g.edges) {
        a[static_cast<std::size_t>(u) * n + v] = 1;
        a[static_cast<std::size_t>(v) * n + u] = 1;
    }
    std::vector<long long> cur = a;
    std::vector<long long> next(a.size());
    for (int len = 2; len <= max_len; ++len) {
        std::fill(next.begin(), next.end(), 0);
        for (int i = 0; i < n; ++i) {
            for (int l = 0; l < n; ++l) {
                const long long x = cur[static_cast<std::size_t>(i) * n + l];
                if (x == 0) continue;
                const long long* arow = &a[static_cast<std::size_t>(l) * n];
                long long* nrow = &next[static_cast<std::size_t>(i) * n];
                for (int j = 0; j < n; ++j) nrow[j] += x * arow[j];
            }
        }
        cur.swap(next);
        if (len >= 3) {
            for (int v = 0; v < n; ++v) {
                counts[v][len - 3] = cur[static_cast<std::size_t>(v) * n + v];
            }
        }
    }
    return counts;
}

// Each simple cycle is discovered exactly once: anchored at its smallest
// vertex, walked in the direction whose second vertex is smaller than its
// last.
CountTable subgraph_counts(const Graph& g, int max_len) {
    const int n = g.node_count;
    CountTable counts(n, std::vector<long long>(max_len - 2, 0));
    const auto adj = build_adjacency(g);
    std::vector<int> path;
    std::vector<char> on_path(n, 0);

    const auto dfs = [&](auto&& self, int anchor) -> void {
        const int cur = path.back();
        for (const auto& [nb, ei] : adj[cur]) {
            if (nb == anchor && path.size() >= 3 && path[1] < cur) {
                const int len = static_cast<int>(path.size());
                for (int v : path) ++counts[v][len - 3];
            } else if (nb > anchor && !on_path[nb] && static_cast<int>(path.size()) < max_len) {
                on_path[nb] = 1;
                path.push_back(nb);
                self(self, anchor);
                path.pop_back();
                on_path[nb] = 0;
            }
        }
    };

    for (int anchor = 0; anchor < n; ++anchor) {
        path.assign(1, anchor);
        on_path[anchor] = 1;
        dfs(dfs, anchor);
        on_path[anchor] = 0;
    }
    return counts;
}

CountTable basis_counts(const Graph& g, int max_len) {
    const int n = g.node_count;
    CountTable counts(n, std::vector<long long>(max_len - 2, 0));
    const auto adj = build_adjacency(g);

    std::vector<int> parent(n, -1), depth(n, 0);
    std::vector<char> visited(n, 0);
    std::vector<char> tree_edge(g.edges.size(), 0);
    for (int root = 0; root < n; ++root) {
        if (visited[root]) continue;
        std::queue<int> q;
        q.push(root);
        visited[root] = 1;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (const auto& [nb, ei] : adj[u]) {
                if (visited[nb]) continue;
                visited[nb] = 1;
                parent[nb] = u;
                depth[nb] = depth[u] + 1;
                tree_edge[ei] = 1;
                q.push(nb);
            }
        }
    }

    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        if (tree_edge[ei]) continue;
        int au = g.edges[ei].first;
        int av = g.edges[ei].second;
        std::vector<int> members;
        while (depth[au] > depth[av]) {
            members.push_back(au);
            au = parent[au];
        }
        while (depth[av] > depth[au]) {
            members.push_back(av);
            av = parent[av];
        }
        while (au != av) {
            members.push_back(au);
            members.push_back(av);
            au = parent[au];
            av = parent[av];
        }
        members.push_back(au);  // the meeting point
        const int len = static_cast<int>(members.size());
        if (len >= 3 && len <= max_len) {
            for (int v : members) ++counts[v][len - 3];
        }
    }
    return counts;
}

}  // namespace

std::vector<std::vector<long long>> cycle_node_counts(const Graph& g,
                                                      const PatternFamilySpec& spec) {
    if (spec.max_cycle_length < 3) throw ContractError("max cycle length must be >= 3");
    switch (spec.mode) {
        case PatternFamilySpec::Mode::homomorphism:
            return homomorphism_counts(g, spec.max_cycle_length);
        case PatternFamilySpec::Mode::subgraph:
            return subgraph_counts(g, spec.max_cycle_length);
        case PatternFamilySpec::Mode::cycle_basis:
            return basis_counts(g, spec.max_cycle_length);
    }
    throw ContractError("unreachable pattern mode");
}

Graph augment(const Graph& g, const PatternFamilySpec& spec) {
    const auto counts = cycle_node_counts(g, spec);
    Graph out = g;
    for (int v = 0; v < g.node_count; ++v) {
        for (long long c : counts[v]) out.features[v].push_back(static_cast<double>(c));
    }
    return out;
}

Graph k_tuple_graph(const Graph& g, int k, ZetaSpec::Locality locality, long long node_budget) {
    if (k < 2) throw ContractError("k-tuple transform needs k >= 2");
    if (node_budget < 1) throw ContractError("k-tuple node budget must be positive");
    if (g.has_edge_features()) {
        throw ContractError("k-tuple transform expects a graph without edge features");
    }
    const int n = g.node_count;
    const double approx = std::pow(static_cast<double>(n), k);
    if (approx > static_cast<double>(node_budget)) {
        char num[64];
        if (approx < 9e15) {
            std::snprintf(num, sizeof(num), "%.0f", approx);
        } else {
            std::snprintf(num, sizeof(num), "%.3g", approx);
        }
        throw ResourceError("k-tuple transform would create n^k = " + std::string(num) +
                            " nodes (budget " + std::to_string(node_budget) + ")");
    }
    long long total = 1;
    for (int i = 0; i < k; ++i) total *= n;

    std::vector<char> adj_mat(static_cast<std::size_t>(n) * n, 0);
    for (const auto& [u, v] : g.edges) {
        adj_mat[static_cast<std::size_t>(u) * n + v] = 1;
        adj_mat[static_cast<std::size_t>(v) * n + u] = 1;
    }
    const auto adjacent = [&](int u, int v) {
        return adj_mat[static_cast<std::size_t>(u) * n + v] != 0;
    };

    const int f_dim = g.feature_dim();
    const bool global = locality == ZetaSpec::Locality::global;

    Graph out;
    out.node_count = static_cast<int>(total);
    out.features.reserve(total);

    std::vector<long long> stride(k, 1);
    for (int p = k - 2; p >= 0; --p) stride[p] = stride[p + 1] * n;

    std::vector<int> tuple(k, 0);
    for (long long idx = 0; idx < total; ++idx) {
        long long rem = idx;
        for (int p = 0; p < k; ++p) {
            tuple[p] = static_cast<int>(rem / stride[p]);
            rem %= stride[p];
        }

        FeatureVector x;
        x.reserve(static_cast<std::size_t>(2 * k) * k + static_cast<std::size_t>(k) * f_dim);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) x.push_back(tuple[i] == tuple[j] ? 1.0 : 0.0);
        }
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                x.push_back(i != j && adjacent(tuple[i], tuple[j]) ? 1.0 : 0.0);
            }
        }
        for (int i = 0; i < k; ++i) {
            const auto& fx = g.features[tuple[i]];
            x.insert(x.end(), fx.begin(), fx.end());
        }
        out.features.push_back(std::move(x));

        for (int p = 0; p < k; ++p) {
            for (int w = tuple[p] + 1; w < n; ++w) {
                const bool pair_adjacent = adjacent(tuple[p], w);
                if (!global && !pair_adjacent) continue;
                const long long idx2 = idx + (w - tuple[p]) * stride[p];
                out.edges.emplace_back(static_cast<int>(idx), static_cast<int>(idx2));
                FeatureVector e(global ? k + 1 : k, 0.0);
                e[p] = 1.0;
                if (global) e[k] = pair_adjacent ? 1.0 : 0.0;
                out.edge_features.push_back(std::move(e));
            }
        }
    }
    canonicalize_edges(out);
    return out;
}

Graph simulate(const Graph& g, const ZetaSpec& zeta) {
    switch (zeta.variant) {
        case ZetaSpec::Variant::identity:
            return g;
        case ZetaSpec::Variant::f_augment:
            return augment(g, zeta.pattern);
        case ZetaSpec::Variant::k_tuple:
            return k_tuple_graph(g, zeta.k, zeta.locality, zeta.node_budget);
    }
    throw ContractError("unreachable zeta variant");
}

double zeta_tmd(const Graph& g, const Graph& h, const ZetaSpec& zeta, int depth,
                const DepthWeights& w) {
    return tmd(simulate(g, zeta), simulate(h, zeta), depth, w);
}

namespace {

std::vector<Graph> simulate_all(const std::vector<Graph>& graphs, const ZetaSpec& zeta) {
    std::vector<Graph> out(graphs.size());
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        try {
            out[i] = simulate(graphs[i], zeta);
        } catch (...) {
#pragma omp critical
            {
                if (!err) err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace

DistanceMatrix pairwise_tmd(const std::vector<Graph>& graphs, int depth, const DepthWeights& w,
                            const ZetaSpec& zeta) {
    if (zeta.variant == ZetaSpec::Variant::identity) return pairwise_tmd(graphs, depth, w);
    return pairwise_tmd(simulate_all(graphs, zeta), depth, w);
}

std::vector<std::vector<double>> cross_tmd(const std::vector<Graph>& test,
                                           const std::vector<Graph>& train, int depth,
                                           const DepthWeights& w, const ZetaSpec& zeta) {
    if (zeta.variant == ZetaSpec::Variant::identity) return cross_tmd(test, train, depth, w);
    return cross_tmd(simulate_all(test, zeta), simulate_all(train, zeta), depth, w);
}

}  // namespace treemover
