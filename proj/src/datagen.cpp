#include "treemover/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "treemover/errors.hpp"
#include "treemover/rng.hpp"

namespace treemover {

namespace {

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_real(const std::string& text, const std::string& what) {
    if (text.empty()) throw ValidationError(what + ": empty number");
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
        throw ValidationError(what + ": bad number \"" + text + "\"");
    }
    return v;
}

int parse_int(const std::string& text, const std::string& what) {
    if (text.empty()) throw ValidationError(what + ": empty integer");
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size()) {
        throw ValidationError(what + ": bad integer \"" + text + "\"");
    }
    return static_cast<int>(v);
}

std::pair<double, double> parse_real_range(const std::string& text, const std::string& what) {
    const auto parts = split_list(text, ':');
    if (parts.size() != 2) throw ValidationError(what + ": expected <lo>:<hi>");
    return {parse_real(parts[0], what), parse_real(parts[1], what)};
}

std::pair<int, int> parse_int_range(const std::string& text, const std::string& what) {
    const auto parts = split_list(text, ':');
    if (parts.size() != 2) throw ValidationError(what + ": expected <lo>:<hi>");
    return {parse_int(parts[0], what), parse_int(parts[1], what)};
}

}  // namespace

GenSpec GenSpec::parse_model(const std::string& text) {
    GenSpec spec;
    const std::size_t colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (name == "er") {
        spec.model = Model::er;
        const auto parts = split_list(rest, ',');
        if (parts.size() != 1 || parts[0].rfind("p=", 0) != 0) {
            throw ValidationError("er model spec must be er:p=<real>");
        }
        spec.er_p = parse_real(parts[0].substr(2), "er p");
        return spec;
    }
    if (name == "ba") {
        spec.model = Model::ba;
        const auto parts = split_list(rest, ',');
        if (parts.size() != 1 || parts[0].rfind("m=", 0) != 0) {
            throw ValidationError("ba model spec must be ba:m=<int>");
        }
        spec.ba_m = parse_int(parts[0].substr(2), "ba m");
        return spec;
    }
    if (name == "sbm") {
        spec.model = Model::sbm;
        if (!rest.empty()) {
            for (const auto& part : split_list(rest, ',')) {
                const std::size_t eq = part.find('=');
                if (eq == std::string::npos) {
                    throw ValidationError("sbm model spec: expected key=value, got \"" + part +
                                          "\"");
                }
                const std::string key = part.substr(0, eq);
                const std::string value = part.substr(eq + 1);
                if (key == "blocks") {
                    spec.sbm_blocks = parse_int_range(value, "sbm blocks");
                } else if (key == "p_in") {
                    spec.sbm_p_in = parse_real_range(value, "sbm p_in");
                } else if (key == "p_out") {
                    spec.sbm_p_out = parse_real_range(value, "sbm p_out");
                } else {
                    throw ValidationError("sbm model spec: unknown key \"" + key + "\"");
                }
            }
        }
        return spec;
    }
    throw ValidationError("unknown generator model \"" + name + "\"");
}

void validate_gen_spec(const GenSpec& spec) {
    const auto fail = [](const std::string& what) {
        throw ContractError("generator spec: " + what);
    };
    const auto check_prob = [&](double p, const std::string& what) {
        if (!(p >= 0.0 && p <= 1.0)) fail(what + " must lie in [0, 1]");
    };
    if (spec.nodes.first < 1 || spec.nodes.first > spec.nodes.second) {
        fail("node range must satisfy 1 <= lo <= hi");
    }
    if (spec.n_graphs < 1) fail("graph count must be at least 1");
    switch (spec.model) {
        case GenSpec::Model::er:
            check_prob(spec.er_p, "er edge probability");
            break;
        case GenSpec::Model::ba:
            if (spec.ba_m < 1) fail("ba attachment count must be at least 1");
            if (spec.nodes.first < spec.ba_m + 1) {
                fail("ba needs every node count to be at least m+1");
            }
            break;
        case GenSpec::Model::sbm:
            check_prob(spec.sbm_p_in.first, "sbm p_in");
            check_prob(spec.sbm_p_in.second, "sbm p_in");
            check_prob(spec.sbm_p_out.first, "sbm p_out");
            check_prob(spec.sbm_p_out.second, "sbm p_out");
            if (spec.sbm_p_in.first > spec.sbm_p_in.second ||
                spec.sbm_p_out.first > spec.sbm_p_out.second) {
                fail("sbm probability ranges must satisfy lo <= hi");
            }
            if (spec.sbm_blocks.first < 1 || spec.sbm_blocks.first > spec.sbm_blocks.second) {
                fail("sbm block range must satisfy 1 <= lo <= hi");
            }
            if (3 * spec.sbm_blocks.first > spec.nodes.first) {
                fail("sbm needs 3 nodes per block even at the smallest draw");
            }
            break;
    }
}

namespace {

void er_edges(Graph& g, CounterRng& rng, double p) {
    for (int u = 0; u < g.node_count; ++u) {
        for (int v = u + 1; v < g.node_count; ++v) {
            if (rng.bernoulli(p)) g.edges.emplace_back(u, v);
        }
    }
}

void ba_edges(Graph& g, CounterRng& rng, int m) {
    // endpoints of every edge so far; drawing uniformly from this list is
    // degree-proportional attachment
    std::vector<int> targets;
    for (int j = 1; j <= m; ++j) {
        g.edges.emplace_back(0, j);
        targets.push_back(0);
        targets.push_back(j);
    }
    for (int v = m + 1; v < g.node_count; ++v) {
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < m) {
            chosen.insert(targets[rng.uniform_int(0, targets.size() - 1)]);
        }
        for (int t : chosen) {
            g.edges.emplace_back(t, v);
            targets.push_back(t);
            targets.push_back(v);
        }
    }
}

void sbm_edges(Graph& g, CounterRng& rng, const GenSpec& spec) {
    const int n = g.node_count;
    int blocks;
    do {
        blocks = static_cast<int>(rng.uniform_int(spec.sbm_blocks.first, spec.sbm_blocks.second));
    } while (3 * blocks > n);

    std::vector<int> sizes(blocks, 3);
    for (int extra = n - 3 * blocks; extra > 0; --extra) {
        sizes[rng.uniform_int(0, static_cast<std::uint64_t>(blocks) - 1)]++;
    }
    std::vector<int> block_of(n);
    int node = 0;
    for (int b = 0; b < blocks; ++b) {
        for (int k = 0; k < sizes[b]; ++k) block_of[node++] = b;
    }

    const double p_in = rng.uniform(spec.sbm_p_in.first, spec.sbm_p_in.second);
    const double p_out = rng.uniform(spec.sbm_p_out.first, spec.sbm_p_out.second);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (rng.bernoulli(block_of[u] == block_of[v] ? p_in : p_out)) {
                g.edges.emplace_back(u, v);
            }
        }
    }
}

}  // namespace

GraphDataset generate(const GenSpec& spec) {
    validate_gen_spec(spec);
    const CounterRng root(spec.seed);
    GraphDataset ds;
    for (int i = 0; i < spec.n_graphs; ++i) {
        CounterRng rng = root.split(static_cast<std::uint64_t>(i));
        Graph g;
        g.node_count = spec.nodes.first +
                       static_cast<int>(rng.uniform_int(
                           0, static_cast<std::uint64_t>(spec.nodes.second - spec.nodes.first)));
        g.features.assign(static_cast<std::size_t>(g.node_count), FeatureVector{1.0});
        switch (spec.model) {
            case GenSpec::Model::er:
                er_edges(g, rng, spec.er_p);
                break;
            case GenSpec::Model::ba:
                ba_edges(g, rng, spec.ba_m);
                break;
            case GenSpec::Model::sbm:
                sbm_edges(g, rng, spec);
                break;
        }
        canonicalize_edges(g);
        validate_graph(g, i);
        ds.graphs.push_back(std::move(g));
    }
    return ds;
}

long long graph_cycle_count(const Graph& g, PatternFamilySpec::Mode mode, int length) {
    if (length < 3) throw ContractError("cycle counts start at length 3");
    PatternFamilySpec pattern;
    pattern.mode = mode;
    pattern.max_cycle_length = length;
    const auto counts = cycle_node_counts(g, pattern);
    long long total = 0;
    for (int v = 0; v < g.node_count; ++v) total += counts[v][static_cast<std::size_t>(length - 3)];
    // every simple or basis cycle is seen once per member node; closed-walk
    // totals are already the whole-graph quantity
    if (mode != PatternFamilySpec::Mode::homomorphism) total /= length;
    return total;
}

GraphDataset label_cycle_median(const GraphDataset& ds, const LabelSpec& spec) {
    if (ds.graphs.empty()) throw ContractError("labeling needs a nonempty dataset");
    if (spec.lengths.empty()) throw ContractError("labeling needs at least one cycle length");
    for (int len : spec.lengths) {
        if (len < 3) throw ContractError("cycle lengths start at 3");
    }
    std::vector<long long> scores;
    scores.reserve(ds.graphs.size());
    for (const auto& g : ds.graphs) {
        long long s = 0;
        for (int len : spec.lengths) s += graph_cycle_count(g, spec.mode, len);
        scores.push_back(s);
    }
    std::vector<long long> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    const long long median = sorted[(sorted.size() - 1) / 2];

    GraphDataset out = ds;
    out.labels.clear();
    for (long long s : scores) out.labels.push_back(s > median ? 1 : 0);
    out.classes = 2;
    return out;
}

std::pair<GraphDataset, GraphDataset> split_dataset(const GraphDataset& ds, std::uint64_t seed,
                                                    double frac) {
    if (!(frac >= 0.0 && frac <= 1.0)) throw ContractError("split fraction must lie in [0, 1]");
    const std::size_t n = ds.graphs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_int(0, i - 1);
        std::swap(order[i - 1], order[j]);
    }
    const std::size_t train_count =
        static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));

    GraphDataset train;
    GraphDataset test;
    train.classes = test.classes = ds.classes;
    const bool labeled = !ds.labels.empty();
    for (std::size_t k = 0; k < n; ++k) {
        GraphDataset& side = k < train_count ? train : test;
        side.graphs.push_back(ds.graphs[order[k]]);
        if (labeled) side.labels.push_back(ds.labels[order[k]]);
    }
    return {train, test};
}

PatternFamilySpec::Mode parse_count_mode(const std::string& text) {
    if (text == "hom") return PatternFamilySpec::Mode::homomorphism;
    if (text == "sub") return PatternFamilySpec::Mode::subgraph;
    if (text == "basis") return PatternFamilySpec::Mode::cycle_basis;
    throw ValidationError("unknown count mode \"" + text + "\" (want hom, sub, or basis)");
}

}  // namespace treemover
