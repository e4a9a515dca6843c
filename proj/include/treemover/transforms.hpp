// Graph transformations that strengthen what message passing can see.
//
// Two families are built in: appending per-node cycle counts to the feature
// vectors, and expanding a graph into its k-tuple product graph whose 1-WL
// refinement tracks k-WL on the original. Composing either with the tree
// distance gives the corresponding zeta-distance.
#pragma once

#include <string>
#include <vector>

#include "treemover/graph.hpp"
#include "treemover/tmd.hpp"

namespace treemover {

struct PatternFamilySpec {
    enum class Mode { homomorphism, subgraph, cycle_basis };
    Mode mode = Mode::subgraph;
    int max_cycle_length = 3;  // counts cover lengths 3..max_cycle_length
};

struct ZetaSpec {
    enum class Variant { identity, f_augment, k_tuple };
    enum class Locality { global, local };

    Variant variant = Variant::identity;
    PatternFamilySpec pattern{};             // f_augment only
    int k = 2;                               // k_tuple only
    Locality locality = Locality::global;    // k_tuple only
    long long node_budget = 20000;           // k_tuple only

    // Grammar: "identity" | "f-aug:mode=<hom|sub|basis>,lmax=<L>" |
    // "k-tuple:k=<k>,locality=<global|local>" (locality optional, default
    // global). Throws ValidationError on anything else.
    static ZetaSpec parse(const std::string& text);
    std::string to_string() const;
};

// counts[v][i] = occurrences of the cycle of length 3+i at node v.
// homomorphism: closed walks, (A^l)_{vv}. subgraph: distinct simple cycles
// through v. cycle_basis: cycles of the deterministic fundamental basis (BFS
// forest rooted at the lowest node of each component, neighbors in index
// order) that contain v.
std::vector<std::vector<long long>> cycle_node_counts(const Graph& g,
                                                      const PatternFamilySpec& spec);

// Same structure, features extended by the cycle counts (cast to reals).
Graph augment(const Graph& g, const PatternFamilySpec& spec);

// Product graph on V^k (lexicographic order). Node features encode the
// tuple's equality pattern (k^2), its adjacency pattern (k^2), and the k
// original feature vectors, concatenated. Tuples differing in exactly one
// position are linked; the edge feature one-hot encodes that position, and
// with global locality an extra flag marks whether the differing pair is
// adjacent in g (local keeps only adjacent pairs instead). Exceeding the
// node budget raises ResourceError naming n^k.
Graph k_tuple_graph(const Graph& g, int k, ZetaSpec::Locality locality,
                    long long node_budget = 20000);

Graph simulate(const Graph& g, const ZetaSpec& zeta);

double zeta_tmd(const Graph& g, const Graph& h, const ZetaSpec& zeta, int depth,
                const DepthWeights& w);

// Batch wrappers: transform every graph (in parallel), then run the plain
// pairwise/cross distance.
DistanceMatrix pairwise_tmd(const std::vector<Graph>& graphs, int depth, const DepthWeights& w,
                            const ZetaSpec& zeta);
std::vector<std::vector<double>> cross_tmd(const std::vector<Graph>& test,
                                           const std::vector<Graph>& train, int depth,
                                           const DepthWeights& w, const ZetaSpec& zeta);

}  // namespace treemover
