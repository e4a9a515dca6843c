// Seeded synthetic graph generation and structural labeling.
//
// Every graph is produced from its own split RNG stream, so dataset content
// depends only on (spec, seed, index), never on generation order or count.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treemover/graph.hpp"
#include "treemover/transforms.hpp"

namespace treemover {

struct GenSpec {
    enum class Model { er, ba, sbm };

    Model model = Model::er;
    double er_p = 0.1;
    int ba_m = 2;
    std::pair<int, int> sbm_blocks = {3, 6};
    std::pair<double, double> sbm_p_in = {0.3, 0.6};
    std::pair<double, double> sbm_p_out = {0.01, 0.1};

    std::pair<int, int> nodes = {35, 55};
    int n_graphs = 1;
    std::uint64_t seed = 0;

    // Model grammar: "er:p=<real>" | "ba:m=<int>" |
    // "sbm:blocks=<lo>:<hi>,p_in=<lo>:<hi>,p_out=<lo>:<hi>" (sbm keys
    // optional, defaults above). Fills only the model fields.
    static GenSpec parse_model(const std::string& text);
};

// ContractError on out-of-range probabilities, an empty node range, an
// infeasible BA or SBM configuration, or n_graphs < 1.
void validate_gen_spec(const GenSpec& spec);

// n_graphs unlabeled graphs with unit scalar features. Node counts are
// uniform over the range; edges follow the chosen model. Deterministic in
// (spec, seed) bit for bit.
GraphDataset generate(const GenSpec& spec);

struct LabelSpec {
    PatternFamilySpec::Mode mode = PatternFamilySpec::Mode::subgraph;
    std::vector<int> lengths = {3, 4};  // each >= 3
};

// Whole-graph cycle count for one length: closed-walk total for the
// homomorphism mode, distinct simple cycles for the subgraph mode, and
// fundamental-basis cycles of that length for the basis mode.
long long graph_cycle_count(const Graph& g, PatternFamilySpec::Mode mode, int length);

// Per-graph score = sum of whole-graph counts over spec.lengths; label 1
// iff the score strictly exceeds the lower median, else 0. Ties at the
// median always go to 0, so label 1 never outnumbers label 0.
GraphDataset label_cycle_median(const GraphDataset& ds, const LabelSpec& spec);

// Deterministic shuffle, then the first round(frac * n) graphs become the
// train half. Labels travel with their graphs.
std::pair<GraphDataset, GraphDataset> split_dataset(const GraphDataset& ds, std::uint64_t seed,
                                                    double frac);

PatternFamilySpec::Mode parse_count_mode(const std::string& text);

}  // namespace treemover
