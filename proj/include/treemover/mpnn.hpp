// Deterministic reference message passing network. There is no training
// anywhere: weights come from a file or from a seeded generator, and the
// forward pass exists to check distance-based stability claims and to feed
// weight norms into the generalization bound.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treemover/graph.hpp"

namespace treemover {

// Row-major real matrix; entry (i, j) = data[i][j].
using Matrix = std::vector<std::vector<double>>;

// Matrices applied left to right with max(., 0) between them and nothing
// after the last. All MLPs are bias-free, so the zero vector maps to the
// zero vector; padding arguments with blanks is then a no-op on sums.
struct MlpWeights {
    std::vector<Matrix> matrices;

    int input_dim() const;
    int output_dim() const;
};

struct MpnnLayer {
    MlpWeights message;  // applied to concat(neighbor state, edge feature)
    MlpWeights update;   // applied to concat(own state, summed messages)
};

struct MpnnModel {
    std::vector<MpnnLayer> layers;
    MlpWeights classifier;  // applied to the summed final states
    int input_dim = 0;
    int edge_dim = 0;  // 0 = graphs carry no edge features
    int class_count = 0;
};

// Shape and finiteness check; ContractError with the offending location.
void validate_model(const MpnnModel& m);

FeatureVector mlp_apply(const MlpWeights& w, const FeatureVector& in);

// Logits for one graph. Every multiset sum (neighbor messages, final
// pooling) accumulates its contributions in sorted byte order, which makes
// the result bitwise identical across relabelings of the input graph.
FeatureVector forward(const MpnnModel& m, const Graph& g);

// Independent forwards, parallelized over graphs.
std::vector<FeatureVector> forward_all(const MpnnModel& m, const std::vector<Graph>& graphs);

// Largest singular value by power iteration (fixed all-ones start plus a
// deterministic perturbed restart, 1000 iteration cap, 1e-10 delta).
double spectral_norm(const Matrix& a);

// Product of the spectral norms of the MLP's matrices; an upper bound on
// its Lipschitz constant since the activation is 1-Lipschitz.
double mlp_lipschitz(const MlpWeights& w);

// L_c * 2^T * prod_t max(L_f(t), 1) * max(L_g(t), 1), where each factor is
// the mlp_lipschitz of that layer's MLP. Valid for every model: sub-unit
// message/update factors are raised to one (the classifier factor is not).
double lipschitz_bound(const MpnnModel& m);

// Fraction of rows whose true-class logit fails to beat every other logit
// by more than gamma.
double margin_loss(const std::vector<FeatureVector>& logits, const std::vector<int>& labels,
                   double gamma);

// Seeded weights, uniform in [-1, 1] scaled by 1/sqrt(fan-in). node_widths
// holds the embedding width after each of the T layers; every MLP has
// mlp_depth matrices with hidden width equal to its output width.
MpnnModel random_model(std::uint64_t seed, int input_dim, int edge_dim, int class_count,
                       const std::vector<int>& node_widths, int mlp_depth = 2);

MpnnModel read_model_json(const std::string& path);
void write_model_json(const MpnnModel& m, const std::string& path);

}  // namespace treemover
