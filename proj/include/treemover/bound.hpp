// Margin-based generalization gap bound and the two curves derived from it.
//
// The bound is the sum of the empirical margin loss and four terms: a
// weight-norm complexity term scaled by the train/test distance xi, a
// logarithmic capacity term, a sample-size term, and a label-smoothness
// term linear in xi. All big-O constants are fixed at one.
#pragma once

#include <string>
#include <vector>

namespace treemover {

struct BoundParams {
    double gamma = 1.0;              // margin, > 0
    double delta = 0.1;              // confidence level, in (0, 1)
    double alpha = 0.2;              // rate exponent, in (0, 0.25)
    long long n_train = 1;           // training sample size, >= 1
    int classes = 2;                 // K, >= 2
    double lip_eta = 0.0;            // Lipschitz bound of the label functions, >= 0
    double spec_cap = 1.0;           // cap on every weight matrix spectral norm, > 0
    int hidden_dim = 1;              // widest hidden width b, >= 1
    int depth_count = 1;             // number of learnable matrices D, >= 1
    int max_degree = 0;              // largest node degree d, >= 0
    double feature_bound = 0.0;      // largest input feature norm B, >= 0
    double weight_sq_norm_sum = 0.0; // sum of squared matrix spectral norms, >= 0
    double train_margin_loss = 0.0;  // empirical margin loss, in [0, 1]
    double xi = 0.0;                 // max-min train/test distance, >= 0
};

// ContractError naming the violated range.
void validate_params(const BoundParams& p);

// train_margin_loss
//   + b * W * xi^(2/D) / (N^(2a) * (gamma/8)^(2/D))
//   + b^2 * ln(2 b D C_spec (2 d B)^(1/D)) / (N^(2a) * gamma^(1/D) * delta)
//   + N^(2a - 1)
//   + C_eta * K * xi
// The logarithm is clamped at 0 from below; the (2dB)^(1/D) factor is 1
// when d*B = 0.
double generalization_gap_bound(const BoundParams& p);

// Same arithmetic with xi replaced by a latent-space distance. The caller
// restricts weight_sq_norm_sum and the dimension fields to the classifier.
double fixed_encoder_bound(const BoundParams& p, double xi_latent);

// Entry i = generalization_gap_bound with xi set to minima[i], the prefix
// maximum of a sorted sequence. Input must be sorted ascending.
std::vector<double> bound_curve(const std::vector<double>& sorted_minima, const BoundParams& p);

// Sort items by ascending distance (stable on ties); entry i = mean of
// correct[] over the first i+1 items.
std::vector<double> cumulative_accuracy(const std::vector<double>& distances,
                                        const std::vector<bool>& correct);

// JSON object whose keys mirror the BoundParams field names. gamma, delta,
// alpha, n_train and classes are required; the rest default as above.
// Unknown keys are rejected.
BoundParams read_bound_params(const std::string& path);

}  // namespace treemover
