#include "treemover/bound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "treemover/errors.hpp"
#include "treemover/io.hpp"

namespace treemover {

void validate_params(const BoundParams& p) {
    const auto fail = [](const std::string& what) { throw ContractError("bound params: " + what); };
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) fail("gamma must be positive");
    if (!(p.delta > 0.0 && p.delta < 1.0)) fail("delta must lie in (0, 1)");
    if (!(p.alpha > 0.0 && p.alpha < 0.25)) fail("alpha must lie in (0, 0.25)");
    if (p.n_train < 1) fail("n_train must be at least 1");
    if (p.classes < 2) fail("classes must be at least 2");
    if (!(p.lip_eta >= 0.0) || !std::isfinite(p.lip_eta)) fail("lip_eta must be nonnegative");
    if (!(p.spec_cap > 0.0) || !std::isfinite(p.spec_cap)) fail("spec_cap must be positive");
    if (p.hidden_dim < 1) fail("hidden_dim must be at least 1");
    if (p.depth_count < 1) fail("depth_count must be at least 1");
    if (p.max_degree < 0) fail("max_degree must be nonnegative");
    if (!(p.feature_bound >= 0.0) || !std::isfinite(p.feature_bound)) {
        fail("feature_bound must be nonnegative");
    }
    if (!(p.weight_sq_norm_sum >= 0.0) || !std::isfinite(p.weight_sq_norm_sum)) {
        fail("weight_sq_norm_sum must be nonnegative");
    }
    if (!(p.train_margin_loss >= 0.0 && p.train_margin_loss <= 1.0)) {
        fail("train_margin_loss must lie in [0, 1]");
    }
    if (!(p.xi >= 0.0) || !std::isfinite(p.xi)) fail("xi must be nonnegative");
}

double generalization_gap_bound(const BoundParams& p) {
    validate_params(p);
    const double b = static_cast<double>(p.hidden_dim);
    const double d_count = static_cast<double>(p.depth_count);
    const double n = static_cast<double>(p.n_train);
    const double rate = std::pow(n, 2.0 * p.alpha);

    const double t1 = b * p.weight_sq_norm_sum * std::pow(p.xi, 2.0 / d_count) /
                      (rate * std::pow(p.gamma / 8.0, 2.0 / d_count));

    const double db = static_cast<double>(p.max_degree) * p.feature_bound;
    const double db_factor = db == 0.0 ? 1.0 : std::pow(2.0 * db, 1.0 / d_count);
    const double log_arg = 2.0 * b * d_count * p.spec_cap * db_factor;
    const double t2 = b * b * std::max(0.0, std::log(log_arg)) /
                      (rate * std::pow(p.gamma, 1.0 / d_count) * p.delta);

    const double t3 = std::pow(n, 2.0 * p.alpha - 1.0);
    const double t4 = p.lip_eta * static_cast<double>(p.classes) * p.xi;

    return p.train_margin_loss + t1 + t2 + t3 + t4;
}

double fixed_encoder_bound(const BoundParams& p, double xi_latent) {
    if (!(xi_latent >= 0.0) || !std::isfinite(xi_latent)) {
        throw ContractError("bound params: latent xi must be nonnegative");
    }
    BoundParams q = p;
    q.xi = xi_latent;
    return generalization_gap_bound(q);
}

std::vector<double> bound_curve(const std::vector<double>& sorted_minima, const BoundParams& p) {
    validate_params(p);
    std::vector<double> out;
    out.reserve(sorted_minima.size());
    double running = 0.0;
    for (std::size_t i = 0; i < sorted_minima.size(); ++i) {
        const double v = sorted_minima[i];
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ContractError("distance curve entries must be nonnegative");
        }
        if (i > 0 && v < sorted_minima[i - 1]) {
            throw ContractError("distance curve input must be sorted ascending");
        }
        running = std::max(running, v);
        BoundParams q = p;
        q.xi = running;
        out.push_back(generalization_gap_bound(q));
    }
    return out;
}

std::vector<double> cumulative_accuracy(const std::vector<double>& distances,
                                        const std::vector<bool>& correct) {
    if (distances.size() != correct.size()) {
        throw ContractError("cumulative accuracy: " + std::to_string(distances.size()) +
                            " distances vs " + std::to_string(correct.size()) + " flags");
    }
    for (double d : distances) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw ContractError("cumulative accuracy distances must be nonnegative");
        }
    }
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
    std::vector<double> out;
    out.reserve(order.size());
    double hits = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        hits += correct[order[i]] ? 1.0 : 0.0;
        out.push_back(hits / static_cast<double>(i + 1));
    }
    return out;
}

BoundParams read_bound_params(const std::string& path) {
    const std::string text = read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("params file parse error (" + std::string(e.what()) + ")");
    }
    if (!doc.is_object()) throw ValidationError("params file must hold a JSON object");

    BoundParams p;
    const auto take_real = [&](const char* key, double& slot, bool required) {
        if (!doc.contains(key)) {
            if (required) throw ValidationError(std::string("params file: missing ") + key);
            return;
        }
        if (!doc[key].is_number()) {
            throw ValidationError(std::string("params file: ") + key + " must be a number");
        }
        slot = doc[key].get<double>();
        doc.erase(key);
    };
    const auto take_int = [&](const char* key, auto& slot, bool required) {
        if (!doc.contains(key)) {
            if (required) throw ValidationError(std::string("params file: missing ") + key);
            return;
        }
        if (!doc[key].is_number_integer()) {
            throw ValidationError(std::string("params file: ") + key + " must be an integer");
        }
        slot = doc[key].get<std::decay_t<decltype(slot)>>();
        doc.erase(key);
    };

    take_real("gamma", p.gamma, true);
    take_real("delta", p.delta, true);
    take_real("alpha", p.alpha, true);
    take_int("n_train", p.n_train, true);
    take_int("classes", p.classes, true);
    take_real("lip_eta", p.lip_eta, false);
    take_real("spec_cap", p.spec_cap, false);
    take_int("hidden_dim", p.hidden_dim, false);
    take_int("depth_count", p.depth_count, false);
    take_int("max_degree", p.max_degree, false);
    take_real("feature_bound", p.feature_bound, false);
    take_real("weight_sq_norm_sum", p.weight_sq_norm_sum, false);
    take_real("train_margin_loss", p.train_margin_loss, false);
    take_real("xi", p.xi, false);

    if (!doc.empty()) {
        throw ValidationError("params file: unknown key \"" + doc.begin().key() + "\"");
    }
    try {
        validate_params(p);
    } catch (const ContractError& e) {
        throw ValidationError(e.what());
    }
    return p;
}

}  // namespace treemover
