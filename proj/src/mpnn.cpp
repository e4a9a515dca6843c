#include "treemover/mpnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>

#include "json.hpp"

#include "treemover/errors.hpp"
#include "treemover/io.hpp"
#include "treemover/rng.hpp"

namespace treemover {

namespace {

int matrix_rows(const Matrix& a) { return static_cast<int>(a.size()); }

int matrix_cols(const Matrix& a) { return a.empty() ? 0 : static_cast<int>(a[0].size()); }

void check_matrix(const Matrix& a, const std::string& where) {
    if (a.empty() || a[0].empty()) throw ContractError(where + ": empty matrix");
    const std::size_t cols = a[0].size();
    for (const auto& row : a) {
        if (row.size() != cols) throw ContractError(where + ": ragged matrix");
        for (double v : row) {
            if (!std::isfinite(v)) throw ContractError(where + ": non-finite entry");
        }
    }
}

void check_mlp(const MlpWeights& w, const std::string& where) {
    if (w.matrices.empty()) throw ContractError(where + ": empty MLP");
    for (std::size_t i = 0; i < w.matrices.size(); ++i) {
        check_matrix(w.matrices[i], where + " matrix " + std::to_string(i));
        if (i > 0 && matrix_cols(w.matrices[i]) != matrix_rows(w.matrices[i - 1])) {
            throw ContractError(where + ": matrix " + std::to_string(i) +
                                " input dim does not match previous output");
        }
    }
}

// Bytewise total order on equal-length vectors. Any permutation of equal
// values sorts to the same sequence, so a fold over the sorted range is a
// label-independent function of the multiset.
struct ByteLess {
    bool operator()(const FeatureVector& a, const FeatureVector& b) const {
        if (a.empty()) return false;
        return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) < 0;
    }
};

FeatureVector sorted_sum(std::vector<FeatureVector>& parts, int dim) {
    FeatureVector acc(static_cast<std::size_t>(dim), 0.0);
    std::sort(parts.begin(), parts.end(), ByteLess{});
    for (const auto& p : parts) {
        for (int i = 0; i < dim; ++i) acc[static_cast<std::size_t>(i)] += p[i];
    }
    return acc;
}

FeatureVector concat(const FeatureVector& a, const FeatureVector& b) {
    FeatureVector out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

int MlpWeights::input_dim() const { return matrices.empty() ? 0 : matrix_cols(matrices.front()); }

int MlpWeights::output_dim() const { return matrices.empty() ? 0 : matrix_rows(matrices.back()); }

void validate_model(const MpnnModel& m) {
    if (m.input_dim < 0 || m.edge_dim < 0) throw ContractError("negative model dimension");
    if (m.class_count < 1) throw ContractError("model needs at least one class");
    int dim = m.input_dim;
    for (std::size_t t = 0; t < m.layers.size(); ++t) {
        const std::string where = "layer " + std::to_string(t);
        const auto& layer = m.layers[t];
        check_mlp(layer.message, where + " message");
        check_mlp(layer.update, where + " update");
        if (layer.message.input_dim() != dim + m.edge_dim) {
            throw ContractError(where + ": message input dim " +
                                std::to_string(layer.message.input_dim()) + ", expected " +
                                std::to_string(dim + m.edge_dim));
        }
        if (layer.update.input_dim() != dim + layer.message.output_dim()) {
            throw ContractError(where + ": update input dim " +
                                std::to_string(layer.update.input_dim()) + ", expected " +
                                std::to_string(dim + layer.message.output_dim()));
        }
        dim = layer.update.output_dim();
    }
    check_mlp(m.classifier, "classifier");
    if (m.classifier.input_dim() != dim) {
        throw ContractError("classifier input dim " + std::to_string(m.classifier.input_dim()) +
                            ", expected " + std::to_string(dim));
    }
    if (m.classifier.output_dim() != m.class_count) {
        throw ContractError("classifier output dim " +
                            std::to_string(m.classifier.output_dim()) + ", expected " +
                            std::to_string(m.class_count));
    }
}

FeatureVector mlp_apply(const MlpWeights& w, const FeatureVector& in) {
    FeatureVector x = in;
    for (std::size_t l = 0; l < w.matrices.size(); ++l) {
        const Matrix& a = w.matrices[l];
        if (x.size() != a[0].size()) {
            throw ContractError("MLP input dim " + std::to_string(x.size()) + ", expected " +
                                std::to_string(a[0].size()));
        }
        FeatureVector y(a.size(), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) s += a[i][j] * x[j];
            y[i] = s;
        }
        if (l + 1 < w.matrices.size()) {
            for (double& v : y) v = v > 0.0 ? v : 0.0;
        }
        x = std::move(y);
    }
    return x;
}

FeatureVector forward(const MpnnModel& m, const Graph& g) {
    validate_model(m);
    if (g.feature_dim() != m.input_dim && g.node_count > 0) {
        throw ContractError("graph feature dim " + std::to_string(g.feature_dim()) +
                            ", model expects " + std::to_string(m.input_dim));
    }
    if (m.edge_dim > 0 && g.edge_feature_dim() != m.edge_dim && !g.edges.empty()) {
        throw ContractError("graph edge feature dim " + std::to_string(g.edge_feature_dim()) +
                            ", model expects " + std::to_string(m.edge_dim));
    }
    if (m.edge_dim == 0 && g.has_edge_features()) {
        throw ContractError("model takes no edge features but the graph has them");
    }

    const auto adjacency = build_adjacency(g);
    const FeatureVector no_edge;
    std::vector<FeatureVector> x = g.features;
    for (const auto& layer : m.layers) {
        const int msg_dim = layer.message.output_dim();
        std::vector<FeatureVector> next(x.size());
        std::vector<FeatureVector> parts;
        for (int v = 0; v < g.node_count; ++v) {
            parts.clear();
            for (const auto& [u, eidx] : adjacency[v]) {
                const FeatureVector& e =
                    m.edge_dim > 0 ? g.edge_features[static_cast<std::size_t>(eidx)] : no_edge;
                parts.push_back(mlp_apply(layer.message, concat(x[static_cast<std::size_t>(u)], e)));
            }
            const FeatureVector msg = sorted_sum(parts, msg_dim);
            next[static_cast<std::size_t>(v)] =
                mlp_apply(layer.update, concat(x[static_cast<std::size_t>(v)], msg));
        }
        x = std::move(next);
    }

    const int pooled_dim = m.layers.empty() ? m.input_dim : m.layers.back().update.output_dim();
    FeatureVector pooled = sorted_sum(x, pooled_dim);
    return mlp_apply(m.classifier, pooled);
}

std::vector<FeatureVector> forward_all(const MpnnModel& m, const std::vector<Graph>& graphs) {
    validate_model(m);
    std::vector<FeatureVector> out(graphs.size());
    std::exception_ptr err;
    const long long count = static_cast<long long>(graphs.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = forward(m, graphs[static_cast<std::size_t>(i)]);
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

namespace {

double vector_norm(const FeatureVector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// One power-iteration run on a^T a from the given start; returns the
// converged ||a v||, which is a lower estimate of the top singular value
// and equals it whenever the start overlaps the top singular space.
double power_iterate(const Matrix& a, FeatureVector v) {
    const int rows = matrix_rows(a);
    const int cols = matrix_cols(a);
    const double nv = vector_norm(v);
    if (nv == 0.0) return 0.0;
    for (double& x : v) x /= nv;

    double sigma = 0.0;
    for (int iter = 0; iter < 1000; ++iter) {
        FeatureVector u(static_cast<std::size_t>(rows), 0.0);
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols; ++j) s += a[i][j] * v[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(i)] = s;
        }
        const double next = vector_norm(u);
        if (next == 0.0) return 0.0;
        FeatureVector w(static_cast<std::size_t>(cols), 0.0);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) w[static_cast<std::size_t>(j)] += a[i][j] * u[i];
        }
        const double nw = vector_norm(w);
        if (nw == 0.0) return next;
        for (double& x : w) x /= nw;
        v = std::move(w);
        if (std::abs(next - sigma) <= 1e-10) return next;
        sigma = next;
    }
    return sigma;
}

}  // namespace

double spectral_norm(const Matrix& a) {
    check_matrix(a, "spectral norm");
    const int rows = matrix_rows(a);
    const int cols = matrix_cols(a);

    FeatureVector ones(static_cast<std::size_t>(cols), 1.0);
    double best = power_iterate(a, ones);

    // A start orthogonal to the top singular space converges elsewhere;
    // a second skewed start cannot share that orthogonality except on a
    // measure-zero set, so the max of the two runs is taken.
    FeatureVector skew(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) skew[static_cast<std::size_t>(j)] = 1.0 + (j + 1) / 1024.0;
    best = std::max(best, power_iterate(a, skew));

    if (best == 0.0) {
        // Both starts were annihilated. Restart from the heaviest column's
        // basis vector, which a nonzero matrix cannot annihilate.
        int heaviest = 0;
        double heaviest_norm = 0.0;
        for (int j = 0; j < cols; ++j) {
            double s = 0.0;
            for (int i = 0; i < rows; ++i) s += a[i][j] * a[i][j];
            if (s > heaviest_norm) {
                heaviest_norm = s;
                heaviest = j;
            }
        }
        if (heaviest_norm == 0.0) return 0.0;
        FeatureVector basis(static_cast<std::size_t>(cols), 0.0);
        basis[static_cast<std::size_t>(heaviest)] = 1.0;
        best = power_iterate(a, basis);
    }
    return best;
}

double mlp_lipschitz(const MlpWeights& w) {
    double prod = 1.0;
    for (const auto& a : w.matrices) prod *= spectral_norm(a);
    return prod;
}

double lipschitz_bound(const MpnnModel& m) {
    validate_model(m);
    double l = mlp_lipschitz(m.classifier);
    for (const auto& layer : m.layers) {
        // Message and update factors below one are raised to one. The
        // level recursion feeds a node's own state and the fresh edge
        // terms forward unattenuated, so sub-unit factors would understate
        // those paths and the result would stop being an upper bound.
        l *= 2.0 * std::max(1.0, mlp_lipschitz(layer.message)) *
             std::max(1.0, mlp_lipschitz(layer.update));
    }
    return l;
}

double margin_loss(const std::vector<FeatureVector>& logits, const std::vector<int>& labels,
                   double gamma) {
    if (logits.empty()) throw ContractError("margin loss needs at least one row");
    if (logits.size() != labels.size()) {
        throw ContractError("margin loss: " + std::to_string(logits.size()) + " logit rows vs " +
                            std::to_string(labels.size()) + " labels");
    }
    if (!(gamma >= 0.0)) throw ContractError("margin must be nonnegative");
    int failures = 0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const auto& row = logits[i];
        if (row.size() < 2) throw ContractError("margin loss needs at least two classes");
        const int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= row.size()) {
            throw ContractError("label " + std::to_string(y) + " outside " +
                                std::to_string(row.size()) + " classes");
        }
        double other = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (static_cast<int>(k) != y) other = std::max(other, row[k]);
        }
        if (row[static_cast<std::size_t>(y)] <= gamma + other) ++failures;
    }
    return static_cast<double>(failures) / static_cast<double>(logits.size());
}

namespace {

Matrix random_matrix(CounterRng& rng, int rows, int cols) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    Matrix a(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols)));
    for (auto& row : a) {
        for (double& v : row) v = rng.uniform(-1.0, 1.0) * scale;
    }
    return a;
}

MlpWeights random_mlp(CounterRng& rng, int in, int out, int depth) {
    MlpWeights w;
    int prev = in;
    for (int l = 0; l < depth; ++l) {
        w.matrices.push_back(random_matrix(rng, out, prev));
        prev = out;
    }
    return w;
}

}  // namespace

MpnnModel random_model(std::uint64_t seed, int input_dim, int edge_dim, int class_count,
                       const std::vector<int>& node_widths, int mlp_depth) {
    if (input_dim < 1 || edge_dim < 0 || class_count < 1 || mlp_depth < 1) {
        throw ContractError("invalid random model shape");
    }
    for (int w : node_widths) {
        if (w < 1) throw ContractError("layer widths must be positive");
    }
    CounterRng rng(seed);
    MpnnModel m;
    m.input_dim = input_dim;
    m.edge_dim = edge_dim;
    m.class_count = class_count;
    int dim = input_dim;
    for (int width : node_widths) {
        MpnnLayer layer;
        layer.message = random_mlp(rng, dim + edge_dim, width, mlp_depth);
        layer.update = random_mlp(rng, dim + width, width, mlp_depth);
        m.layers.push_back(std::move(layer));
        dim = width;
    }
    m.classifier = random_mlp(rng, dim, class_count, mlp_depth);
    validate_model(m);
    return m;
}

namespace {

using nlohmann::json;

// Accepts either one matrix (rows of numbers) or a list of matrices.
std::vector<Matrix> parse_mlp(const json& node, const std::string& where) {
    if (!node.is_array() || node.empty()) {
        throw ValidationError(where + ": expected a non-empty array");
    }
    const bool single = node[0].is_array() && !node[0].empty() && node[0][0].is_number();
    std::vector<Matrix> out;
    for (const auto& mat : single ? json::array({node}) : node) {
        Matrix a;
        if (!mat.is_array() || mat.empty()) throw ValidationError(where + ": bad matrix");
        for (const auto& row : mat) {
            if (!row.is_array() || row.empty()) throw ValidationError(where + ": bad matrix row");
            std::vector<double> r;
            for (const auto& v : row) {
                if (!v.is_number()) throw ValidationError(where + ": non-numeric entry");
                r.push_back(v.get<double>());
            }
            a.push_back(std::move(r));
        }
        out.push_back(std::move(a));
    }
    return out;
}

void append_matrix(std::string& out, const Matrix& a, const std::string& indent) {
    out += "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ",";
        out += "\n" + indent + " [";
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (j) out += ",";
            out += format_real(a[i][j]);
        }
        out += "]";
    }
    out += "]";
}

void append_mlp(std::string& out, const MlpWeights& w, const std::string& indent) {
    out += "[";
    for (std::size_t i = 0; i < w.matrices.size(); ++i) {
        if (i) out += ",\n" + indent;
        append_matrix(out, w.matrices[i], indent);
    }
    out += "]";
}

}  // namespace

MpnnModel read_model_json(const std::string& path) {
    const std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError("weight file parse error (" + std::string(e.what()) + ")");
    }
    if (!doc.is_object() || !doc.contains("layers") || !doc.contains("classifier")) {
        throw ValidationError("weight file needs \"layers\" and \"classifier\"");
    }
    MpnnModel m;
    if (doc.contains("meta") && doc["meta"].is_object()) {
        const auto& meta = doc["meta"];
        if (meta.contains("edge_dim")) m.edge_dim = meta["edge_dim"].get<int>();
    }
    int index = 0;
    for (const auto& entry : doc["layers"]) {
        if (!entry.is_object() || !entry.contains("g") || !entry.contains("f")) {
            throw ValidationError("layer " + std::to_string(index) +
                                  " needs \"g\" and \"f\" matrices");
        }
        MpnnLayer layer;
        layer.message.matrices = parse_mlp(entry["g"], "layer " + std::to_string(index) + " g");
        layer.update.matrices = parse_mlp(entry["f"], "layer " + std::to_string(index) + " f");
        m.layers.push_back(std::move(layer));
        ++index;
    }
    m.classifier.matrices = parse_mlp(doc["classifier"], "classifier");

    m.class_count = m.classifier.output_dim();
    if (m.layers.empty()) {
        m.input_dim = m.classifier.input_dim();
    } else {
        m.input_dim = m.layers.front().message.input_dim() - m.edge_dim;
    }
    try {
        validate_model(m);
    } catch (const ContractError& e) {
        throw ValidationError(std::string("weight file: ") + e.what());
    }
    return m;
}

void write_model_json(const MpnnModel& m, const std::string& path) {
    validate_model(m);
    std::string out = "{\"layers\":[";
    for (std::size_t t = 0; t < m.layers.size(); ++t) {
        if (t) out += ",";
        out += "\n {\"g\":";
        append_mlp(out, m.layers[t].message, "  ");
        out += ",\n  \"f\":";
        append_mlp(out, m.layers[t].update, "  ");
        out += "}";
    }
    out += "],\n \"classifier\":";
    append_mlp(out, m.classifier, " ");
    out += ",\n \"meta\":{\"input_dim\":" + std::to_string(m.input_dim) +
           ",\"edge_dim\":" + std::to_string(m.edge_dim) +
           ",\"classes\":" + std::to_string(m.class_count) + "}}\n";
    write_text_file(path, out);
}

}  // namespace treemover
