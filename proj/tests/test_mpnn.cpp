#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "doctest.h"

#include "support/builders.hpp"
#include "support/tmpdir.hpp"
#include "treemover/errors.hpp"
#include "treemover/io.hpp"
#include "treemover/mpnn.hpp"
#include "treemover/rng.hpp"
#include "treemover/tmd.hpp"
#include "treemover/transforms.hpp"

using namespace treemover;
using namespace testsupport;

namespace {

Matrix identity_matrix(int n) {
    Matrix a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) a[i][i] = 1.0;
    return a;
}

MlpWeights single(Matrix m) {
    MlpWeights w;
    w.matrices.push_back(std::move(m));
    return w;
}

double norm_diff(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<int> random_permutation(CounterRng& rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_int(0, i));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

double svd_top(const Matrix& a) {
    Eigen::MatrixXd m(a.size(), a[0].size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[i].size(); ++j) m(i, j) = a[i][j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

Matrix random_matrix(CounterRng& rng, int rows, int cols, double lo = -2.0, double hi = 2.0) {
    Matrix a(rows, std::vector<double>(cols));
    for (auto& row : a) {
        for (double& v : row) v = rng.uniform(lo, hi);
    }
    return a;
}

}  // namespace

TEST_CASE("mlp application and activation clipping") {
    CHECK(mlp_apply(single(identity_matrix(3)), {1.0, -2.0, 3.0}) ==
          FeatureVector{1.0, -2.0, 3.0});

    // negative intermediate values are clipped, final layer is linear
    MlpWeights w;
    w.matrices.push_back({{1.0}, {-1.0}});
    w.matrices.push_back({{1.0, 1.0}});
    CHECK(mlp_apply(w, {3.0}) == FeatureVector{3.0});
    CHECK(mlp_apply(w, {-3.0}) == FeatureVector{3.0});

    CHECK_THROWS_AS(mlp_apply(single(identity_matrix(3)), {1.0}), ContractError);
}

TEST_CASE("zero weights give zero logits") {
    MpnnModel m;
    m.input_dim = 1;
    m.class_count = 2;
    MpnnLayer layer;
    layer.message = single(Matrix{{0.0}});
    layer.update = single(Matrix{{0.0, 0.0}});
    m.layers.push_back(layer);
    m.classifier = single(Matrix{{0.0}, {0.0}});

    CounterRng rng(31);
    const Graph g = random_graph(rng, 6, 0.5, 1);
    CHECK(forward(m, g) == FeatureVector{0.0, 0.0});
}

TEST_CASE("no layers reduces to classifying the pooled features") {
    MpnnModel m;
    m.input_dim = 2;
    m.class_count = 2;
    m.classifier = single(identity_matrix(2));

    Graph one;
    one.node_count = 1;
    one.features = {{3.5, -1.25}};
    CHECK(forward(m, one) == FeatureVector{3.5, -1.25});

    Graph two = one;
    two.node_count = 2;
    two.features.push_back({0.5, 1.25});
    CHECK(forward(m, two) == FeatureVector{4.0, 0.0});
}

TEST_CASE("hand-computed single-layer pass") {
    // path on two nodes, features 1 and 2: both end states are 3, pooled 6
    MpnnModel m;
    m.input_dim = 1;
    m.class_count = 1;
    MpnnLayer layer;
    layer.message = single(Matrix{{1.0}});
    layer.update = single(Matrix{{1.0, 1.0}});
    m.layers.push_back(layer);
    m.classifier = single(Matrix{{1.0}});

    Graph p2;
    p2.node_count = 2;
    p2.features = {{1.0}, {2.0}};
    p2.edges = {{0, 1}};
    CHECK(forward(m, p2) == FeatureVector{6.0});

    // same graph with an edge feature of 10 entering the message input
    m.edge_dim = 1;
    m.layers[0].message = single(Matrix{{1.0, 1.0}});
    p2.edge_features = {{10.0}};
    CHECK(forward(m, p2) == FeatureVector{26.0});
}

TEST_CASE("relabeling leaves logits bitwise unchanged") {
    CounterRng rng(32);
    for (int rep = 0; rep < 12; ++rep) {
        auto sub = rng.split(rep);
        Graph g = random_graph(sub, 9, 0.5, 2);
        const bool with_edges = rep % 2 == 0 && !g.edges.empty();
        if (with_edges) {
            for (std::size_t i = 0; i < g.edges.size(); ++i) {
                g.edge_features.push_back({sub.uniform(-1.0, 1.0)});
            }
        }
        const MpnnModel m = random_model(sub.next_u64(), 2, with_edges ? 1 : 0, 3,
                                         {4, 3}, 2);
        const Graph gp = permute_graph(g, random_permutation(sub, g.node_count));
        const auto a = forward(m, g);
        const auto b = forward(m, gp);
        CHECK(a == b);
    }
}

TEST_CASE("spectral norm on fixed matrices") {
    CHECK(spectral_norm(identity_matrix(2)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(spectral_norm({{3.0, 0.0}, {0.0, 4.0}}) == doctest::Approx(4.0).epsilon(1e-10));
    // the all-ones start lies in the null space of this one
    CHECK(spectral_norm({{1.0, -1.0}, {1.0, -1.0}}) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(spectral_norm({{0.0, 0.0}, {0.0, 0.0}}) == 0.0);
    CHECK(spectral_norm({{3.0, 4.0}}) == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(spectral_norm({{3.0}, {4.0}}) == doctest::Approx(5.0).epsilon(1e-10));
    CHECK_THROWS_AS(spectral_norm({{1.0, std::nan("")}}), ContractError);
}

TEST_CASE("spectral norm matches a full decomposition") {
    CounterRng rng(33);
    for (int rep = 0; rep < 50; ++rep) {
        auto sub = rng.split(rep);
        const int rows = 1 + static_cast<int>(sub.uniform_int(0, 5));
        const int cols = 1 + static_cast<int>(sub.uniform_int(0, 5));
        const Matrix a = random_matrix(sub, rows, cols);
        const double expected = svd_top(a);
        CHECK(spectral_norm(a) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("lipschitz constant recomposition") {
    // unit-norm weights, two layers: 2^T alone
    MpnnModel unit;
    unit.input_dim = 2;
    unit.class_count = 2;
    for (int t = 0; t < 2; ++t) {
        MpnnLayer layer;
        layer.message = single(identity_matrix(2));
        Matrix half_pair(2, std::vector<double>(4, 0.0));
        half_pair[0][0] = 1.0;
        half_pair[1][1] = 1.0;
        layer.update = single(half_pair);  // projection, norm 1
        unit.layers.push_back(layer);
    }
    unit.classifier = single(identity_matrix(2));
    CHECK(lipschitz_bound(unit) == doctest::Approx(4.0).epsilon(1e-10));

    MpnnModel flat;
    flat.input_dim = 1;
    flat.class_count = 2;
    flat.classifier = single(Matrix{{3.0}, {0.0}});
    CHECK(lipschitz_bound(flat) == doctest::Approx(3.0).epsilon(1e-10));

    // random model: recompose from per-matrix norms, sub-unit layer factors
    // raised to one
    const MpnnModel m = random_model(77, 2, 0, 3, {5, 4, 3}, 2);
    double expect = 1.0;
    for (const auto& layer : m.layers) {
        double lg = 1.0, lf = 1.0;
        for (const auto& a : layer.message.matrices) lg *= spectral_norm(a);
        for (const auto& a : layer.update.matrices) lf *= spectral_norm(a);
        expect *= 2.0 * std::max(1.0, lg) * std::max(1.0, lf);
    }
    double lc = 1.0;
    for (const auto& a : m.classifier.matrices) lc *= spectral_norm(a);
    expect *= lc;
    CHECK(lipschitz_bound(m) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("margin loss") {
    CHECK(margin_loss({{10.0, 0.0}}, {0}, 1.0) == 0.0);
    CHECK(margin_loss({{0.0, 0.0}, {0.0, 0.0}}, {0, 1}, 0.0) == 1.0);
    CHECK(margin_loss({{2.0, 0.0}, {0.0, 2.0}}, {0, 0}, 1.0) == 0.5);

    CHECK_THROWS_AS(margin_loss({{1.0, 0.0}}, {2}, 0.0), ContractError);
    CHECK_THROWS_AS(margin_loss({{1.0, 0.0}}, {0}, -0.5), ContractError);
    CHECK_THROWS_AS(margin_loss({}, {}, 0.0), ContractError);

    // growing the margin can only add failures
    CounterRng rng(34);
    std::vector<FeatureVector> logits;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        logits.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)});
        labels.push_back(static_cast<int>(rng.uniform_int(0, 2)));
    }
    double prev = margin_loss(logits, labels, 0.0);
    for (double gamma : {0.3, 0.9, 2.5, 8.0}) {
        const double cur = margin_loss(logits, labels, gamma);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK(margin_loss(logits, labels, 1e9) == 1.0);
}

TEST_CASE("weight files round-trip") {
    const MpnnModel m = random_model(55, 2, 1, 3, {4, 3}, 2);
    TmpFile file("weights.json");
    write_model_json(m, file.path);
    const MpnnModel back = read_model_json(file.path);
    CHECK(back.input_dim == m.input_dim);
    CHECK(back.edge_dim == m.edge_dim);
    CHECK(back.class_count == m.class_count);
    REQUIRE(back.layers.size() == m.layers.size());
    for (std::size_t t = 0; t < m.layers.size(); ++t) {
        CHECK(back.layers[t].message.matrices == m.layers[t].message.matrices);
        CHECK(back.layers[t].update.matrices == m.layers[t].update.matrices);
    }
    CHECK(back.classifier.matrices == m.classifier.matrices);

    CounterRng rng(35);
    Graph g = random_graph(rng, 7, 0.5, 2);
    for (std::size_t i = 0; i < g.edges.size(); ++i) g.edge_features.push_back({rng.uniform(-1, 1)});
    CHECK(forward(m, g) == forward(back, g));
}

TEST_CASE("weight files accept single-matrix shorthand") {
    TmpFile file("flat.json");
    write_text_file(file.path,
                    "{\"layers\":[{\"g\":[[1,0],[0,1]],\"f\":[[1,0,0,0],[0,1,0,0]]}],"
                    "\"classifier\":[[1,0],[0,1]]}\n");
    const MpnnModel m = read_model_json(file.path);
    CHECK(m.input_dim == 2);
    CHECK(m.edge_dim == 0);
    CHECK(m.class_count == 2);
    REQUIRE(m.layers.size() == 1);
    CHECK(m.layers[0].message.matrices.size() == 1);

    TmpFile bad("bad.json");
    write_text_file(bad.path, "{\"layers\":[]}\n");
    CHECK_THROWS_AS(read_model_json(bad.path), ValidationError);
    write_text_file(bad.path, "{\"layers\":[],\"classifier\":[[1,\"x\"]]}\n");
    CHECK_THROWS_AS(read_model_json(bad.path), ValidationError);
    // inconsistent shapes are rejected on load, not at first use
    write_text_file(bad.path,
                    "{\"layers\":[{\"g\":[[1,0]],\"f\":[[1,0]]}],\"classifier\":[[1]]}\n");
    CHECK_THROWS_AS(read_model_json(bad.path), ValidationError);
}

TEST_CASE("model shape validation") {
    MpnnModel m;
    m.input_dim = 2;
    m.class_count = 2;
    MpnnLayer layer;
    layer.message = single(identity_matrix(2));
    layer.update = single(identity_matrix(3));  // expects 2 + 2 inputs
    m.layers.push_back(layer);
    m.classifier = single(identity_matrix(2));
    CHECK_THROWS_AS(validate_model(m), ContractError);

    MpnnModel ok;
    ok.input_dim = 2;
    ok.class_count = 2;
    ok.classifier = single(identity_matrix(2));
    Graph wrong;
    wrong.node_count = 1;
    wrong.features = {{1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(forward(ok, wrong), ContractError);

    Graph with_e;
    with_e.node_count = 2;
    with_e.features = {{1.0, 0.0}, {0.0, 1.0}};
    with_e.edges = {{0, 1}};
    with_e.edge_features = {{1.0}};
    CHECK_THROWS_AS(forward(ok, with_e), ContractError);
}

TEST_CASE("output differences stay under the distance bound") {
    CounterRng rng(36);
    for (int variant = 0; variant < 3; ++variant) {
        ZetaSpec z;
        int in_dim = 1;
        int edge_dim = 0;
        if (variant == 1) {
            z = ZetaSpec::parse("f-aug:mode=sub,lmax=4");
            in_dim = 3;
        } else if (variant == 2) {
            z = ZetaSpec::parse("k-tuple:k=2");
            in_dim = 10;
            edge_dim = 3;
        }
        for (int rep = 0; rep < 25; ++rep) {
            auto gr = rng.split(100 * variant + 2 * rep);
            auto mr = rng.split(100 * variant + 2 * rep + 1);
            const int T = 1 + static_cast<int>(mr.uniform_int(0, 2));
            std::vector<int> widths;
            for (int t = 0; t < T; ++t) widths.push_back(1 + static_cast<int>(mr.uniform_int(0, 7)));
            const MpnnModel m = random_model(mr.next_u64(), in_dim, edge_dim, 2, widths,
                                             1 + static_cast<int>(mr.uniform_int(0, 1)));
            const Graph g = random_graph(gr, 10, gr.uniform(0.15, 0.6), 1);
            const Graph h = random_graph(gr, 10, gr.uniform(0.15, 0.6), 1);
            const double diff = norm_diff(forward(m, simulate(g, z)), forward(m, simulate(h, z)));
            const double bound = lipschitz_bound(m) * zeta_tmd(g, h, z, T + 1, DepthWeights());
            CHECK(diff <= bound + 1e-9);
        }
    }
}
