// Command-line front end: every pipeline stage as one subcommand.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 invalid data or
// parameters, 4 exceeded resource budget. All file outputs are deterministic
// byte for byte; logs go to stderr so stdout stays machine-readable.
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treemover/bound.hpp"
#include "treemover/datagen.hpp"
#include "treemover/errors.hpp"
#include "treemover/graph.hpp"
#include "treemover/io.hpp"
#include "treemover/mpnn.hpp"
#include "treemover/tmd.hpp"
#include "treemover/transforms.hpp"
#include "treemover/wl.hpp"

namespace {

constexpr const char* kVersion = "tmd 0.1.0";

using treemover::ContractError;
using treemover::DepthWeights;
using treemover::Graph;
using treemover::GraphDataset;
using treemover::ValidationError;
using treemover::ZetaSpec;

// JSON configuration: top-level keys mirror global flags, per-subcommand
// objects mirror that subcommand's flags, e.g.
// {"threads": 2, "dist": {"depth": 3, "weight": "const:1.0"}}.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(input);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("config file: ") + e.what());
        }
        if (!doc.is_object()) throw ValidationError("config file: top level must be an object");
        std::vector<CLI::ConfigItem> items;
        collect(doc, {}, items);
        return items;
    }

  private:
    static std::string scalar_text(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw ValidationError("config file: values must be scalars, arrays, or objects");
    }

    static void collect(const nlohmann::json& obj, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : obj.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                collect(value, deeper, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& entry : value) item.inputs.push_back(scalar_text(entry));
            } else {
                item.inputs.push_back(scalar_text(value));
            }
            items.push_back(std::move(item));
        }
    }
};

struct GlobalFlags {
    int threads = 0;  // 0 = runtime default
    bool quiet = false;

    void apply() const {
        if (threads > 0) omp_set_num_threads(threads);
    }

    void log(const std::string& line) const {
        if (!quiet) std::cerr << line << "\n";
    }
};

std::pair<int, int> parse_node_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("node range must be <lo>:<hi>, got \"" + text + "\"");
    }
    try {
        std::size_t used = 0;
        const int lo = std::stoi(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("");
        const std::string hi_text = text.substr(colon + 1);
        const int hi = std::stoi(hi_text, &used);
        if (used != hi_text.size()) throw std::invalid_argument("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw ValidationError("node range must be <lo>:<hi>, got \"" + text + "\"");
    }
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string part =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(part, &used));
            if (used != part.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ValidationError(what + ": bad integer \"" + part + "\"");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// "const:<real>" or "levels:<w2>,<w3>,..." (entry i applies to level i+2,
// the last entry repeats for deeper levels).
DepthWeights parse_weights(const std::string& text) {
    if (text.rfind("const:", 0) == 0) {
        const std::string value = text.substr(6);
        try {
            std::size_t used = 0;
            const double c = std::stod(value, &used);
            if (used != value.size() || !std::isfinite(c)) throw std::invalid_argument("");
            return DepthWeights::constant(c);
        } catch (const std::exception&) {
            throw ValidationError("depth weight: bad real \"" + value + "\"");
        }
    }
    if (text.rfind("levels:", 0) == 0) {
        std::vector<double> values;
        const std::string rest = text.substr(7);
        std::size_t start = 0;
        while (start <= rest.size()) {
            const auto comma = rest.find(',', start);
            const std::string part =
                rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            try {
                std::size_t used = 0;
                values.push_back(std::stod(part, &used));
                if (used != part.size() || !std::isfinite(values.back())) {
                    throw std::invalid_argument("");
                }
            } catch (const std::exception&) {
                throw ValidationError("depth weight: bad real \"" + part + "\"");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (values.empty()) throw ValidationError("depth weight: levels list is empty");
        return DepthWeights::per_level(values);
    }
    throw ValidationError("depth weight must be const:<real> or levels:<w,...>, got \"" + text +
                          "\"");
}

GraphDataset load_dataset(const std::string& path) {
    return treemover::parse_dataset(path, treemover::dataset_format_for_path(path));
}

void save_dataset(const GraphDataset& ds, const std::string& path) {
    treemover::serialize_dataset(ds, path, treemover::dataset_format_for_path(path));
}

Graph load_single_graph(const std::string& path) {
    const GraphDataset ds = load_dataset(path);
    if (ds.graphs.size() != 1) {
        throw ValidationError(path + ": expected exactly one graph, found " +
                              std::to_string(ds.graphs.size()));
    }
    return ds.graphs[0];
}

std::vector<bool> to_flags(const std::vector<double>& values, const std::string& what) {
    std::vector<bool> flags;
    flags.reserve(values.size());
    for (double v : values) {
        if (v != 0.0 && v != 1.0) {
            throw ValidationError(what + ": entries must be 0 or 1, got " +
                                  treemover::format_real(v));
        }
        flags.push_back(v == 1.0);
    }
    return flags;
}

struct GenArgs {
    std::string model;
    std::string nodes = "35:55";
    int count = 1;
    std::uint64_t seed = 0;
    std::string out;
};

struct LabelArgs {
    std::string task = "cycle-median";
    std::string mode = "sub";
    std::string lengths = "3,4";
    std::string input;
    std::string out;
};

struct SplitArgs {
    std::uint64_t seed = 0;
    double frac = 0.8;
    std::string input;
    std::string train_out;
    std::string test_out;
};

struct TransformArgs {
    std::string zeta;
    long long budget = 0;  // 0 = keep the spec default
    std::string input;
    std::string out;
};

struct WlArgs {
    int iters = 0;
    std::string first;
    std::string second;
};

struct DistArgs {
    int depth = 0;
    std::string weight = "const:1.0";
    std::string zeta;
    long long budget = 0;
    bool serial = false;
    std::string input;
    std::string out;
};

struct XiArgs {
    std::string train;
    std::string test;
    int depth = 0;
    std::string weight = "const:1.0";
    std::string zeta;
    long long budget = 0;
    std::string out;
};

struct MpnnArgs {
    std::string weights;
    std::string graphs;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string arch;
    int input_dim = 1;
    int edge_dim = 0;
    int classes = 2;
    int mlp_depth = 2;
};

struct BoundArgs {
    std::string params;
    std::string dist_file;
    std::string out;
};

struct CumaccArgs {
    std::string dist;
    std::string correct;
    std::string out;
};

ZetaSpec zeta_from(const std::string& text, long long budget) {
    ZetaSpec zeta = ZetaSpec::parse(text);
    if (budget > 0) zeta.node_budget = budget;
    return zeta;
}

GraphDataset transform_dataset(const GraphDataset& ds, const ZetaSpec& zeta) {
    GraphDataset out;
    out.labels = ds.labels;
    out.classes = ds.classes;
    out.graphs.resize(ds.graphs.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(ds.graphs.size()); ++i) {
        try {
            out.graphs[static_cast<std::size_t>(i)] =
                treemover::simulate(ds.graphs[static_cast<std::size_t>(i)], zeta);
        } catch (...) {
#pragma omp critical
            {
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

void run_gen(const GlobalFlags& globals, const GenArgs& args) {
    treemover::GenSpec spec = treemover::GenSpec::parse_model(args.model);
    spec.nodes = parse_node_range(args.nodes);
    spec.n_graphs = args.count;
    spec.seed = args.seed;
    const GraphDataset ds = treemover::generate(spec);
    save_dataset(ds, args.out);
    globals.log("gen: wrote " + std::to_string(ds.graphs.size()) + " graphs to " + args.out);
}

void run_label(const GlobalFlags& globals, const LabelArgs& args) {
    if (args.task != "cycle-median") {
        throw ValidationError("unknown labeling task \"" + args.task +
                              "\" (only cycle-median is available)");
    }
    treemover::LabelSpec spec;
    spec.mode = treemover::parse_count_mode(args.mode);
    spec.lengths = parse_int_list(args.lengths, "cycle lengths");
    const GraphDataset labeled = treemover::label_cycle_median(load_dataset(args.input), spec);
    save_dataset(labeled, args.out);
    const auto ones = std::count(labeled.labels.begin(), labeled.labels.end(), 1);
    globals.log("label: " + std::to_string(labeled.labels.size()) + " graphs, " +
                std::to_string(ones) + " with label 1, wrote " + args.out);
}

void run_split(const GlobalFlags& globals, const SplitArgs& args) {
    const auto [train, test] = treemover::split_dataset(load_dataset(args.input), args.seed,
                                                        args.frac);
    save_dataset(train, args.train_out);
    save_dataset(test, args.test_out);
    globals.log("split: " + std::to_string(train.graphs.size()) + " train / " +
                std::to_string(test.graphs.size()) + " test");
}

void run_transform(const GlobalFlags& globals, const TransformArgs& args) {
    const ZetaSpec zeta = zeta_from(args.zeta, args.budget);
    const GraphDataset out = transform_dataset(load_dataset(args.input), zeta);
    save_dataset(out, args.out);
    globals.log("transform: " + zeta.to_string() + " applied to " +
                std::to_string(out.graphs.size()) + " graphs, wrote " + args.out);
}

void run_wl(const GlobalFlags&, const WlArgs& args) {
    const Graph g = load_single_graph(args.first);
    const Graph h = load_single_graph(args.second);
    const auto t = treemover::wl_distinguishes(g, h, args.iters);
    if (t) {
        std::cout << *t << "\n";
    } else {
        std::cout << "indistinguishable\n";
    }
}

void run_dist(const GlobalFlags& globals, const DistArgs& args) {
    const GraphDataset ds = load_dataset(args.input);
    const DepthWeights w = parse_weights(args.weight);
    treemover::DistanceMatrix dm;
    if (!args.zeta.empty()) {
        dm = treemover::pairwise_tmd(ds.graphs, args.depth, w, zeta_from(args.zeta, args.budget));
    } else if (args.serial) {
        dm = treemover::pairwise_tmd_serial(ds.graphs, args.depth, w);
    } else {
        dm = treemover::pairwise_tmd(ds.graphs, args.depth, w);
    }
    treemover::write_matrix_csv(args.out, dm.values);
    globals.log("dist: " + std::to_string(ds.graphs.size()) + "x" +
                std::to_string(ds.graphs.size()) + " matrix at depth " +
                std::to_string(args.depth) + ", wrote " + args.out);
}

void run_xi(const GlobalFlags& globals, const XiArgs& args) {
    const GraphDataset train = load_dataset(args.train);
    const GraphDataset test = load_dataset(args.test);
    const DepthWeights w = parse_weights(args.weight);
    std::vector<std::vector<double>> cross;
    if (!args.zeta.empty()) {
        cross = treemover::cross_tmd(test.graphs, train.graphs, args.depth, w,
                                     zeta_from(args.zeta, args.budget));
    } else {
        cross = treemover::cross_tmd(test.graphs, train.graphs, args.depth, w);
    }
    const treemover::SetDistance sd = treemover::set_distance(cross);
    if (!args.out.empty()) {
        treemover::write_column_csv(args.out, "min_dist", sd.minima);
        globals.log("xi: wrote per-test minima to " + args.out);
    }
    std::cout << treemover::format_real(sd.xi) << "\n";
}

void run_mpnn(const GlobalFlags& globals, const MpnnArgs& args) {
    if (args.weights.empty() == args.arch.empty()) {
        throw ValidationError("mpnn needs exactly one of --weights (evaluate) or --arch (generate)");
    }
    if (!args.arch.empty()) {
        if (!args.seed_given) throw ValidationError("generating weights requires --seed");
        const std::vector<int> arch = parse_int_list(args.arch, "arch");
        if (arch.empty() || arch[0] < 0 ||
            static_cast<std::size_t>(arch[0]) + 1 != arch.size()) {
            throw ValidationError(
                "arch must be T,width_1,...,width_T (one width per message-passing round)");
        }
        const std::vector<int> widths(arch.begin() + 1, arch.end());
        const treemover::MpnnModel m = treemover::random_model(
            args.seed, args.input_dim, args.edge_dim, args.classes, widths, args.mlp_depth);
        treemover::write_model_json(m, args.out);
        globals.log("mpnn: generated " + std::to_string(widths.size()) + "-round model, wrote " +
                    args.out);
        return;
    }
    const treemover::MpnnModel m = treemover::read_model_json(args.weights);
    const GraphDataset ds = load_dataset(args.graphs);
    const auto logits = treemover::forward_all(m, ds.graphs);
    std::vector<std::string> header;
    for (int k = 0; k < m.class_count; ++k) header.push_back("logit_" + std::to_string(k));
    treemover::write_csv(args.out, header, logits);
    globals.log("mpnn: " + std::to_string(logits.size()) + " graphs through " +
                std::to_string(m.layers.size()) + " rounds, wrote " + args.out);
}

void run_bound(const GlobalFlags& globals, const BoundArgs& args) {
    const treemover::BoundParams p = treemover::read_bound_params(args.params);
    std::vector<double> minima;
    if (!args.dist_file.empty()) {
        minima = treemover::read_column_csv(args.dist_file);
        std::sort(minima.begin(), minima.end());
    } else {
        minima.push_back(p.xi);
    }
    const std::vector<double> curve = treemover::bound_curve(minima, p);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < curve.size(); ++i) rows.push_back({minima[i], curve[i]});
    treemover::write_csv(args.out, {"min_dist", "bound"}, rows);
    globals.log("bound: " + std::to_string(curve.size()) + " curve points, wrote " + args.out);
}

void run_cumacc(const GlobalFlags& globals, const CumaccArgs& args) {
    const std::vector<double> distances = treemover::read_column_csv(args.dist);
    const std::vector<bool> correct =
        to_flags(treemover::read_column_csv(args.correct), "correctness flags");
    const std::vector<double> acc = treemover::cumulative_accuracy(distances, correct);
    std::vector<double> sorted = distances;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < acc.size(); ++i) rows.push_back({sorted[i], acc[i]});
    treemover::write_csv(args.out, {"distance", "cum_accuracy"}, rows);
    globals.log("cumacc: " + std::to_string(acc.size()) + " points, wrote " + args.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree mover's distances, graph transforms, and generalization bounds"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);
    app.set_config("--config")->description("JSON file whose keys mirror flags");
    app.config_formatter(std::make_shared<JsonConfig>());
    app.allow_config_extras(false);

    GlobalFlags globals;
    app.add_option("--threads", globals.threads, "worker threads (0 = all available)");
    app.add_flag("--quiet", globals.quiet, "suppress progress logs");

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a random graph dataset");
    gen->fallthrough();
    gen->add_option("--model", gen_args.model,
                    "er:p=<real> | ba:m=<int> | sbm:blocks=lo:hi,p_in=lo:hi,p_out=lo:hi")
        ->required();
    gen->add_option("--nodes", gen_args.nodes, "node count range lo:hi")->capture_default_str();
    gen->add_option("--count", gen_args.count, "number of graphs")->capture_default_str();
    gen->add_option("--seed", gen_args.seed, "generation seed")->required();
    gen->add_option("--out", gen_args.out, "output dataset path")->required();
    gen->callback([&] {
        globals.apply();
        run_gen(globals, gen_args);
    });

    LabelArgs label_args;
    auto* label = app.add_subcommand("label", "attach median-split cycle-count labels");
    label->fallthrough();
    label->add_option("--task", label_args.task, "labeling task")->capture_default_str();
    label->add_option("--mode", label_args.mode, "count mode: hom | sub | basis")->capture_default_str();
    label->add_option("--lengths", label_args.lengths, "cycle lengths, comma separated")->capture_default_str();
    label->add_option("input", label_args.input, "input dataset")->required();
    label->add_option("--out", label_args.out, "output dataset path")->required();
    label->callback([&] {
        globals.apply();
        run_label(globals, label_args);
    });

    SplitArgs split_args;
    auto* split = app.add_subcommand("split", "shuffle and split a dataset");
    split->fallthrough();
    split->add_option("--seed", split_args.seed, "shuffle seed")->required();
    split->add_option("--frac", split_args.frac, "train fraction in [0,1]")->required();
    split->add_option("input", split_args.input, "input dataset")->required();
    split->add_option("--train-out", split_args.train_out, "train output path")->required();
    split->add_option("--test-out", split_args.test_out, "test output path")->required();
    split->callback([&] {
        globals.apply();
        run_split(globals, split_args);
    });

    TransformArgs transform_args;
    auto* transform = app.add_subcommand("transform", "apply a graph transform to a dataset");
    transform->fallthrough();
    transform->add_option("--zeta", transform_args.zeta,
                          "identity | f-aug:mode=<hom|sub|basis>,lmax=<L> | "
                          "k-tuple:k=<k>,locality=<global|local>")
        ->required();
    transform->add_option("--budget", transform_args.budget, "node budget for k-tuple");
    transform->add_option("input", transform_args.input, "input dataset")->required();
    transform->add_option("--out", transform_args.out, "output dataset path")->required();
    transform->callback([&] {
        globals.apply();
        run_transform(globals, transform_args);
    });

    WlArgs wl_args;
    auto* wl = app.add_subcommand("wl", "color-refinement distinguishability of two graphs");
    wl->fallthrough();
    wl->add_option("--iters", wl_args.iters, "maximum refinement iterations")->required();
    wl->add_option("first", wl_args.first, "first graph file")->required();
    wl->add_option("second", wl_args.second, "second graph file")->required();
    wl->callback([&] {
        globals.apply();
        run_wl(globals, wl_args);
    });

    DistArgs dist_args;
    auto* dist = app.add_subcommand("dist", "pairwise distance matrix over a dataset");
    dist->fallthrough();
    dist->add_option("--depth", dist_args.depth, "computation-tree depth T >= 1")->required();
    dist->add_option("--weight", dist_args.weight, "const:<real> | levels:<w,...>")->capture_default_str();
    dist->add_option("--zeta", dist_args.zeta, "transform applied before the distance");
    dist->add_option("--budget", dist_args.budget, "node budget for k-tuple");
    dist->add_flag("--serial", dist_args.serial,
                   "use the single-threaded path (plain distance only)");
    dist->add_option("input", dist_args.input, "input dataset")->required();
    dist->add_option("--out", dist_args.out, "output matrix CSV")->required();
    dist->callback([&] {
        globals.apply();
        run_dist(globals, dist_args);
    });

    XiArgs xi_args;
    auto* xi = app.add_subcommand("xi", "train/test set distance (max over test of min over train)");
    xi->fallthrough();
    xi->add_option("--train", xi_args.train, "train dataset")->required();
    xi->add_option("--test", xi_args.test, "test dataset")->required();
    xi->add_option("--depth", xi_args.depth, "computation-tree depth T >= 1")->required();
    xi->add_option("--weight", xi_args.weight, "const:<real> | levels:<w,...>")->capture_default_str();
    xi->add_option("--zeta", xi_args.zeta, "transform applied before the distance");
    xi->add_option("--budget", xi_args.budget, "node budget for k-tuple");
    xi->add_option("--out", xi_args.out, "optional per-test minima CSV");
    xi->callback([&] {
        globals.apply();
        run_xi(globals, xi_args);
    });

    MpnnArgs mpnn_args;
    auto* mpnn = app.add_subcommand("mpnn", "evaluate or generate message-passing models");
    mpnn->fallthrough();
    mpnn->add_option("--weights", mpnn_args.weights, "model weight JSON (evaluate mode)");
    mpnn->add_option("--graphs", mpnn_args.graphs, "dataset to push through the model");
    auto* mpnn_seed = mpnn->add_option("--seed", mpnn_args.seed, "weight generation seed");
    mpnn->add_option("--arch", mpnn_args.arch, "T,width_1,...,width_T (generate mode)");
    mpnn->add_option("--input-dim", mpnn_args.input_dim, "node feature dimension")->capture_default_str();
    mpnn->add_option("--edge-dim", mpnn_args.edge_dim, "edge feature dimension")->capture_default_str();
    mpnn->add_option("--classes", mpnn_args.classes, "number of output classes")->capture_default_str();
    mpnn->add_option("--mlp-depth", mpnn_args.mlp_depth, "matrices per MLP")->capture_default_str();
    mpnn->add_option("--out", mpnn_args.out, "output path (logits CSV or weight JSON)")
        ->required();
    mpnn->callback([&] {
        globals.apply();
        mpnn_args.seed_given = mpnn_seed->count() > 0;
        run_mpnn(globals, mpnn_args);
    });

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "generalization bound curve from parameters");
    bound->fallthrough();
    bound->add_option("--params", bound_args.params, "bound parameter JSON")->required();
    bound->add_option("--dist-file", bound_args.dist_file, "per-test minima CSV");
    bound->add_option("--out", bound_args.out, "output curve CSV")->required();
    bound->callback([&] {
        globals.apply();
        run_bound(globals, bound_args);
    });

    CumaccArgs cumacc_args;
    auto* cumacc = app.add_subcommand("cumacc", "cumulative accuracy ordered by distance");
    cumacc->fallthrough();
    cumacc->add_option("--dist", cumacc_args.dist, "per-test distance CSV")->required();
    cumacc->add_option("--correct", cumacc_args.correct, "0/1 correctness CSV")->required();
    cumacc->add_option("--out", cumacc_args.out, "output CSV")->required();
    cumacc->callback([&] {
        globals.apply();
        run_cumacc(globals, cumacc_args);
    });

    try {
        app.parse(argc, argv);
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CLI::ConfigError& e) {
        std::string msg = e.what();
        const std::string generic = "INI was not able to parse ";
        if (msg.rfind(generic, 0) == 0) {
            msg = "config file: unknown key \"" + msg.substr(generic.size()) + "\"";
        }
        std::cerr << "error: " << msg << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 2;
    } catch (const treemover::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const treemover::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
