// Compares the parallel pairwise distance kernel against the serial
// reference on a synthetic dataset and checks that both produce identical
// bytes. Usage: bench_dist [n_graphs] [max_nodes] [depth] [reps]
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "treemover/datagen.hpp"
#include "treemover/tmd.hpp"

using namespace treemover;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
    int n_graphs = 40;
    int max_nodes = 30;
    int depth = 3;
    int reps = 3;
    if (argc > 1) n_graphs = std::atoi(argv[1]);
    if (argc > 2) max_nodes = std::atoi(argv[2]);
    if (argc > 3) depth = std::atoi(argv[3]);
    if (argc > 4) reps = std::atoi(argv[4]);
    if (n_graphs < 2 || max_nodes < 2 || depth < 1 || reps < 1) {
        std::fprintf(stderr, "usage: bench_dist [n_graphs>=2] [max_nodes>=2] [depth>=1] [reps>=1]\n");
        return 2;
    }

    GenSpec spec;
    spec.model = GenSpec::Model::er;
    spec.er_p = 0.15;
    spec.nodes = {max_nodes / 2 < 2 ? 2 : max_nodes / 2, max_nodes};
    spec.n_graphs = n_graphs;
    spec.seed = 12345;
    const GraphDataset ds = generate(spec);
    const DepthWeights w = DepthWeights::constant(1.0);

    std::printf("pairwise distances: %d graphs, nodes %d..%d, depth %d, %d reps, %d threads\n",
                n_graphs, spec.nodes.first, spec.nodes.second, depth, reps,
                omp_get_max_threads());

    double best_serial = 1e300, best_parallel = 1e300;
    DistanceMatrix serial_out, parallel_out;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        serial_out = pairwise_tmd_serial(ds.graphs, depth, w);
        auto t1 = Clock::now();
        parallel_out = pairwise_tmd(ds.graphs, depth, w);
        auto t2 = Clock::now();
        const double s = std::chrono::duration<double>(t1 - t0).count();
        const double p = std::chrono::duration<double>(t2 - t1).count();
        if (s < best_serial) best_serial = s;
        if (p < best_parallel) best_parallel = p;
        std::printf("  rep %d: serial %.3fs  parallel %.3fs\n", r, s, p);
    }

    bool identical = serial_out.values.size() == parallel_out.values.size();
    for (std::size_t i = 0; identical && i < serial_out.values.size(); ++i) {
        identical = std::memcmp(serial_out.values[i].data(), parallel_out.values[i].data(),
                                serial_out.values[i].size() * sizeof(double)) == 0;
    }

    std::printf("best: serial %.3fs  parallel %.3fs  speedup %.2fx  outputs %s\n", best_serial,
                best_parallel, best_serial / best_parallel,
                identical ? "identical" : "DIFFER");
    return identical ? 0 : 1;
}
