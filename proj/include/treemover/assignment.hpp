// Exact minimum-cost perfect assignment between two equal-size sets.
#pragma once

#include <vector>

namespace treemover {

struct Assignment {
    std::vector<int> permutation;  // row i is matched to column permutation[i]
    double total_cost = 0.0;
};

// Globally optimal assignment for a square, finite, nonnegative cost matrix.
// O(n^3) shortest augmenting path with potentials; deterministic. The
// returned cost is recomputed from the selected entries (summed in ascending
// order, for label-independent totals), so a zero-diagonal matrix reports a
// cost of exactly 0. Throws ContractError on non-square or non-finite input.
Assignment solve_assignment(const std::vector<std::vector<double>>& cost);

// Cost only, skipping construction of the permutation vector.
double assignment_cost(const std::vector<std::vector<double>>& cost);

}  // namespace treemover
