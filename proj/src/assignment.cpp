#include "treemover/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treemover/errors.hpp"

namespace treemover {

namespace {

void check_input(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    for (const auto& row : cost) {
        if (row.size() != n) {
            throw ContractError("assignment cost matrix is not square");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw ContractError("assignment cost matrix has a non-finite entry");
            }
        }
    }
}

// Shortest augmenting path with dual potentials, one augmentation per row.
// Indices are shifted by one so column 0 can serve as the virtual source.
std::vector<int> optimal_columns(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

}  // namespace

Assignment solve_assignment(const std::vector<std::vector<double>>& cost) {
    check_input(cost);
    Assignment out;
    out.permutation = optimal_columns(cost);
    // Summing the selected entries in ascending order makes the total
    // independent of row labeling, so relabeled instances with the same
    // optimal cost multiset report bitwise-identical totals.
    std::vector<double> selected(cost.size());
    for (std::size_t i = 0; i < cost.size(); ++i) {
        selected[i] = cost[i][out.permutation[i]];
    }
    std::sort(selected.begin(), selected.end());
    for (double v : selected) out.total_cost += v;
    return out;
}

double assignment_cost(const std::vector<std::vector<double>>& cost) {
    return solve_assignment(cost).total_cost;
}

}  // namespace treemover
