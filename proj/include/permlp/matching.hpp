#pragma once
// Support tests and maximum-product perfect matchings. The matching is the
// sigma of the approximation guarantee: the permutation maximizing
// prod_i M_{i,sigma(i)}, found as a min-cost assignment on -log entries.
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "permlp/matrix.hpp"

namespace permlp {

// Entries below this are treated as structural zeros by the matching solver
// (-log stays comfortably finite above it).
inline constexpr double kStructuralZero = 1e-300;

namespace detail {

// Kuhn's augmenting-path bipartite matching on the positive-support graph.
struct KuhnMatcher {
    const NonnegMatrix& m;
    std::vector<int> col_to_row;
    std::vector<char> visited;

    explicit KuhnMatcher(const NonnegMatrix& mat)
        : m(mat), col_to_row(mat.n, -1), visited(mat.n, 0) {}

    bool augment(int i) {
        for (int j = 0; j < m.n; ++j) {
            if (m(i, j) <= 0.0 || visited[j]) continue;
            visited[j] = 1;
            if (col_to_row[j] < 0 || augment(col_to_row[j])) {
                col_to_row[j] = i;
                return true;
            }
        }
        return false;
    }

    int run() {
        int matched = 0;
        for (int i = 0; i < m.n; ++i) {
            std::fill(visited.begin(), visited.end(), 0);
            if (augment(i)) ++matched;
        }
        return matched;
    }
};

// Shortest-augmenting-path assignment with potentials, O(n^3), minimizing
// sum cost[i*n+j]. Deterministic: ties go to the smallest column index.
// Rows and columns are 1-based internally, slot 0 is the virtual source.
inline std::vector<int> assignment_min_cost(const std::vector<double>& cost, int n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[static_cast<size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
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
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

inline double assignment_total(const std::vector<double>& cost, int n,
                               const std::vector<int>& sigma) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += cost[static_cast<size_t>(i) * n + sigma[i]];
    return s;
}

} // namespace detail

// True iff per(M) can be nonzero: perfect matching on entries > 0.
inline bool support_has_perfect_matching(const NonnegMatrix& m) {
    detail::KuhnMatcher k(m);
    return k.run() == m.n;
}

struct MatchingResult {
    std::vector<int> sigma; // sigma[i] = column matched to row i (0-based)
    double log_product;     // sum of log M_{i,sigma(i)}; -inf if any factor is ~0
};

// Permutation maximizing the entry product. Structural zeros enter the
// assignment at a huge finite cost, so the solver returns a support-maximal
// permutation even when every full product vanishes (log_product = -inf then).
// Among optima the lexicographically smallest sigma is returned for n <= 32,
// by forcing rows to their smallest viable column and re-solving the rest.
inline MatchingResult max_product_matching(const NonnegMatrix& m) {
    const int n = m.n;
    const double big = 1e18;
    std::vector<double> cost(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cost[static_cast<size_t>(i) * n + j] =
                m(i, j) >= kStructuralZero ? -std::log(m(i, j)) : big;

    std::vector<int> sigma = detail::assignment_min_cost(cost, n);
    const double best = detail::assignment_total(cost, n, sigma);

    if (n >= 2 && n <= 32) {
        const double tie_tol = 1e-11 * std::max(1.0, std::fabs(best));
        std::vector<int> fixed(n, -1);
        std::vector<char> col_used(n, 0);
        double prefix = 0.0;
        for (int i = 0; i < n; ++i) {
            const int rem = n - i - 1;
            for (int j = 0; j < n; ++j) {
                if (col_used[j]) continue;
                const double edge = cost[static_cast<size_t>(i) * n + j];
                double completion = 0.0;
                if (rem > 0) {
                    std::vector<double> sub(static_cast<size_t>(rem) * rem);
                    std::vector<int> cols;
                    cols.reserve(rem);
                    for (int c = 0; c < n; ++c)
                        if (!col_used[c] && c != j) cols.push_back(c);
                    for (int r = 0; r < rem; ++r)
                        for (int c = 0; c < rem; ++c)
                            sub[static_cast<size_t>(r) * rem + c] =
                                cost[static_cast<size_t>(i + 1 + r) * n + cols[c]];
                    auto sub_sigma = detail::assignment_min_cost(sub, rem);
                    completion = detail::assignment_total(sub, rem, sub_sigma);
                }
                if (prefix + edge + completion <= best + tie_tol) {
                    fixed[i] = j;
                    col_used[j] = 1;
                    prefix += edge;
                    break;
                }
            }
        }
        sigma = fixed;
    }

    double log_product = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = m(i, sigma[i]);
        if (v < kStructuralZero) {
            log_product = -std::numeric_limits<double>::infinity();
            break;
        }
        log_product += std::log(v);
    }
    return {std::move(sigma), log_product};
}

} // namespace permlp
