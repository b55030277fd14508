#pragma once
// Exact permanents at desk scale: a permutation-sum reference for tiny n and
// Ryser's inclusion-exclusion with Gray-code updates up to n = 20.
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "permlp/errors.hpp"
#include "permlp/matrix.hpp"

namespace permlp {

inline constexpr int kNaiveMaxDim = 9;
inline constexpr int kRyserMaxDim = 20;

// Direct sum over all n! permutations. Reference implementation only.
inline double permanent_naive(const NonnegMatrix& m) {
    if (m.n > kNaiveMaxDim)
        throw DimensionError("permanent_naive supports n <= " + std::to_string(kNaiveMaxDim) +
                             ", got n = " + std::to_string(m.n));
    std::vector<int> perm(m.n);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    do {
        double prod = 1.0;
        for (int i = 0; i < m.n; ++i) prod *= m(i, perm[i]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

struct RyserResult {
    double value;
    double max_term;  // largest |term| seen, scale for the cancellation check
    bool clamped;     // true if a tiny negative total was clamped to 0
};

// Ryser's formula, per(A) = (-1)^n sum_{S != {}} (-1)^|S| prod_i sum_{j in S} a_ij,
// walked in Gray-code order so each subset update touches one column.
inline RyserResult permanent_ryser_detail(const NonnegMatrix& m) {
    const int n = m.n;
    if (n > kRyserMaxDim)
        throw DimensionError("permanent_ryser supports n <= " + std::to_string(kRyserMaxDim) +
                             ", got n = " + std::to_string(n));
    std::vector<double> row_sum(n, 0.0);
    double total = 0.0;
    double max_term = 0.0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::uint64_t gray_prev = 0;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ gray_prev;
        const int j = std::countr_zero(diff);
        const double sgn_col = (gray & diff) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) row_sum[i] += sgn_col * m(i, j);
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= row_sum[i];
        const int popcount = std::popcount(gray);
        const double term = ((n - popcount) % 2 == 0) ? prod : -prod;
        total += term;
        max_term = std::max(max_term, std::fabs(term));
        gray_prev = gray;
    }
    RyserResult r{total, max_term, false};
    if (total < 0.0) {
        // The permanent of a nonnegative matrix is nonnegative; a negative
        // total is pure cancellation noise. Clamp if it is small relative to
        // the largest term, otherwise refuse to report a value.
        if (std::fabs(total) <= 1e-9 * max_term) {
            r.value = 0.0;
            r.clamped = true;
        } else {
            throw NumericInstabilityError(
                "Ryser cancellation: total " + format_double(total) + " vs max term " +
                format_double(max_term));
        }
    }
    return r;
}

inline double permanent_ryser(const NonnegMatrix& m) { return permanent_ryser_detail(m).value; }

// Dispatcher: exact permutations for tiny n, Ryser above that.
inline double permanent(const NonnegMatrix& m) {
    if (m.n <= 6) return permanent_naive(m);
    return permanent_ryser(m);
}

// Permanent of the minor with row i and column j removed.
inline double permanent_minor(const NonnegMatrix& m, int i, int j) {
    if (m.n == 1) return 1.0; // empty product convention
    NonnegMatrix sub(m.n - 1, 0.0);
    int r = 0;
    for (int a = 0; a < m.n; ++a) {
        if (a == i) continue;
        int c = 0;
        for (int b = 0; b < m.n; ++b) {
            if (b == j) continue;
            sub(r, c) = m(a, b);
            ++c;
        }
        ++r;
    }
    return permanent(sub);
}

// Largest relative residual of the row expansion
// per(A) = sum_j a_ij per(A with row i, column j removed), over all rows.
inline double permanent_expansion_check(const NonnegMatrix& m) {
    const double full = permanent(m);
    const double scale = std::max(full, 1e-300);
    double worst = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) {
            if (m(i, j) == 0.0) continue;
            s += m(i, j) * permanent_minor(m, i, j);
        }
        worst = std::max(worst, std::fabs(s - full) / scale);
    }
    return worst;
}

} // namespace permlp
