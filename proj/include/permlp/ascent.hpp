#pragma once
// Baum-Eagon-style multiplicative ascent for Per(lambda^q) over row-stochastic
// matrices: lambda'_ij = lambda_ij^q * Per(minor_ij(lambda^q)) / Per(lambda^q).
// Rows of the update sum to 1 by the permanent row-expansion identity, and the
// value never decreases. Each step costs n^2 exact minor permanents, hence the
// tight dimension cap.
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "permlp/errors.hpp"
#include "permlp/matching.hpp"
#include "permlp/matrix.hpp"
#include "permlp/permanent.hpp"

namespace permlp {

inline constexpr int kAscentMaxDim = 14;

namespace detail {

inline void require_ascent_input(const NonnegMatrix& lam, double q) {
    if (lam.n > kAscentMaxDim)
        throw DimensionError("ascent supports n <= " + std::to_string(kAscentMaxDim) +
                             ", got n = " + std::to_string(lam.n));
    if (!(q > 0.0) || !(q <= 1.0)) throw std::domain_error("ascent requires q in (0,1]");
    if (!is_stochastic(lam, 1e-9))
        throw NotStochasticError("ascent input rows must sum to 1");
    if (!support_has_perfect_matching(lam))
        throw NoSupportError("Per(lambda^q) = 0: support has no perfect matching");
}

} // namespace detail

inline NonnegMatrix baum_eagon_step(const NonnegMatrix& lam, double q) {
    detail::require_ascent_input(lam, q);
    const NonnegMatrix a = elementwise_pow(lam, q);
    const double full = permanent(a);
    NonnegMatrix out(lam.n, 0.0);
    for (int i = 0; i < lam.n; ++i)
        for (int j = 0; j < lam.n; ++j)
            if (a(i, j) != 0.0) out(i, j) = a(i, j) * permanent_minor(a, i, j) / full;
    return out;
}

struct AscentTrace {
    std::vector<NonnegMatrix> iterates;
    std::vector<double> values; // Per(iterate^q), one per iterate
    double q;
    bool converged; // relative flatness reached before the iteration budget
};

inline AscentTrace baum_eagon_iterate(const NonnegMatrix& lam0, double q, int max_iters = 100,
                                      double stop_tol = 1e-12) {
    detail::require_ascent_input(lam0, q);
    if (max_iters < 0) throw std::domain_error("max_iters must be >= 0");
    if (!(stop_tol >= 0.0)) throw std::domain_error("stop_tol must be >= 0");

    AscentTrace trace;
    trace.q = q;
    trace.converged = false;
    trace.iterates.push_back(lam0);
    trace.values.push_back(permanent(elementwise_pow(lam0, q)));
    for (int t = 0; t < max_iters; ++t) {
        NonnegMatrix next = baum_eagon_step(trace.iterates.back(), q);
        const double value = permanent(elementwise_pow(next, q));
        const double prev = trace.values.back();
        trace.iterates.push_back(std::move(next));
        trace.values.push_back(value);
        if (std::fabs(value - prev) <= stop_tol * prev) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

} // namespace permlp
