#pragma once
// Deterministic permanent approximation with a certified interval:
// support check -> Sinkhorn scaling -> max-product matching -> case split on
// the matched product pi against 2^{-n}. For doubly stochastic B,
//   pi >= 2^{-n}:  per(B) in [max(pi, n!/n^n), 1]
//   pi <  2^{-n}:  per(B) in [max(pi, n!/n^n), 2^{(q0-1)n}],  q0 = 1/p_0(n),
// and the general case unscales by the Sinkhorn factorization, widening the
// interval by e^{+-n*residual} to absorb the finite scaling accuracy.
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "permlp/bounds.hpp"
#include "permlp/errors.hpp"
#include "permlp/matching.hpp"
#include "permlp/matrix.hpp"
#include "permlp/sinkhorn.hpp"

namespace permlp {

enum class ApproxCase { zero, large_matching, small_matching };

inline const char* to_string(ApproxCase c) {
    switch (c) {
        case ApproxCase::zero: return "zero";
        case ApproxCase::large_matching: return "large_matching";
        default: return "small_matching";
    }
}

struct ApproxResult {
    double lo = 0.0;
    double hi = 0.0;
    double estimate = 0.0;         // geometric mean of the interval
    double guarantee_factor = 1.0; // hi / lo
    double log_lo = 0.0;           // authoritative log-domain interval
    double log_hi = 0.0;
    ApproxCase kind = ApproxCase::zero;
    MatchingResult matching;               // certificate sigma and its log product
    std::optional<ScalingResult> scaling;  // absent on the doubly stochastic entry point
    double residual = 0.0;                 // scaling residual folded into the interval
    bool below_asymptotic_n = false;       // n < 5: bounds valid, asymptotic claim not sharp
};

namespace detail {

inline void finalize_interval(ApproxResult& r) {
    r.lo = std::exp(r.log_lo);
    r.hi = std::exp(r.log_hi);
    r.estimate = std::exp(0.5 * (r.log_lo + r.log_hi));
    r.guarantee_factor = std::exp(r.log_hi - r.log_lo);
}

inline ApproxResult zero_result(MatchingResult mr, int n) {
    ApproxResult r;
    const double ninf = -std::numeric_limits<double>::infinity();
    r.log_lo = ninf;
    r.log_hi = ninf;
    r.kind = ApproxCase::zero;
    r.matching = std::move(mr);
    r.below_asymptotic_n = n < 5;
    return r; // lo = hi = estimate = 0, guarantee_factor = 1
}

} // namespace detail

inline ApproxResult approximate_permanent_ds(const NonnegMatrix& b, double ds_tol = 1e-6) {
    if (!is_doubly_stochastic(b, ds_tol))
        throw NotStochasticError("approximate_permanent_ds needs a doubly stochastic matrix "
                                 "(tolerance " + format_double(ds_tol) + ")");
    if (!support_has_perfect_matching(b))
        return detail::zero_result(max_product_matching(b), b.n);

    const int n = b.n;
    ApproxResult r;
    r.matching = max_product_matching(b);
    r.below_asymptotic_n = n < 5;
    const double log_pi = r.matching.log_product;
    if (log_pi >= -n * std::log(2.0)) {
        r.kind = ApproxCase::large_matching;
        r.log_hi = 0.0;
    } else {
        r.kind = ApproxCase::small_matching;
        const double q0 = 1.0 / p_zero(n); // unreachable at n = 1: pi is then >= 1 - tol
        r.log_hi = std::min(0.0, (q0 - 1.0) * n * std::log(2.0));
    }
    // pi can poke above hi by the stochasticity tolerance; keep the interval ordered
    r.log_lo = std::min(std::max(log_pi, vdw_lower_log(n)), r.log_hi);
    detail::finalize_interval(r);
    return r;
}

inline ApproxResult approximate_permanent(const NonnegMatrix& m, double scale_tol = 1e-8,
                                          int scale_max_iters = 100000) {
    if (!support_has_perfect_matching(m))
        return detail::zero_result(max_product_matching(m), m.n);

    ScalingResult sc = sinkhorn_scale(m, scale_tol, scale_max_iters);
    if (!sc.converged)
        throw NonConvergenceError("Sinkhorn stalled at residual " + format_double(sc.residual) +
                                  " after " + std::to_string(sc.iterations) +
                                  " iterations (target " + format_double(scale_tol) + ")");

    ApproxResult r = approximate_permanent_ds(sc.scaled);
    // per(M) = e^{-log_scale_product} per(scaled); widen by the scaling slack
    r.log_lo += -sc.log_scale_product - m.n * sc.residual;
    r.log_hi += -sc.log_scale_product + m.n * sc.residual;
    detail::finalize_interval(r);
    r.residual = sc.residual;
    r.scaling = std::move(sc);
    return r;
}

struct GuaranteeRow {
    int n;
    double q0;              // 1/p_0(n)
    double log_factor;      // log of the worst-case certified ratio hi/lo
    double factor;          // may overflow to inf; log_factor stays finite
    double log_improvement; // log of (n^n/n!) / factor
    double improvement;
};

// Worst-case guarantee per dimension: the larger of the two case factors,
// 2^n (large matching) and (n^n/n!) 2^{(q0-1)n} (small matching), compared
// against the bare van der Waerden ratio n^n/n!.
inline std::vector<GuaranteeRow> guarantee_curve(int n_from, int n_to) {
    if (n_from < 2) throw std::domain_error("guarantee_curve requires n_from >= 2");
    if (n_to < n_from) throw std::domain_error("guarantee_curve requires n_to >= n_from");
    std::vector<GuaranteeRow> rows;
    rows.reserve(n_to - n_from + 1);
    const double ln2 = std::log(2.0);
    for (int n = n_from; n <= n_to; ++n) {
        const double q0 = 1.0 / p_zero(n);
        const double bare = n * std::log(static_cast<double>(n)) - log_factorial(n);
        const double large = n * ln2;
        const double small = bare + (q0 - 1.0) * n * ln2;
        GuaranteeRow row;
        row.n = n;
        row.q0 = q0;
        row.log_factor = std::max(large, small);
        row.factor = std::exp(row.log_factor);
        row.log_improvement = bare - row.log_factor;
        row.improvement = std::exp(row.log_improvement);
        rows.push_back(row);
    }
    return rows;
}

} // namespace permlp
