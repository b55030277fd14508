#pragma once
// Closed-form quantities for unit-lp-row permanent bounds: critical exponents,
// theta, w, the product and closed-form upper bounds, the classical lower
// bounds, and the phi transform. Everything is accumulated in log domain and
// exponentiated at the boundary, since n!/n^{n/p} leaves binary64 range fast.
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "permlp/errors.hpp"
#include "permlp/matrix.hpp"
#include "permlp/permanent.hpp"

namespace permlp {

inline double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial requires n >= 0");
    return std::lgamma(n + 1.0);
}

// Critical exponent p_c = n ln n / ln n!. Above it even the uniform matrix
// beats the identity; equals 2 at n = 2 and decreases toward 1.
inline double p_critical(int n) {
    if (n < 2) throw std::domain_error("p_critical requires n >= 2");
    return n * std::log(static_cast<double>(n)) / log_factorial(n);
}

// Lower critical exponent p_0 = (n ln n - (n-1) ln(n-1)) / ln n. Below it the
// identity matrix is provably optimal. Strictly decreasing in n.
inline double p_zero(int n) {
    if (n < 2) throw std::domain_error("p_zero requires n >= 2");
    const double ln_n = std::log(static_cast<double>(n));
    return (n * ln_n - (n - 1) * std::log(static_cast<double>(n - 1))) / ln_n;
}

// Same formulas parameterized by the row-sparsity r of the generalized
// conjecture; kept as named aliases so call sites read like the statements.
inline double p_critical_r(int r) { return p_critical(r); }
inline double p_zero_r(int r) { return p_zero(r); }

// theta(k, q) = k ((k-1)^(k-1) / k^k)^q, with theta(1, q) = 1.
inline double theta_log(int k, double q) {
    if (k < 1) throw std::domain_error("theta requires k >= 1");
    if (!(q > 0.0) || !(q <= 1.0)) throw std::domain_error("theta requires q in (0,1]");
    if (k == 1) return 0.0;
    const double kd = k;
    return std::log(kd) + q * ((kd - 1.0) * std::log(kd - 1.0) - kd * std::log(kd));
}

inline double theta(int k, double q) { return std::exp(theta_log(k, q)); }

// Real-argument extension (x-1)^(x-1)/x^x, continuous at x = 1 via 0^0 = 1.
inline double theta_continuous(double x, double q) {
    if (!(x >= 1.0)) throw std::domain_error("theta_continuous requires x >= 1");
    if (!(q > 0.0) || !(q <= 1.0)) throw std::domain_error("theta requires q in (0,1]");
    const double t = (x == 1.0) ? 0.0 : (x - 1.0) * std::log(x - 1.0);
    return std::exp(std::log(x) + q * (t - x * std::log(x)));
}

namespace detail {

inline void require_open_12(double p, const char* who) {
    if (!(p > 1.0) || !(p < 2.0))
        throw std::domain_error(std::string(who) + " requires p in (1,2)");
}

} // namespace detail

// w(k, p) = max{1, theta(k, 1/p)}. The branch is decided by comparing p with
// p_zero(k) rather than theta with 1: the two are equivalent in exact arithmetic, but
// theta_log lands within an ulp of 0 near the crossing and its sign there is
// noise, while the exponent comparison is stable.
inline double w_closed_form(int k, double p) {
    detail::require_open_12(p, "w_closed_form");
    if (k < 1) throw std::domain_error("w_closed_form requires k >= 1");
    if (k == 1 || !(p > p_zero(k))) return 1.0;
    return std::max(1.0, theta(k, 1.0 / p));
}

// max{1, n!/n^(n/p)}: the trivial lower bound for U(n,p).
inline double u_lower_log(int n, double p) {
    if (n < 1) throw std::domain_error("u_lower requires n >= 1");
    if (!(p >= 1.0)) throw std::domain_error("u_lower requires p >= 1");
    return std::max(0.0, log_factorial(n) - (n / p) * std::log(static_cast<double>(n)));
}

inline double u_lower(int n, double p) { return std::exp(u_lower_log(n, p)); }

// prod_{k=1}^n w(k,p) as a sum of clamped logs. Every included term is
// nonnegative, so the product is exactly 1 whenever p <= p_zero(n).
inline double u_upper_product_log(int n, double p) {
    if (n < 1) throw std::domain_error("u_upper_product requires n >= 1");
    detail::require_open_12(p, "u_upper_product");
    double s = 0.0;
    for (int k = 2; k <= n; ++k)
        if (p > p_zero(k)) s += std::max(0.0, theta_log(k, 1.0 / p));
    return s;
}

inline double u_upper_product(int n, double p) { return std::exp(u_upper_product_log(n, p)); }

struct ClosedFormBound {
    double value;
    double log_value;
    bool within_theorem_range; // p >= p_zero(n); below it the formula is extrapolation
};

// exp{(p-1)/p * e^(1/(p-1))} * n!/n^(n/p).
inline ClosedFormBound u_upper_closed(int n, double p) {
    if (n < 1) throw std::domain_error("u_upper_closed requires n >= 1");
    detail::require_open_12(p, "u_upper_closed");
    const double log_value = (p - 1.0) / p * std::exp(1.0 / (p - 1.0)) + log_factorial(n) -
                             (n / p) * std::log(static_cast<double>(n));
    const bool within = n < 2 || p >= p_zero(n);
    return {std::exp(log_value), log_value, within};
}

struct MinJkResult {
    int k_star;
    double value;     // per(J_{k_star}) = k!/k^(k/p) for the unit-lp-row all-ones block
    double log_value;
};

inline double min_Jk_continuous_lower_log(double p) {
    detail::require_open_12(p, "min_Jk_continuous_lower");
    return -(p - 1.0) / p * std::exp(1.0 / (p - 1.0));
}

inline double min_Jk_continuous_lower(double p) {
    return std::exp(min_Jk_continuous_lower_log(p));
}

// Smallest per(J_k) over k >= 1. theta(k) = per(J_k)/per(J_{k-1}) dips below 1
// and recrosses exactly once, so the minimum sits at the last k before the
// recrossing: scan until theta(k+1) >= 1, i.e. p >= p_zero(k+1).
inline MinJkResult min_Jk_permanent(double p) {
    detail::require_open_12(p, "min_Jk_permanent");
    const double raw_cap = 3.0 * std::exp(1.0 / (p - 1.0));
    if (!(raw_cap < 1e8))
        throw std::domain_error("min_Jk_permanent: p so close to 1 that the crossing scan "
                                "would exceed 10^8 blocks");
    const long cap = std::max(200L, static_cast<long>(std::ceil(raw_cap)));
    int k = 1;
    while (!(p >= p_zero(k + 1))) {
        if (++k > cap)
            throw NonConvergenceError("min_Jk_permanent: no crossing within scan cap");
    }
    const double log_value = log_factorial(k) - (k / p) * std::log(static_cast<double>(k));
    return {k, std::exp(log_value), log_value};
}

// Bregman: per(A) <= prod (r_i!)^(1/r_i) for 0/1 matrices with row sums r_i.
inline double bregman_bound_log(const NonnegMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.n; ++i) {
        int r = 0;
        for (int j = 0; j < m.n; ++j) {
            const double v = m(i, j);
            if (v == 1.0) ++r;
            else if (v != 0.0)
                throw std::invalid_argument("bregman_bound requires 0/1 entries, got " +
                                            format_double(v));
        }
        if (r == 0) throw ZeroRowError("bregman_bound: row " + std::to_string(i) + " is zero");
        s += log_factorial(r) / r;
    }
    return s;
}

inline double bregman_bound(const NonnegMatrix& m) { return std::exp(bregman_bound_log(m)); }

// van der Waerden: per of any doubly stochastic matrix is at least n!/n^n.
inline double vdw_lower_log(int n) {
    if (n < 1) throw std::domain_error("vdw_lower requires n >= 1");
    return log_factorial(n) - n * std::log(static_cast<double>(n));
}

inline double vdw_lower(int n) { return std::exp(vdw_lower_log(n)); }

// phi(x) = Gamma(1/x + 1)^(-x), phi(0) = 0: increasing and concave on [0,1],
// sends 1/r to 1/(r!)^(1/r).
inline double phi(double x) {
    if (!(x >= 0.0) || !(x <= 1.0)) throw std::domain_error("phi requires x in [0,1]");
    if (x == 0.0) return 0.0;
    return std::exp(-x * std::lgamma(1.0 / x + 1.0));
}

// per of the entry-wise phi image of a stochastic matrix; conjectured <= 1.
inline double minc_gen_value(const NonnegMatrix& m, double tol = 1e-9) {
    if (m.n > kRyserMaxDim)
        throw DimensionError("minc_gen_value supports n <= " + std::to_string(kRyserMaxDim));
    if (!is_stochastic(m, tol)) throw NotStochasticError("minc_gen_value needs stochastic rows");
    NonnegMatrix f = m;
    for (double& x : f.a) x = phi(std::min(x, 1.0));
    return permanent_ryser(f);
}

// per(a_ij^(1/p_0(n))) for stochastic a; proven <= 1 with equality at
// permutation matrices and at (1/n) J_n.
inline double prop_value(const NonnegMatrix& m, double tol = 1e-9) {
    if (m.n < 2 || m.n > kRyserMaxDim)
        throw DimensionError("prop_value supports 2 <= n <= " + std::to_string(kRyserMaxDim));
    if (!is_stochastic(m, tol)) throw NotStochasticError("prop_value needs stochastic rows");
    return permanent_ryser(elementwise_pow(m, 1.0 / p_zero(m.n)));
}

enum class BoundRegime { identity_optimal, uniform_optimal, open_interval };

inline const char* to_string(BoundRegime r) {
    switch (r) {
        case BoundRegime::identity_optimal: return "identity_optimal";
        case BoundRegime::uniform_optimal: return "uniform_optimal";
        default: return "open_interval";
    }
}

struct BoundReport {
    int n;
    double p;
    double lower;         // best known lower bound on U(n,p)
    double upper_product; // finite only for p in (1,2)
    double upper_closed;  // finite only for p in (1,2)
    BoundRegime regime;
};

inline BoundReport make_bound_report(int n, double p) {
    if (n < 2) throw std::domain_error("make_bound_report requires n >= 2");
    if (!(p >= 1.0)) throw std::domain_error("make_bound_report requires p >= 1");
    BoundReport r;
    r.n = n;
    r.p = p;
    r.lower = u_lower(n, p);
    const bool open12 = p > 1.0 && p < 2.0;
    const double inf = std::numeric_limits<double>::infinity();
    r.upper_product = open12 ? u_upper_product(n, p) : inf;
    r.upper_closed = open12 ? u_upper_closed(n, p).value : inf;
    r.regime = p <= p_zero(n)  ? BoundRegime::identity_optimal
               : p >= 2.0      ? BoundRegime::uniform_optimal
                               : BoundRegime::open_interval;
    return r;
}

} // namespace permlp
