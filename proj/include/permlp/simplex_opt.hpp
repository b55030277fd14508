#pragma once
// Numeric maximization of P(y) = sum_i y_i^q prod_{j != i} (1 - y_j)^q over
// the simplex, and of the permanent over matrices with unit-lp rows. These are
// search heuristics used as witnesses: their results are always compared
// against closed forms or proven bounds by the verification layer.
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "permlp/bounds.hpp"
#include "permlp/matrix.hpp"
#include "permlp/permanent.hpp"
#include "permlp/rng.hpp"

namespace permlp {

// P(y), each term's product taken in log domain. Exact 1 at basis vectors.
inline double P_of_y(const SimplexPoint& y, double q) {
    if (!(q > 0.0) || !(q <= 1.0)) throw std::domain_error("P_of_y requires q in (0,1]");
    const int k = y.size();
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        if (y.y[i] == 0.0) continue;
        double log_term = std::log(y.y[i]);
        bool dead = false;
        for (int j = 0; j < k && !dead; ++j) {
            if (j == i) continue;
            const double one_minus = 1.0 - y.y[j];
            if (one_minus <= 0.0) dead = true;
            else log_term += std::log(one_minus);
        }
        if (!dead) total += std::exp(q * log_term);
    }
    return total;
}

// Euclidean projection onto the simplex (sort-and-threshold).
inline SimplexPoint project_to_simplex(std::vector<double> v) {
    const int k = static_cast<int>(v.size());
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double threshold = 0.0;
    for (int i = 0; i < k; ++i) {
        cumulative += u[i];
        const double t = (cumulative - 1.0) / (i + 1);
        if (u[i] - t > 0.0) threshold = t;
    }
    SimplexPoint out;
    out.y.resize(k);
    for (int i = 0; i < k; ++i) out.y[i] = std::max(v[i] - threshold, 0.0);
    return out;
}

namespace detail {

// dP/dy_m = q (t_m / y_m - (P - t_m)/(1 - y_m)), with the coordinates clamped
// away from {0,1} (P is not differentiable there; the clamp only steers the
// search, never the reported value).
inline std::vector<double> P_gradient(const SimplexPoint& y, double q) {
    const int k = y.size();
    std::vector<double> t(k, 0.0), g(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        const double yi = std::max(y.y[i], 1e-12);
        double log_term = std::log(yi);
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            log_term += std::log(std::max(1.0 - y.y[j], 1e-12));
        }
        t[i] = std::exp(q * log_term);
        total += t[i];
    }
    for (int m = 0; m < k; ++m) {
        const double ym = std::min(std::max(y.y[m], 1e-12), 1.0 - 1e-12);
        g[m] = q * (t[m] / ym - (total - t[m]) / (1.0 - ym));
    }
    return g;
}

// Projected gradient ascent with halving backtracking line search.
inline SimplexPoint ascend_P(SimplexPoint y, double q, int max_iters = 400) {
    double value = P_of_y(y, q);
    for (int it = 0; it < max_iters; ++it) {
        const auto g = P_gradient(y, q);
        double step = 0.5;
        bool moved = false;
        for (int h = 0; h < 40; ++h, step *= 0.5) {
            std::vector<double> trial = y.y;
            for (size_t m = 0; m < trial.size(); ++m) trial[m] += step * g[m];
            SimplexPoint candidate = project_to_simplex(std::move(trial));
            const double cv = P_of_y(candidate, q);
            if (cv > value) {
                y = std::move(candidate);
                value = cv;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return y;
}

} // namespace detail

struct SimplexMaxResult {
    SimplexPoint point;
    double value;
    std::string winner; // "basis", "uniform", "one_var" or "gradient"
};

// Best of: all basis vectors, the uniform vector, a dense scan plus golden
// refinement of the one-variable family y = (x, (1-x)/(k-1), ...), and
// seeded multi-start projected-gradient ascent. Candidates are evaluated in
// that fixed order and ties keep the earliest winner, so results are
// deterministic for a given seed.
inline SimplexMaxResult maximize_P_simplex(int k, double q, int restarts = 64,
                                           std::uint64_t seed = 0) {
    if (k < 1) throw std::domain_error("maximize_P_simplex requires k >= 1");
    if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("maximize_P_simplex requires q in (0,1)");

    SimplexMaxResult best{SimplexPoint::basis(k, 0), P_of_y(SimplexPoint::basis(k, 0), q),
                          "basis"};
    auto consider = [&](SimplexPoint p, const char* label) {
        const double v = P_of_y(p, q);
        if (v > best.value) best = {std::move(p), v, label};
    };
    for (int i = 1; i < k; ++i) consider(SimplexPoint::basis(k, i), "basis");
    consider(SimplexPoint::uniform(k), "uniform");

    if (k >= 2) {
        // one-variable family: dense grid, then golden-section refinement
        auto family = [&](double x) {
            SimplexPoint p;
            p.y.assign(k, (1.0 - x) / (k - 1));
            p.y[0] = x;
            return p;
        };
        const int grid = 2000;
        int best_cell = 0;
        double best_cell_value = -1.0;
        for (int i = 0; i <= grid; ++i) {
            const double v = P_of_y(family(static_cast<double>(i) / grid), q);
            if (v > best_cell_value) {
                best_cell_value = v;
                best_cell = i;
            }
        }
        double lo = std::max(0.0, (best_cell - 1.0) / grid);
        double hi = std::min(1.0, (best_cell + 1.0) / grid);
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
        double fa = P_of_y(family(a), q), fb = P_of_y(family(b), q);
        for (int it = 0; it < 80; ++it) {
            if (fa < fb) {
                lo = a; a = b; fa = fb;
                b = lo + gr * (hi - lo); fb = P_of_y(family(b), q);
            } else {
                hi = b; b = a; fb = fa;
                a = hi - gr * (hi - lo); fa = P_of_y(family(a), q);
            }
        }
        consider(family(0.5 * (lo + hi)), "one_var");
    }

    Rng rng(seed);
    for (int r = 0; r < restarts; ++r) {
        SimplexPoint start;
        start.y = rng.dirichlet_uniform(k);
        consider(detail::ascend_P(std::move(start), q), "gradient");
    }
    return best;
}

struct OmegaMaxResult {
    NonnegMatrix matrix; // rows are unit vectors in lp
    double value;        // its permanent
    std::string winner;  // "identity", "uniform" or "gradient"
};

namespace detail {

// project rows: clip negatives, renormalize each row to unit lp norm.
// A row wiped out by clipping falls back to its pre-step state.
inline bool project_rows_lp(NonnegMatrix& m, const NonnegMatrix& fallback, double p) {
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) m(i, j) = std::max(m(i, j), 0.0);
        const double norm = lp_norm(m.row(i), p);
        if (norm <= 0.0) {
            for (int j = 0; j < m.n; ++j) m(i, j) = fallback(i, j);
            continue;
        }
        for (int j = 0; j < m.n; ++j) m(i, j) /= norm;
    }
    return true;
}

inline NonnegMatrix ascend_permanent(NonnegMatrix m, double p, int max_iters = 300) {
    double value = permanent_naive(m);
    for (int it = 0; it < max_iters; ++it) {
        // dper/da_ij = per(minor_ij)
        NonnegMatrix grad(m.n, 0.0);
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j) grad(i, j) = permanent_minor(m, i, j);
        double step = 0.5;
        bool moved = false;
        for (int h = 0; h < 40; ++h, step *= 0.5) {
            NonnegMatrix trial = m;
            for (size_t e = 0; e < trial.a.size(); ++e) trial.a[e] += step * grad.a[e];
            project_rows_lp(trial, m, p);
            const double tv = permanent_naive(trial);
            if (tv > value) {
                m = std::move(trial);
                value = tv;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return m;
}

} // namespace detail

// Heuristic maximizer of the permanent over matrices with unit-lp nonnegative
// rows, n <= 4 (exact permanents inside the loop). Always seeds with the
// identity and the uniform matrix n^{-1/p} J.
inline OmegaMaxResult maximize_permanent_omega(int n, double p, int restarts = 64,
                                               std::uint64_t seed = 0) {
    if (n < 2 || n > 4)
        throw std::domain_error("maximize_permanent_omega supports 2 <= n <= 4");
    if (!(p >= 1.0)) throw std::domain_error("maximize_permanent_omega requires p >= 1");

    OmegaMaxResult best{NonnegMatrix::identity(n), permanent_naive(NonnegMatrix::identity(n)),
                        "identity"};
    auto consider = [&](NonnegMatrix m, const char* label) {
        const double v = permanent_naive(m);
        if (v > best.value) best = {std::move(m), v, label};
    };
    consider(NonnegMatrix::constant(n, std::pow(static_cast<double>(n), -1.0 / p)), "uniform");
    consider(detail::ascend_permanent(NonnegMatrix::identity(n), p), "gradient");
    consider(detail::ascend_permanent(
                 NonnegMatrix::constant(n, std::pow(static_cast<double>(n), -1.0 / p)), p),
             "gradient");

    Rng rng(seed);
    for (int r = 0; r < restarts; ++r) {
        NonnegMatrix start(n, 0.0);
        for (int i = 0; i < n; ++i) {
            auto row = rng.dirichlet_uniform(n);
            const double norm = lp_norm(row, p);
            for (int j = 0; j < n; ++j) start(i, j) = row[j] / norm;
        }
        consider(detail::ascend_permanent(std::move(start), p), "gradient");
    }
    return best;
}

} // namespace permlp
