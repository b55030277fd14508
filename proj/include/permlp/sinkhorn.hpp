#pragma once
// Alternating Sinkhorn scaling toward a doubly stochastic matrix. Only the
// scale vectors evolve; the scaled matrix is assembled as r_i * M_ij * c_j at
// the end, so the reported factorization holds to an ulp and zero patterns
// survive exactly.
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "permlp/errors.hpp"
#include "permlp/matrix.hpp"

namespace permlp {

struct ScalingResult {
    NonnegMatrix scaled;
    std::vector<double> row_scale;
    std::vector<double> col_scale;
    double log_scale_product; // sum of all log scales; per(M) = e^{-this} * per(scaled)
    double residual;          // max |row or column sum - 1|
    bool converged;
    int iterations;           // full row+column passes performed
};

namespace detail {

inline double scaling_residual(const NonnegMatrix& m, const std::vector<double>& r,
                               const std::vector<double>& c) {
    const int n = m.n;
    double worst = 0.0;
    std::vector<double> col_sum(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = r[i] * m(i, j) * c[j];
            row_sum += v;
            col_sum[j] += v;
        }
        worst = std::max(worst, std::fabs(row_sum - 1.0));
    }
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::fabs(col_sum[j] - 1.0));
    return worst;
}

} // namespace detail

inline ScalingResult sinkhorn_scale(const NonnegMatrix& m, double tol = 1e-8,
                                    int max_iters = 100000) {
    if (!(tol > 0.0)) throw std::domain_error("sinkhorn_scale requires tol > 0");
    const int n = m.n;
    for (int i = 0; i < n; ++i) {
        double rs = 0.0, cs = 0.0;
        for (int j = 0; j < n; ++j) {
            rs += m(i, j);
            cs += m(j, i);
        }
        if (rs == 0.0) throw NoSupportError("row " + std::to_string(i) + " has empty support");
        if (cs == 0.0) throw NoSupportError("column " + std::to_string(i) + " has empty support");
    }

    std::vector<double> r(n, 1.0), c(n, 1.0);
    double residual = detail::scaling_residual(m, r, c);
    int it = 0;
    while (residual > tol && it < max_iters) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += m(i, j) * c[j];
            r[i] = 1.0 / s;
        }
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += m(i, j) * r[i];
            c[j] = 1.0 / s;
        }
        ++it;
        residual = detail::scaling_residual(m, r, c);
    }

    ScalingResult out;
    out.scaled = m;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.scaled(i, j) = r[i] * m(i, j) * c[j];
    out.log_scale_product = 0.0;
    for (int i = 0; i < n; ++i) out.log_scale_product += std::log(r[i]) + std::log(c[i]);
    out.row_scale = std::move(r);
    out.col_scale = std::move(c);
    out.residual = residual;
    out.converged = residual <= tol;
    out.iterations = it;
    return out;
}

} // namespace permlp
