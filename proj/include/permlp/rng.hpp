#pragma once
// Deterministic random inputs. mt19937_64 output is specified bit-for-bit by
// the standard, and all real-valued mappings below are written out manually,
// so a seed produces identical streams across platforms and compilers.
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "permlp/matrix.hpp"

namespace permlp {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform on the open interval (0,1): 53-bit mantissa, offset by half an ulp.
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) { // inclusive bounds, rejection-free for our ranges
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(eng_() % span);
    }

    // Dirichlet(1,...,1): exponentials normalized to sum 1. Coordinates are
    // strictly positive because uniform01 never returns 0 or 1.
    std::vector<double> dirichlet_uniform(int k) {
        std::vector<double> y(k);
        double s = 0.0;
        for (int i = 0; i < k; ++i) {
            y[i] = -std::log(uniform01());
            s += y[i];
        }
        for (int i = 0; i < k; ++i) y[i] /= s;
        return y;
    }

    // Row-stochastic matrix with strictly positive entries.
    NonnegMatrix stochastic_matrix(int n) {
        NonnegMatrix m(n, 0.0);
        for (int i = 0; i < n; ++i) {
            auto row = dirichlet_uniform(n);
            for (int j = 0; j < n; ++j) m(i, j) = row[j];
        }
        return m;
    }

    // Entries uniform on (lo, hi); lo > 0 keeps the support total.
    NonnegMatrix positive_matrix(int n, double lo = 0.05, double hi = 1.0) {
        NonnegMatrix m(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = uniform(lo, hi);
        return m;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace permlp
