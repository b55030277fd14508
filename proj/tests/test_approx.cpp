#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "permlp/approx.hpp"
#include "permlp/permanent.hpp"
#include "permlp/rng.hpp"

using namespace permlp;

TEST_CASE("identity is certified exactly") {
    auto r = approximate_permanent_ds(NonnegMatrix::identity(3));
    CHECK(r.kind == ApproxCase::large_matching);
    CHECK(r.lo == 1.0);
    CHECK(r.hi == 1.0);
    CHECK(r.estimate == 1.0);
    CHECK(r.guarantee_factor == 1.0);
    CHECK(r.matching.sigma == std::vector<int>{0, 1, 2});
    CHECK_FALSE(r.scaling.has_value());
    CHECK(r.below_asymptotic_n); // n = 3 < 5
}

TEST_CASE("uniform 3x3 hits the small-matching branch") {
    auto r = approximate_permanent_ds(NonnegMatrix::constant(3, 1.0 / 3.0));
    CHECK(r.kind == ApproxCase::small_matching); // pi = 1/27 < 1/8
    CHECK(r.lo == Catch::Approx(6.0 / 27.0).epsilon(1e-13));          // van der Waerden wins
    CHECK(r.hi == Catch::Approx(0.413506656251196).epsilon(1e-12));   // 2^{(q0-1)3}
    const double per = 6.0 / 27.0;
    CHECK(r.lo * (1.0 - 1e-12) <= per);
    CHECK(per <= r.hi * (1.0 + 1e-12));
    CHECK(r.estimate == Catch::Approx(std::sqrt(r.lo * r.hi)).epsilon(1e-12));
    CHECK(r.guarantee_factor == Catch::Approx(r.hi / r.lo).epsilon(1e-12));
}

TEST_CASE("ds entry point rejects non-stochastic input") {
    CHECK_THROWS_AS(approximate_permanent_ds(NonnegMatrix::constant(3, 1.0)),
                    NotStochasticError);
    Rng rng(17);
    CHECK_THROWS_AS(approximate_permanent_ds(rng.stochastic_matrix(4)), NotStochasticError);
}

TEST_CASE("structural zero permanent") {
    NonnegMatrix zr(4, 1.0);
    for (int j = 0; j < 4; ++j) zr(1, j) = 0.0;
    auto r = approximate_permanent(zr);
    CHECK(r.kind == ApproxCase::zero);
    CHECK(r.lo == 0.0);
    CHECK(r.hi == 0.0);
    CHECK(r.estimate == 0.0);
    CHECK(r.guarantee_factor == 1.0);
    CHECK(std::isinf(r.log_lo));

    NonnegMatrix hall = NonnegMatrix::from_rows({{1, 1, 0}, {1, 1, 0}, {1, 1, 0}});
    CHECK(approximate_permanent(hall).kind == ApproxCase::zero);
}

TEST_CASE("diagonal matrix unscales to the exact permanent") {
    NonnegMatrix d(2, 0.0);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    auto r = approximate_permanent(d);
    CHECK(r.kind == ApproxCase::large_matching);
    CHECK(r.lo == Catch::Approx(6.0).epsilon(1e-12));
    CHECK(r.hi == Catch::Approx(6.0).epsilon(1e-12));
    CHECK(r.residual == 0.0);
    REQUIRE(r.scaling.has_value());
    CHECK(r.scaling->scaled == NonnegMatrix::identity(2));
}

TEST_CASE("random 7x7 interval contains the exact permanent") {
    Rng rng(7070);
    NonnegMatrix m = rng.positive_matrix(7);
    auto r = approximate_permanent(m);
    const double per = permanent_ryser(m);
    CHECK(r.lo * (1.0 - 1e-6) <= per);
    CHECK(per <= r.hi * (1.0 + 1e-6));
    // bare worst-case at n = 7, with the scaling slack
    const double bare = std::pow(7.0, 7.0) / 5040.0;
    CHECK(r.guarantee_factor <= bare * std::exp(2.0 * 7.0 * r.residual) * (1.0 + 1e-9));
}

TEST_CASE("interval soundness corpus") {
    Rng rng(20250825);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 2 + rep % 7; // 2..8
        NonnegMatrix m = rng.positive_matrix(n);
        auto r = approximate_permanent(m);
        REQUIRE(r.kind != ApproxCase::zero);
        const double per = permanent_ryser(m);
        REQUIRE(r.lo * (1.0 - 1e-6) <= per);
        REQUIRE(per <= r.hi * (1.0 + 1e-6));
        REQUIRE(r.guarantee_factor >= 1.0);
        REQUIRE(r.lo <= r.estimate);
        REQUIRE(r.estimate <= r.hi * (1.0 + 1e-15));

        // guarantee asserted from returned fields alone
        const double slack = std::exp(2.0 * n * r.residual) * (1.0 + 1e-9);
        const double bare = std::exp(n * std::log(double(n)) - log_factorial(n));
        if (r.kind == ApproxCase::large_matching) {
            CHECK(r.guarantee_factor <= std::min(std::exp(n * std::log(2.0)), bare) * slack);
        } else {
            const double q0 = 1.0 / p_zero(n);
            CHECK(r.guarantee_factor <=
                  bare * std::exp((q0 - 1.0) * n * std::log(2.0)) * slack);
        }
    }
}

TEST_CASE("determinism bit for bit") {
    Rng rng(5150);
    NonnegMatrix m = rng.positive_matrix(6);
    auto a = approximate_permanent(m);
    auto b = approximate_permanent(m);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
    CHECK(a.estimate == b.estimate);
    CHECK(a.log_lo == b.log_lo);
    CHECK(a.matching.sigma == b.matching.sigma);
    CHECK(a.scaling->iterations == b.scaling->iterations);
    CHECK(a.scaling->log_scale_product == b.scaling->log_scale_product);
}

TEST_CASE("row homogeneity carries through the certificate") {
    Rng rng(31337);
    NonnegMatrix m = rng.positive_matrix(5);
    NonnegMatrix scaled_row = m;
    const double c = 3.7;
    for (int j = 0; j < 5; ++j) scaled_row(2, j) *= c;
    auto a = approximate_permanent(m);
    auto b = approximate_permanent(scaled_row);
    CHECK(b.lo == Catch::Approx(c * a.lo).epsilon(1e-9));
    CHECK(b.hi == Catch::Approx(c * a.hi).epsilon(1e-9));
}

TEST_CASE("sparse but totally supported input scales fine") {
    // two disjoint permutation supports with unequal row weights: every
    // positive entry lies on a perfect matching, so Sinkhorn converges fast
    const int n = 5;
    NonnegMatrix m(n, 0.0);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 0.6 * (i + 1);
        m(i, (i + 1) % n) = 0.4 * (i + 1);
    }
    auto r = approximate_permanent(m);
    const double per = permanent_naive(m);
    CHECK(r.lo * (1.0 - 1e-6) <= per);
    CHECK(per <= r.hi * (1.0 + 1e-6));
    CHECK(r.scaling->iterations < 200);
}

TEST_CASE("sinkhorn budget exhaustion raises") {
    Rng rng(12);
    NonnegMatrix m = rng.positive_matrix(6);
    CHECK_THROWS_AS(approximate_permanent(m, 1e-13, 1), NonConvergenceError);

    // support without total support (strict triangle): the scaled limit needs
    // entries to decay to 0, which Sinkhorn approaches only harmonically
    NonnegMatrix tri = NonnegMatrix::from_rows({{1, 1, 1}, {0, 1, 1}, {0, 0, 1}});
    CHECK_THROWS_AS(approximate_permanent(tri, 1e-8, 2000), NonConvergenceError);
}

TEST_CASE("guarantee curve") {
    auto rows = guarantee_curve(2, 30);
    REQUIRE(rows.size() == 29);
    CHECK(rows[0].n == 2);
    CHECK(rows[0].factor == Catch::Approx(4.0).epsilon(1e-13));
    CHECK(rows[0].factor >= 1.0);

    // n = 5 sits in the large-matching branch: factor = 2^5
    const auto& r5 = rows[3];
    CHECK(r5.n == 5);
    CHECK(r5.q0 == Catch::Approx(1.0 / p_zero(5)).epsilon(1e-15));
    CHECK(r5.factor == Catch::Approx(32.0).epsilon(1e-12));

    // branch crossover by n = 21: factor beats plain 2^n
    const auto& r21 = rows[19];
    CHECK(r21.n == 21);
    CHECK(r21.factor > std::exp(21 * std::log(2.0)));
    CHECK(r21.factor == Catch::Approx(3341113.788289701).epsilon(1e-11));

    // improvement over the bare n^n/n! grows monotonically from n = 5 on,
    // and factor * improvement telescopes back to the bare ratio
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& row : guarantee_curve(5, 200)) {
        CHECK(row.log_improvement > prev);
        prev = row.log_improvement;
        const double bare = row.n * std::log(double(row.n)) - log_factorial(row.n);
        CHECK(row.log_factor + row.log_improvement == Catch::Approx(bare).margin(1e-12));
    }

    CHECK_THROWS_AS(guarantee_curve(1, 5), std::domain_error);
    CHECK_THROWS_AS(guarantee_curve(5, 4), std::domain_error);
}
