#pragma once
// Numeric verification harness. Every report compares a searched or sampled
// quantity against a closed form or proven bound and carries a normalized
// margin: each subcheck contributes slack/budget (1 = a full budget of room,
// 0 = exactly on the boundary, negative = violated) and the report keeps the
// minimum. Hard reports have tolerance 0 (pass iff margin >= 0); reports
// about open questions are informational: tolerance = +inf, pass always true,
// margin still recorded.
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "permlp/ascent.hpp"
#include "permlp/bounds.hpp"
#include "permlp/matrix.hpp"
#include "permlp/parallel.hpp"
#include "permlp/permanent.hpp"
#include "permlp/rng.hpp"
#include "permlp/simplex_opt.hpp"

namespace permlp {

struct VerifyReport {
    std::string check_name;
    std::string parameters; // inputs, space separated "k=3 p=1.9"
    std::vector<std::pair<std::string, double>> values;     // measured quantities
    std::vector<std::pair<std::string, double>> references; // closed forms / bounds
    double margin;    // min over subchecks of slack/budget
    double tolerance; // 0 = hard, +inf = informational
    bool pass;        // margin >= -tolerance
    std::string notes;
};

namespace detail {

struct MarginAccumulator {
    double min_margin = std::numeric_limits<double>::infinity();
    // pass condition: |deviation| <= budget
    void within(double deviation, double budget) {
        min_margin = std::min(min_margin, (budget - std::fabs(deviation)) / budget);
    }
    // pass condition: x <= bound + budget
    void at_most(double x, double bound, double budget) {
        min_margin = std::min(min_margin, (bound + budget - x) / budget);
    }
    // pass condition: x >= bound - budget
    void at_least(double x, double bound, double budget) {
        min_margin = std::min(min_margin, (x - bound + budget) / budget);
    }
    void boolean(bool ok) { min_margin = std::min(min_margin, ok ? 1.0 : -1.0); }
};

inline VerifyReport finish(std::string name, std::string params,
                           std::vector<std::pair<std::string, double>> values,
                           std::vector<std::pair<std::string, double>> references,
                           const MarginAccumulator& acc, bool informational = false,
                           std::string notes = {}) {
    VerifyReport r;
    r.check_name = std::move(name);
    r.parameters = std::move(params);
    r.values = std::move(values);
    r.references = std::move(references);
    r.margin = acc.min_margin;
    r.tolerance = informational ? std::numeric_limits<double>::infinity() : 0.0;
    r.pass = r.margin >= -r.tolerance;
    r.notes = std::move(notes);
    return r;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Searched maximum of P over the simplex vs the closed form max{1, theta(k,1/p)}.
// If the argmax is interior, the first-order conditions t_i = y_i P(y) must
// hold; if it is additionally non-constant, its coordinates must take two
// values a < 1-q < b with a single coordinate at b (such a point contradicts
// the closed form, so these subchecks only ever bind on a genuine failure).
inline VerifyReport check_wkp(int k, double p, double value_tol = 1e-5, int restarts = 64,
                              std::uint64_t seed = 0) {
    if (k < 2 || k > 8) throw std::domain_error("check_wkp supports 2 <= k <= 8");
    if (!(p > 1.0) || !(p < 2.0)) throw std::domain_error("check_wkp requires p in (1,2)");
    const double q = 1.0 / p;
    const auto res = maximize_P_simplex(k, q, restarts, seed);
    const double ref = w_closed_form(k, p);

    detail::MarginAccumulator acc;
    acc.within(res.value - ref, value_tol);

    // distance to the nearest predicted argmax (a basis vector or uniform)
    double dist = std::numeric_limits<double>::infinity();
    for (int b = 0; b < k; ++b) {
        double d = 0.0;
        for (int i = 0; i < k; ++i)
            d = std::max(d, std::fabs(res.point.y[i] - (i == b ? 1.0 : 0.0)));
        dist = std::min(dist, d);
    }
    {
        double d = 0.0;
        for (int i = 0; i < k; ++i) d = std::max(d, std::fabs(res.point.y[i] - 1.0 / k));
        dist = std::min(dist, d);
    }
    acc.within(dist, 1e-4);

    bool interior = true;
    for (double v : res.point.y) interior = interior && v > 1e-8 && v < 1.0 - 1e-8;
    double stationarity = 0.0;
    if (interior) {
        std::vector<double> t(k);
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            double lt = std::log(res.point.y[i]);
            for (int j = 0; j < k; ++j)
                if (j != i) lt += std::log(1.0 - res.point.y[j]);
            t[i] = std::exp(q * lt);
            total += t[i];
        }
        for (int i = 0; i < k; ++i)
            stationarity = std::max(stationarity, std::fabs(t[i] - res.point.y[i] * total));
        acc.within(stationarity, 1e-6);

        std::vector<double> ys = res.point.y;
        std::sort(ys.begin(), ys.end());
        if (ys.back() - ys.front() > 1e-5) { // non-constant interior argmax
            int split = 0;
            for (int i = 1; i + 1 < k; ++i)
                if (ys[i + 1] - ys[i] > ys[split + 1] - ys[split]) split = i;
            const double spread_low = ys[split] - ys.front();
            const double spread_high = ys.back() - ys[split + 1];
            acc.boolean(spread_low <= 1e-5 && spread_high <= 1e-5); // two values only
            acc.boolean(ys[split] < 1.0 - q && 1.0 - q < ys[split + 1]);
            acc.boolean(split + 2 == k); // exactly one coordinate at the high value
        }
    }

    return detail::finish(
        "wkp", "k=" + std::to_string(k) + " p=" + format_double(p),
        {{"max", res.value}, {"argmax_dist", dist}, {"stationarity", stationarity}},
        {{"w", ref}, {"theta", theta(k, q)}}, acc, false, "argmax=" + res.winner);
}

// theta(x) on [1,k]: interior grid values never beat the endpoints (up to a
// relative 1e-12), the profile is decreasing-then-increasing, and when the
// stationary point x_q (root of x ln(x/(x-1)) = 1/q) lies inside the range,
// the grid argmin must sit within 3 grid steps of it.
inline VerifyReport check_theta_endpoint(int k, double q, int grid_points = 10000) {
    if (k < 2) throw std::domain_error("check_theta_endpoint requires k >= 2");
    if (!(q > 0.5) || !(q < 1.0))
        throw std::domain_error("check_theta_endpoint requires q in (1/2,1)");
    if (grid_points < 10) throw std::domain_error("grid too coarse");

    const double h = (k - 1.0) / grid_points;
    std::vector<double> th(grid_points + 1);
    double scale = 0.0;
    for (int i = 0; i <= grid_points; ++i) {
        th[i] = theta_continuous(1.0 + h * i, q);
        scale = std::max(scale, std::fabs(th[i]));
    }
    const double end_max = std::max(th.front(), th.back());
    double interior_max = -std::numeric_limits<double>::infinity();
    int argmin = 0;
    for (int i = 1; i < grid_points; ++i) {
        interior_max = std::max(interior_max, th[i]);
        if (th[i] < th[argmin]) argmin = i;
    }

    detail::MarginAccumulator acc;
    acc.at_most(interior_max / std::max(1.0, end_max), end_max / std::max(1.0, end_max), 1e-12);

    // decreasing then increasing: at most one sign change among the
    // differences, ignoring changes below the fp noise floor
    int transitions = 0, last = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double d = th[i + 1] - th[i];
        const int s = d > 1e-14 * scale ? 1 : (d < -1e-14 * scale ? -1 : 0);
        if (s != 0) {
            if (last != 0 && s != last) ++transitions;
            last = s;
        }
    }
    acc.boolean(transitions <= 1);

    // x_q by bisection; g(x) = x ln(x/(x-1)) decreases from +inf to 1
    double lo = 1.0 + 1e-12, hi = 2.0;
    while (hi * std::log(hi / (hi - 1.0)) > 1.0 / q && hi < 1e9) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::log(mid / (mid - 1.0)) > 1.0 / q) lo = mid;
        else hi = mid;
    }
    const double x_q = 0.5 * (lo + hi);
    const double argmin_x = 1.0 + h * argmin;
    if (x_q > 1.0 + h && x_q < k - h) acc.within(argmin_x - x_q, 3.0 * h);

    return detail::finish("theta_endpoint",
                          "k=" + std::to_string(k) + " q=" + format_double(q) + " grid=" +
                              std::to_string(grid_points),
                          {{"interior_max", interior_max},
                           {"transitions", static_cast<double>(transitions)},
                           {"argmin_x", argmin_x}},
                          {{"end_max", end_max}, {"x_q", x_q}}, acc);
}

// One-variable reduction on [1/k, 1]:
//   f(x) = x^q (k-2+x)^{(k-1)q} + (k-1)(1-x)^{2q} (k-2+x)^{(k-2)q}
// must attain its max at an endpoint, and
//   h(x) = (k-2+x) - (k-1)^{1/q} x^{1/q-1} (1-x)^{2-1/q}
// must be convex with h(1/k) = 0.
inline VerifyReport check_one_var_endpoint(int k, double q, int grid_points = 10000) {
    if (k < 3) throw std::domain_error("check_one_var_endpoint requires k >= 3");
    if (!(q > 0.5) || !(q < 1.0))
        throw std::domain_error("check_one_var_endpoint requires q in (1/2,1)");
    if (grid_points < 10) throw std::domain_error("grid too coarse");

    const auto f = [&](double x) {
        return std::pow(x, q) * std::pow(k - 2.0 + x, (k - 1.0) * q) +
               (k - 1.0) * std::pow(1.0 - x, 2.0 * q) * std::pow(k - 2.0 + x, (k - 2.0) * q);
    };
    const auto hfun = [&](double x) {
        return (k - 2.0 + x) - std::pow(k - 1.0, 1.0 / q) * std::pow(x, 1.0 / q - 1.0) *
                                   std::pow(1.0 - x, 2.0 - 1.0 / q);
    };
    const double x0 = 1.0 / k;
    const double step = (1.0 - x0) / grid_points;
    std::vector<double> fv(grid_points + 1), hv(grid_points + 1);
    double hscale = 0.0;
    for (int i = 0; i <= grid_points; ++i) {
        const double x = (i == grid_points) ? 1.0 : x0 + step * i;
        fv[i] = f(x);
        hv[i] = hfun(x);
        hscale = std::max(hscale, std::fabs(hv[i]));
    }
    const double end_max = std::max(fv.front(), fv.back());
    double interior_max = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid_points; ++i) interior_max = std::max(interior_max, fv[i]);

    double worst_second_diff = std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid_points; ++i)
        worst_second_diff =
            std::min(worst_second_diff, (hv[i - 1] + hv[i + 1] - 2.0 * hv[i]) / hscale);

    detail::MarginAccumulator acc;
    const double fscale = std::max(1.0, end_max); // f grows like k^kq, compare relatively
    acc.at_most(interior_max / fscale, end_max / fscale, 1e-12);
    acc.at_least(worst_second_diff, 0.0, 1e-12);
    acc.within(hv.front(), 1e-10);

    return detail::finish("one_var_endpoint",
                          "k=" + std::to_string(k) + " q=" + format_double(q) + " grid=" +
                              std::to_string(grid_points),
                          {{"interior_max", interior_max},
                           {"h_at_1_over_k", hv.front()},
                           {"min_second_diff", worst_second_diff}},
                          {{"end_max", end_max}}, acc);
}

// Random row-stochastic matrices: per(lambda^(1/p_zero(n))) <= 1, with
// equality at the identity.
inline VerifyReport check_proposition_random(int n, int trials, std::uint64_t seed = 0) {
    if (n < 2 || n > 12) throw std::domain_error("check_proposition_random supports 2 <= n <= 12");
    if (trials < 1) throw std::domain_error("trials must be >= 1");

    const double identity_value = prop_value(NonnegMatrix::identity(n));
    double worst = identity_value;
    Rng rng(seed);
    for (int t = 0; t < trials; ++t)
        worst = std::max(worst, prop_value(rng.stochastic_matrix(n)));

    detail::MarginAccumulator acc;
    acc.at_most(worst, 1.0, 1e-12 * n);
    acc.within(identity_value - 1.0, 1e-14);

    return detail::finish("proposition_random",
                          "n=" + std::to_string(n) + " trials=" + std::to_string(trials) +
                              " seed=" + std::to_string(seed),
                          {{"worst", worst}, {"identity_value", identity_value}},
                          {{"bound", 1.0}}, acc);
}

// Random row-stochastic matrices: one ascent step never lowers Per(lambda^q)
// by more than a 1e-11 relative slip. The identity is included as trial 0 and
// must sit at relative change exactly 0.
inline VerifyReport check_baum_random(int n, double q, int trials, std::uint64_t seed = 0) {
    if (n < 2 || n > 10) throw std::domain_error("check_baum_random supports 2 <= n <= 10");
    if (!(q > 0.0) || !(q <= 1.0)) throw std::domain_error("q must lie in (0,1]");
    if (trials < 1) throw std::domain_error("trials must be >= 1");

    auto relative_step = [&](const NonnegMatrix& lam) {
        const double before = permanent(elementwise_pow(lam, q));
        const double after = permanent(elementwise_pow(baum_eagon_step(lam, q), q));
        return (after - before) / before;
    };
    const double identity_step = relative_step(NonnegMatrix::identity(n));
    double worst = identity_step;
    Rng rng(seed);
    for (int t = 0; t < trials; ++t)
        worst = std::min(worst, relative_step(rng.stochastic_matrix(n)));

    detail::MarginAccumulator acc;
    acc.at_least(worst, 0.0, 1e-11);
    acc.boolean(identity_step == 0.0);

    return detail::finish("baum_step_random",
                          "n=" + std::to_string(n) + " q=" + format_double(q) + " trials=" +
                              std::to_string(trials) + " seed=" + std::to_string(seed),
                          {{"worst_rel_step", worst}, {"identity_rel_step", identity_step}},
                          {{"bound", 0.0}}, acc);
}

// Searched max of the permanent over unit-lp-row matrices. For p <= p_zero(n)
// the closed form says the max is 1, attained at the identity: hard check.
// For p > p_zero(n) the maximum is an open question; the report compares the
// searched value against the conjectured max(1, n!/n^{n/p}) informationally.
inline VerifyReport check_conjecture(int n, double p, int restarts = 48,
                                     std::uint64_t seed = 0) {
    if (n < 2 || n > 4) throw std::domain_error("check_conjecture supports 2 <= n <= 4");
    if (!(p >= 1.0) || !(p <= 2.0)) throw std::domain_error("check_conjecture requires p in [1,2]");

    const auto res = maximize_permanent_omega(n, p, restarts, seed);
    double dist_identity = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            dist_identity =
                std::max(dist_identity, std::fabs(res.matrix(i, j) - (i == j ? 1.0 : 0.0)));
    const double conjectured = std::max(1.0, u_lower(n, p));
    const bool proven = !(p > p_zero(n));

    detail::MarginAccumulator acc;
    if (proven) {
        acc.at_most(res.value, 1.0, 1e-6);
        acc.within(dist_identity, 1e-3);
    } else {
        acc.within(res.value - conjectured, 1e-6);
    }

    return detail::finish("conjecture",
                          "n=" + std::to_string(n) + " p=" + format_double(p),
                          {{"max", res.value}, {"dist_identity", dist_identity}},
                          {{"conjectured", conjectured}}, acc, !proven,
                          proven ? "proven regime p <= p_zero(n)"
                                 : "open regime, informational; argmax=" + res.winner);
}

// Hard companion to the conjecture search: whatever the search finds must sit
// inside the proven sandwich u_lower - 1e-6 <= max <= u_upper_product + 1e-6.
inline VerifyReport check_omega_sandwich(int n, double p, int restarts = 48,
                                         std::uint64_t seed = 0) {
    if (n < 2 || n > 4) throw std::domain_error("check_omega_sandwich supports 2 <= n <= 4");
    if (!(p > 1.0) || !(p < 2.0))
        throw std::domain_error("check_omega_sandwich requires p in (1,2)");

    const auto res = maximize_permanent_omega(n, p, restarts, seed);
    const double lower = u_lower(n, p);
    const double upper = u_upper_product(n, p);

    detail::MarginAccumulator acc;
    acc.at_least(res.value, lower, 1e-6);
    acc.at_most(res.value, upper, 1e-6);

    return detail::finish("omega_sandwich", "n=" + std::to_string(n) + " p=" + format_double(p),
                          {{"max", res.value}},
                          {{"u_lower", lower}, {"u_upper_product", upper}}, acc);
}

// ---- suite ----------------------------------------------------------------

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"wkp",  "theta",       "onevar", "prop",
                                                "baum", "conjecture",  "all"};
    return names;
}

// Fixed parameter grids, desk scale. Each task derives its own seed from the
// suite seed and its position, so results are identical for any jobs count.
// restarts = 0 keeps each check's default search effort.
inline std::vector<VerifyReport> run_verify_suite(const std::string& which,
                                                  std::uint64_t seed = 0, int jobs = 1,
                                                  int restarts = 0) {
    if (restarts < 0) throw std::domain_error("restarts must be >= 0");
    const bool all = which == "all";
    const int wkp_restarts = restarts > 0 ? restarts : 64;
    const int omega_restarts = restarts > 0 ? restarts : 48;
    std::vector<std::function<VerifyReport(std::uint64_t)>> tasks;

    if (all || which == "wkp") {
        for (int k = 2; k <= 6; ++k) {
            std::vector<double> ps{1.05, 1.2, 1.4, p_zero(k), 1.7, 1.9, 1.99};
            for (double p : ps) {
                if (!(p > 1.0) || !(p < 2.0)) continue; // p_zero(2) = 2 falls outside
                tasks.push_back([k, p, wkp_restarts](std::uint64_t s) {
                    return check_wkp(k, p, 1e-5, wkp_restarts, s);
                });
            }
        }
    }
    if (all || which == "theta") {
        for (int k = 2; k <= 30; ++k)
            for (double q : {0.51, 0.6, 0.75, 0.9, 0.99})
                tasks.push_back(
                    [k, q](std::uint64_t) { return check_theta_endpoint(k, q, 10000); });
    }
    if (all || which == "onevar") {
        for (int k = 3; k <= 30; ++k)
            for (double q : {0.51, 0.6, 0.75, 0.9, 0.99})
                tasks.push_back(
                    [k, q](std::uint64_t) { return check_one_var_endpoint(k, q, 10000); });
    }
    if (all || which == "prop") {
        for (int n = 2; n <= 8; ++n)
            tasks.push_back(
                [n](std::uint64_t s) { return check_proposition_random(n, 1000, s); });
    }
    if (all || which == "baum") {
        for (int n = 2; n <= 7; ++n)
            for (double q : {0.55, 0.6, 0.75, 0.9})
                tasks.push_back([n, q](std::uint64_t s) { return check_baum_random(n, q, 21, s); });
    }
    if (all || which == "conjecture") {
        for (int n = 2; n <= 3; ++n) {
            std::vector<double> ps{1.05, 1.2, 1.4, 1.6, p_zero(n), 1.9, 1.99};
            for (double p : ps) {
                if (!(p > 1.0) || !(p < 2.0)) continue;
                tasks.push_back([n, p, omega_restarts](std::uint64_t s) {
                    return check_conjecture(n, p, omega_restarts, s);
                });
                tasks.push_back([n, p, omega_restarts](std::uint64_t s) {
                    return check_omega_sandwich(n, p, omega_restarts, s);
                });
            }
        }
    }
    if (tasks.empty()) throw std::domain_error("unknown verify suite: " + which);

    std::vector<VerifyReport> reports(tasks.size());
    parallel_for(0, static_cast<int>(tasks.size()), jobs, [&](int i) {
        reports[i] = tasks[i](detail::mix_seed(seed, static_cast<std::uint64_t>(i)));
    });
    return reports;
}

inline bool all_pass(const std::vector<VerifyReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

inline std::string report_line(const VerifyReport& r) {
    std::string s = r.pass ? "[PASS] " : "[FAIL] ";
    s += r.check_name + "(" + r.parameters + ") margin=" + format_double(r.margin);
    for (const auto& [name, v] : r.values) s += " " + name + "=" + format_double(v);
    if (!r.references.empty()) {
        s += " vs";
        for (const auto& [name, v] : r.references) s += " " + name + "=" + format_double(v);
    }
    if (std::isinf(r.tolerance)) s += " [informational]";
    if (!r.notes.empty()) s += "  # " + r.notes;
    return s;
}

// Fields are comma-free by construction (names, space-separated parameters,
// formatted numbers), so plain joins are safe.
inline std::string reports_to_csv(const std::vector<VerifyReport>& reports) {
    std::string out = "check,parameters,pass,margin,tolerance,values,references,notes\n";
    for (const auto& r : reports) {
        out += r.check_name + "," + r.parameters + "," + (r.pass ? "true" : "false") + "," +
               format_double(r.margin) + "," + format_double(r.tolerance) + ",";
        for (size_t i = 0; i < r.values.size(); ++i)
            out += (i ? ";" : "") + r.values[i].first + "=" + format_double(r.values[i].second);
        out += ",";
        for (size_t i = 0; i < r.references.size(); ++i)
            out += (i ? ";" : "") + r.references[i].first + "=" +
                   format_double(r.references[i].second);
        out += "," + r.notes + "\n";
    }
    return out;
}

} // namespace permlp
