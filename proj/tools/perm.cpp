// perm: command-line front end for the permanent toolkit.
//
// Subcommands: exact, bound, approx, scale, match, ascend, verify, guarantee.
// Matrices are read from a file argument or standard input, in CSV or the
// {"n":..,"rows":[[..]]} structured form (auto-detected by a leading '{').
// Human-readable numbers print 12 significant digits; --format csv and
// --format object both use shortest-round-trip encoding, so they carry
// identical binary64 content.
//
// Exit codes: 0 success, 1 domain error, 2 usage error, 3 failed proven-claim
// verification, 4 structurally zero permanent (approx), 5 scaling
// non-convergence.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "permlp/approx.hpp"
#include "permlp/ascent.hpp"
#include "permlp/bounds.hpp"
#include "permlp/errors.hpp"
#include "permlp/matrix.hpp"
#include "permlp/parallel.hpp"
#include "permlp/permanent.hpp"
#include "permlp/sinkhorn.hpp"
#include "permlp/verify.hpp"

using json = nlohmann::ordered_json;
using namespace permlp;

namespace {

int log_verbosity() {
    const char* env = std::getenv("PERM_LOG");
    if (env == nullptr || *env == '\0' || std::string(env) == "0") return 0;
    return std::string(env) == "debug" ? 2 : 1;
}

void log_info(const std::string& msg) {
    if (log_verbosity() >= 1) std::cerr << "perm: " << msg << "\n";
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

NonnegMatrix read_matrix(const std::string& path) {
    std::string text;
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open input file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool structured = first != std::string::npos && text[first] == '{';
    const NonnegMatrix m =
        parse_matrix(text, structured ? MatrixFormat::structured : MatrixFormat::csv);
    log_info("read " + std::to_string(m.n) + "x" + std::to_string(m.n) + " matrix (" +
             (structured ? "structured" : "csv") + ")");
    return m;
}

std::vector<int> one_based(const std::vector<int>& sigma) {
    std::vector<int> out(sigma.size());
    for (size_t i = 0; i < sigma.size(); ++i) out[i] = sigma[i] + 1;
    return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_exact(const std::string& path, const std::string& format) {
    const NonnegMatrix m = read_matrix(path);
    const double value = permanent(m);
    if (format == "object") print_json({{"n", m.n}, {"permanent", value}});
    else if (format == "csv") std::cout << format_double(value) << "\n";
    else std::cout << fmt12(value) << "\n";
    return 0;
}

json bound_to_json(const BoundReport& r) {
    return {{"n", r.n},
            {"p", r.p},
            {"lower", r.lower},
            {"upper_product", r.upper_product},
            {"upper_closed", r.upper_closed},
            {"regime", to_string(r.regime)}};
}

std::string bound_to_csv_row(const BoundReport& r) {
    return format_double(r.p) + "," + format_double(r.lower) + "," +
           format_double(r.upper_product) + "," + format_double(r.upper_closed) + "," +
           to_string(r.regime);
}

int cmd_bound(int n, double p, bool have_p, const std::vector<double>& sweep,
              const std::string& format) {
    if (!sweep.empty()) {
        const double from = sweep[0], to = sweep[1];
        const int steps = static_cast<int>(sweep[2]);
        if (steps < 2 || sweep[2] != steps)
            throw std::domain_error("--sweep needs an integer step count >= 2");
        if (!(from <= to)) throw std::domain_error("--sweep needs p_from <= p_to");
        std::vector<BoundReport> rows;
        for (int i = 0; i < steps; ++i)
            rows.push_back(make_bound_report(n, from + (to - from) * i / (steps - 1)));
        if (format == "object") {
            json arr = json::array();
            for (const auto& r : rows) arr.push_back(bound_to_json(r));
            print_json(arr);
        } else {
            std::cout << "p,lower,upper_product,upper_closed,regime\n";
            for (const auto& r : rows) std::cout << bound_to_csv_row(r) << "\n";
        }
        return 0;
    }
    if (!have_p) throw CLI::ValidationError("bound", "--p is required unless --sweep is given");
    const BoundReport r = make_bound_report(n, p);
    if (format == "csv") {
        std::cout << "p,lower,upper_product,upper_closed,regime\n"
                  << bound_to_csv_row(r) << "\n";
    } else {
        print_json(bound_to_json(r)); // structured object is the default here
    }
    return 0;
}

int cmd_approx(const std::string& path, double tol, int iters, const std::string& format) {
    const NonnegMatrix m = read_matrix(path);
    const ApproxResult res = approximate_permanent(m, tol, iters);
    const int iterations = res.scaling ? res.scaling->iterations : 0;
    if (format == "csv") {
        std::cout << "n,lo,hi,estimate,guarantee_factor,case,residual\n"
                  << m.n << "," << format_double(res.lo) << "," << format_double(res.hi) << ","
                  << format_double(res.estimate) << "," << format_double(res.guarantee_factor)
                  << "," << to_string(res.kind) << "," << format_double(res.residual) << "\n";
    } else {
        json j{{"n", m.n},
               {"lo", res.lo},
               {"hi", res.hi},
               {"estimate", res.estimate},
               {"guarantee_factor", res.guarantee_factor},
               {"case", to_string(res.kind)},
               {"residual", res.residual},
               {"scaling_iterations", iterations},
               {"below_asymptotic_n", res.below_asymptotic_n}};
        if (res.kind != ApproxCase::zero) j["sigma"] = one_based(res.matching.sigma);
        print_json(j);
    }
    if (res.kind == ApproxCase::zero) {
        log_info("permanent is structurally zero (no perfect matching in the support)");
        return 4;
    }
    return 0;
}

int cmd_scale(const std::string& path, double tol, int iters, const std::string& format) {
    const NonnegMatrix m = read_matrix(path);
    const ScalingResult res = sinkhorn_scale(m, tol, iters);
    if (format == "csv") {
        std::cout << to_csv(res.scaled);
    } else {
        print_json({{"n", m.n},
                    {"scaled", to_json(res.scaled)["rows"]},
                    {"row_scale", res.row_scale},
                    {"col_scale", res.col_scale},
                    {"log_scale_product", res.log_scale_product},
                    {"residual", res.residual},
                    {"iterations", res.iterations},
                    {"converged", res.converged}});
    }
    if (!res.converged) {
        std::cerr << "perm: scaling stopped at residual " << fmt12(res.residual)
                  << " after " << res.iterations << " iterations\n";
        return 5;
    }
    return 0;
}

int cmd_match(const std::string& path, const std::string& format) {
    const NonnegMatrix m = read_matrix(path);
    const MatchingResult res = max_product_matching(m);
    const double product = std::exp(res.log_product);
    if (format == "csv") {
        std::cout << "sigma,log_product,product\n";
        std::string sigma;
        for (size_t i = 0; i < res.sigma.size(); ++i)
            sigma += (i ? " " : "") + std::to_string(res.sigma[i] + 1);
        std::cout << sigma << "," << format_double(res.log_product) << ","
                  << format_double(product) << "\n";
    } else {
        print_json({{"n", m.n},
                    {"sigma", one_based(res.sigma)},
                    {"log_product", res.log_product},
                    {"product", product}});
    }
    return 0;
}

int cmd_ascend(const std::string& path, double q, int iters, double tol,
               const std::string& format) {
    const NonnegMatrix m = read_matrix(path);
    const AscentTrace trace = baum_eagon_iterate(m, q, iters, tol);
    if (format == "object") {
        print_json({{"n", m.n},
                    {"q", q},
                    {"converged", trace.converged},
                    {"values", trace.values},
                    {"final", to_json(trace.iterates.back())["rows"]}});
    } else {
        std::cout << "iteration,value\n";
        for (size_t i = 0; i < trace.values.size(); ++i)
            std::cout << i << "," << format_double(trace.values[i]) << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int jobs, int restarts,
               const std::string& format) {
    log_info("verify suite=" + suite + " seed=" + std::to_string(seed) +
             " jobs=" + std::to_string(jobs));
    const auto reports = run_verify_suite(suite, seed, jobs, restarts);
    if (format == "object") {
        json arr = json::array();
        for (const auto& r : reports) {
            json values = json::object(), refs = json::object();
            for (const auto& [k, v] : r.values) values[k] = v;
            for (const auto& [k, v] : r.references) refs[k] = v;
            arr.push_back({{"check", r.check_name},
                           {"parameters", r.parameters},
                           {"pass", r.pass},
                           {"margin", r.margin},
                           {"tolerance", r.tolerance},
                           {"values", values},
                           {"references", refs},
                           {"notes", r.notes}});
        }
        print_json(arr);
    } else if (format == "csv") {
        std::cout << reports_to_csv(reports);
    } else {
        for (const auto& r : reports) std::cout << report_line(r) << "\n";
        std::cout << "\n" << reports_to_csv(reports);
    }
    return all_pass(reports) ? 0 : 3;
}

int cmd_guarantee(int n, const std::string& format) {
    const auto rows = guarantee_curve(2, n);
    if (format == "object") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"n", r.n},
                           {"q0", r.q0},
                           {"factor", r.factor},
                           {"log_factor", r.log_factor},
                           {"improvement", r.improvement},
                           {"log_improvement", r.log_improvement}});
        print_json(arr);
    } else {
        std::cout << "n,q0,factor,log_factor,improvement,log_improvement\n";
        for (const auto& r : rows)
            std::cout << r.n << "," << format_double(r.q0) << "," << format_double(r.factor)
                      << "," << format_double(r.log_factor) << "," << format_double(r.improvement)
                      << "," << format_double(r.log_improvement) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"permanent bounds, scaling, ascent and verification toolkit"};
    app.require_subcommand(1);

    std::string format; // per-subcommand; empty = human default
    std::string path;
    int n = 0;
    double p = 0.0, q = 0.0, tol = 0.0;
    std::uint64_t seed = 0;
    int iters = 0, jobs = default_jobs(), restarts = 0;
    std::vector<double> sweep;
    std::string suite;

    const auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "object"}));
    };
    const auto add_matrix = [&](CLI::App* sub) {
        sub->add_option("matrix", path, "matrix file (CSV or structured); default stdin");
    };

    auto* exact = app.add_subcommand("exact", "exact permanent (naive/Ryser)");
    add_matrix(exact);
    add_format(exact);

    auto* bound = app.add_subcommand("bound", "closed-form lp-row permanent bounds");
    bound->add_option("--n", n, "matrix dimension")->required();
    auto* p_opt = bound->add_option("--p", p, "row exponent");
    bound->add_option("--sweep", sweep, "p_from p_to steps: CSV sweep over p")->expected(3);
    add_format(bound);

    auto* approx = app.add_subcommand("approx", "certified permanent interval via scaling");
    add_matrix(approx);
    approx->add_option("--tol", tol, "scaling residual tolerance")->default_val(1e-8);
    approx->add_option("--iters", iters, "scaling iteration budget")->default_val(100000);
    add_format(approx);

    auto* scale = app.add_subcommand("scale", "Sinkhorn scaling to doubly stochastic form");
    add_matrix(scale);
    scale->add_option("--tol", tol, "residual tolerance")->default_val(1e-8);
    scale->add_option("--iters", iters, "iteration budget")->default_val(100000);
    add_format(scale);

    auto* match = app.add_subcommand("match", "maximum-product perfect matching");
    add_matrix(match);
    add_format(match);

    auto* ascend = app.add_subcommand("ascend", "permanent ascent iteration");
    add_matrix(ascend);
    ascend->add_option("--q", q, "entry exponent in (0,1]")->required();
    ascend->add_option("--iters", iters, "iteration budget")->default_val(100);
    ascend->add_option("--tol", tol, "relative flatness stop tolerance")->default_val(1e-12);
    add_format(ascend);

    auto* verify = app.add_subcommand("verify", "run verification reports");
    verify->add_option("suite", suite, "wkp|theta|onevar|prop|baum|conjecture|all")
        ->required()
        ->check(CLI::IsMember(verify_suite_names()));
    verify->add_option("--seed", seed, "base seed for randomized checks")->required();
    verify->add_option("--jobs", jobs, "worker threads")->default_val(default_jobs());
    verify->add_option("--restarts", restarts, "override search restarts (0 = defaults)")
        ->default_val(0);
    add_format(verify);

    auto* guarantee = app.add_subcommand("guarantee", "approximation guarantee curve 2..n");
    guarantee->add_option("--n", n, "largest dimension")->required();
    add_format(guarantee);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(exact)) return cmd_exact(path, format);
        if (app.got_subcommand(bound)) return cmd_bound(n, p, !p_opt->empty(), sweep, format);
        if (app.got_subcommand(approx)) return cmd_approx(path, tol, iters, format);
        if (app.got_subcommand(scale)) return cmd_scale(path, tol, iters, format);
        if (app.got_subcommand(match)) return cmd_match(path, format);
        if (app.got_subcommand(ascend)) return cmd_ascend(path, q, iters, tol, format);
        if (app.got_subcommand(verify)) return cmd_verify(suite, seed, jobs, restarts, format);
        if (app.got_subcommand(guarantee)) return cmd_guarantee(n, format);
    } catch (const CLI::Error& e) {
        std::cerr << "perm: " << e.what() << "\n";
        return 2;
    } catch (const NonConvergenceError& e) {
        std::cerr << "perm: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "perm: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
