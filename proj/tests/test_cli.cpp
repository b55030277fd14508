// End-to-end tests for the perm binary. The test runner exports PERM_BIN with
// the binary's path; commands run through the shell so stdin piping and exit
// codes behave as they would for a user.
#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "permlp/approx.hpp"
#include "permlp/bounds.hpp"
#include "permlp/matrix.hpp"

using namespace permlp;
using Catch::Approx;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& cmd) {
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string bin() {
    const char* b = std::getenv("PERM_BIN");
    REQUIRE(b != nullptr);
    return b;
}

const char* kI3 = "1,0,0\\n0,1,0\\n0,0,1\\n";
const char* kThird3 =
    "0.3333333333333333,0.3333333333333333,0.3333333333333333\\n"
    "0.3333333333333333,0.3333333333333333,0.3333333333333333\\n"
    "0.3333333333333333,0.3333333333333333,0.3333333333333333\\n";

std::string feed(const std::string& printf_body, const std::string& args) {
    return "printf '" + printf_body + "' | " + bin() + " " + args;
}

} // namespace

TEST_CASE("exact reads CSV from stdin and a structured file argument") {
    auto r = run(feed(kI3, "exact 2>/dev/null"));
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1\n");

    r = run(feed("{\"n\":2,\"rows\":[[1,2],[3,4]]}", "exact 2>/dev/null"));
    CHECK(r.exit_code == 0);
    CHECK(r.out == "10\n");

    const auto path = std::filesystem::temp_directory_path() / "permlp_cli_mat.csv";
    {
        std::ofstream f(path);
        f << "1,2\n3,4\n";
    }
    r = run(bin() + " exact " + path.string() + " --format object 2>/dev/null");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["n"] == 2);
    CHECK(j["permanent"].get<double>() == 10.0);
    std::filesystem::remove(path);
}

TEST_CASE("exit codes: usage 2, domain 1") {
    CHECK(run(bin() + " 2>/dev/null").exit_code == 2);
    CHECK(run(bin() + " frobnicate 2>/dev/null").exit_code == 2);
    CHECK(run(bin() + " bound 2>/dev/null").exit_code == 2);           // missing --n
    CHECK(run(feed(kI3, "ascend 2>/dev/null")).exit_code == 2);        // missing --q
    CHECK(run(feed("1,2\\n3\\n", "exact 2>/dev/null")).exit_code == 1); // ragged rows
    CHECK(run(feed(kI3, "ascend --q 1.5 2>/dev/null")).exit_code == 1); // q out of range
    CHECK(run(bin() + " bound --n 3 --p 0.5 2>/dev/null").exit_code == 1);
    CHECK(run(bin() + " --help 2>/dev/null").exit_code == 0);
}

TEST_CASE("bound object output matches the library bit for bit") {
    const auto r = run(bin() + " bound --n 3 --p 1.9 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["lower"].get<double>() == u_lower(3, 1.9));
    CHECK(j["upper_product"].get<double>() == u_upper_product(3, 1.9));
    CHECK(j["upper_closed"].get<double>() == u_upper_closed(3, 1.9).value);
    CHECK(j["regime"] == "open_interval");
}

TEST_CASE("bound csv and object formats carry identical numbers") {
    const auto obj = json::parse(run(bin() + " bound --n 4 --p 1.8 2>/dev/null").out);
    const auto csv = run(bin() + " bound --n 4 --p 1.8 --format csv 2>/dev/null").out;
    REQUIRE(csv.rfind("p,lower,upper_product,upper_closed,regime\n", 0) == 0);
    const std::string row = csv.substr(csv.find('\n') + 1);
    double p, lo, up, uc;
    char regime[32];
    REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf,%31s", &p, &lo, &up, &uc, regime) == 5);
    CHECK(p == obj["p"].get<double>());
    CHECK(lo == obj["lower"].get<double>());
    CHECK(up == obj["upper_product"].get<double>());
    CHECK(uc == obj["upper_closed"].get<double>());
}

TEST_CASE("bound sweep emits one CSV row per sample") {
    const auto r = run(bin() + " bound --n 3 --sweep 1.8 1.95 3 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "p,lower,upper_product,upper_closed,regime");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    CHECK(rows.front().rfind("1.8,", 0) == 0);
    CHECK(rows.back().rfind("1.95,", 0) == 0);
    CHECK(run(bin() + " bound --n 3 --sweep 1.8 1.9 1 2>/dev/null").exit_code == 1);
}

TEST_CASE("approx matches the library and flags structural zeros") {
    const auto r = run(feed(kThird3, "approx 2>/dev/null"));
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    const auto ref = approximate_permanent(NonnegMatrix::constant(3, 1.0 / 3));
    CHECK(j["lo"].get<double>() == ref.lo);
    CHECK(j["hi"].get<double>() == ref.hi);
    CHECK(j["estimate"].get<double>() == ref.estimate);
    CHECK(j["case"] == "small_matching");
    CHECK(j["lo"].get<double>() <= 6.0 / 27 + 1e-15);
    CHECK(j["hi"].get<double>() >= 6.0 / 27 - 1e-15);
    CHECK(j["sigma"].size() == 3);

    const auto zero = run(feed("0,0\\n1,1\\n", "approx 2>/dev/null"));
    CHECK(zero.exit_code == 4);
    const json jz = json::parse(zero.out);
    CHECK(jz["lo"].get<double>() == 0.0);
    CHECK(jz["hi"].get<double>() == 0.0);
    CHECK(jz["case"] == "zero");

    // support without total support: scaling cannot converge
    const auto stuck = run(feed("1,1,1\\n0,1,1\\n0,0,1\\n", "approx --iters 2000 2>/dev/null"));
    CHECK(stuck.exit_code == 5);
}

TEST_CASE("scale outputs the scaled matrix and reports non-convergence") {
    auto r = run(feed("2,0\\n0,3\\n", "scale --format csv 2>/dev/null"));
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1,0\n0,1\n");

    r = run(feed("2,0\\n0,3\\n", "scale 2>/dev/null"));
    const json j = json::parse(r.out);
    CHECK(j["converged"].get<bool>());
    CHECK(j["log_scale_product"].get<double>() == Approx(-std::log(6.0)).epsilon(1e-14));

    r = run(feed("1,0,0\\n1,0,0\\n1,1,1\\n", "scale --iters 500 2>/dev/null"));
    CHECK(r.exit_code == 5);
    CHECK(json::parse(r.out)["converged"].get<bool>() == false);
}

TEST_CASE("match reports the 1-based max-product permutation") {
    const auto r = run(feed("0.9,0.1\\n0.2,0.8\\n", "match 2>/dev/null"));
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["sigma"] == json::array({1, 2}));
    CHECK(j["product"].get<double>() == Approx(0.72).epsilon(1e-15));
}

TEST_CASE("ascend emits a nondecreasing iteration,value trace") {
    const auto r = run(feed("0.9,0.1\\n0.1,0.9\\n", "ascend --q 0.6 --iters 5 2>/dev/null"));
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "iteration,value");
    double prev = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stoi(line.substr(0, comma)) == rows);
        const double v = std::strtod(line.c_str() + comma + 1, nullptr);
        CHECK(v >= prev - 1e-11 * std::max(prev, 0.0));
        prev = v;
        ++rows;
    }
    CHECK(rows >= 2);
}

TEST_CASE("verify: reports, formats, determinism, required seed") {
    const auto r = run(bin() + " verify prop --seed 7 2>/dev/null");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[PASS] proposition_random(") != std::string::npos);
    CHECK(r.out.find("check,parameters,pass,margin,tolerance,values,references,notes") !=
          std::string::npos);

    const auto again = run(bin() + " verify prop --seed 7 2>/dev/null");
    CHECK(r.out == again.out);
    const auto jobs3 = run(bin() + " verify prop --seed 7 --jobs 3 2>/dev/null");
    CHECK(r.out == jobs3.out);

    const auto obj = run(bin() + " verify prop --seed 7 --format object 2>/dev/null");
    const json arr = json::parse(obj.out);
    REQUIRE(arr.is_array());
    CHECK(arr.size() == 7);
    for (const auto& rep : arr) CHECK(rep["pass"].get<bool>());

    CHECK(run(bin() + " verify prop 2>/dev/null").exit_code == 2);       // seed required
    CHECK(run(bin() + " verify bogus --seed 1 2>/dev/null").exit_code == 2);
}

TEST_CASE("guarantee prints the curve up to n") {
    const auto r = run(bin() + " guarantee --n 6 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,q0,factor,log_factor,improvement,log_improvement");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
    REQUIRE(rows.size() == 5);
    CHECK(rows[3].rfind("5,", 0) == 0);
    CHECK(rows[3].find(",32,") != std::string::npos); // factor(5) = 2^5 exactly
}

TEST_CASE("PERM_LOG gates stderr diagnostics") {
    const auto quiet = run(feed(kI3, "exact 2>&1 1>/dev/null"));
    CHECK(quiet.out.empty());
    const auto loud = run("printf '" + std::string(kI3) + "' | PERM_LOG=info " + bin() +
                          " exact 2>&1 1>/dev/null");
    CHECK(loud.out.find("perm:") != std::string::npos);
}
