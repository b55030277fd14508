#pragma once
// Dense nonnegative square matrices, stochastic vectors, lp norms and the
// row-rescaling identities shared by every evaluator in this library.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "permlp/errors.hpp"

namespace permlp {

// Square matrix of finite nonnegative reals, row-major.
struct NonnegMatrix {
    int n = 0;
    std::vector<double> a;

    NonnegMatrix() = default;
    NonnegMatrix(int dim, double fill) : n(dim), a(static_cast<size_t>(dim) * dim, fill) {
        if (dim < 1) throw ShapeError("matrix dimension must be >= 1");
        if (!(fill >= 0.0) || !std::isfinite(fill))
            throw NegativeEntryError("fill value must be finite and >= 0");
    }

    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }

    std::span<const double> row(int i) const {
        return {a.data() + static_cast<size_t>(i) * n, static_cast<size_t>(n)};
    }
    std::span<double> row(int i) {
        return {a.data() + static_cast<size_t>(i) * n, static_cast<size_t>(n)};
    }

    static NonnegMatrix identity(int dim) {
        NonnegMatrix m(dim, 0.0);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static NonnegMatrix constant(int dim, double value) { return NonnegMatrix(dim, value); }

    static NonnegMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        const int dim = static_cast<int>(rows.size());
        if (dim < 1) throw ShapeError("matrix must have at least one row");
        NonnegMatrix m(dim, 0.0);
        for (int i = 0; i < dim; ++i) {
            if (static_cast<int>(rows[i].size()) != dim)
                throw ShapeError("row " + std::to_string(i) + " has " +
                                 std::to_string(rows[i].size()) + " entries, expected " +
                                 std::to_string(dim));
            for (int j = 0; j < dim; ++j) {
                const double v = rows[i][j];
                if (!std::isfinite(v))
                    throw ParseError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") is not finite");
                if (v < 0.0)
                    throw NegativeEntryError("entry (" + std::to_string(i) + "," +
                                             std::to_string(j) + ") is negative");
                m(i, j) = v;
            }
        }
        return m;
    }

    bool operator==(const NonnegMatrix& other) const = default;
};

// Stochastic vector: nonnegative coordinates summing to 1.
struct SimplexPoint {
    std::vector<double> y;

    int size() const { return static_cast<int>(y.size()); }

    static SimplexPoint basis(int k, int i) {
        SimplexPoint s;
        s.y.assign(k, 0.0);
        s.y[i] = 1.0;
        return s;
    }

    static SimplexPoint uniform(int k) {
        SimplexPoint s;
        s.y.assign(k, 1.0 / k);
        return s;
    }

    static SimplexPoint from_coords(std::vector<double> coords, double tol = 1e-12) {
        if (coords.empty()) throw ShapeError("simplex point must have dimension >= 1");
        double sum = 0.0;
        for (double c : coords) {
            if (!(c >= 0.0) || !std::isfinite(c))
                throw NegativeEntryError("simplex coordinate must be finite and >= 0");
            sum += c;
        }
        if (std::fabs(sum - 1.0) > tol)
            throw NotStochasticError("coordinates sum to " + std::to_string(sum) + ", not 1");
        SimplexPoint s;
        s.y = std::move(coords);
        return s;
    }
};

// Exponent pair (p, q = 1/p); q is always derived, never stored.
struct LpRowSpec {
    double p;
    explicit LpRowSpec(double p_) : p(p_) {
        if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    }
    double q() const { return 1.0 / p; }
};

// lp norm with max-factoring so large or tiny entries neither overflow nor
// underflow the power sum. p = infinity gives the max norm.
inline double lp_norm(std::span<const double> v, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    if (m == 0.0) return 0.0;
    if (std::isinf(p)) return m;
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

inline double lp_norm(const std::vector<double>& v, double p) {
    return lp_norm(std::span<const double>(v.data(), v.size()), p);
}

// Rescale every row to unit lp norm. Returns the rescaled matrix together
// with the original row norms, so per(M) = per(out) * prod(scales).
inline std::pair<NonnegMatrix, std::vector<double>> normalize_rows_lp(const NonnegMatrix& m,
                                                                      double p) {
    NonnegMatrix out = m;
    std::vector<double> scales(m.n);
    for (int i = 0; i < m.n; ++i) {
        const double norm = lp_norm(m.row(i), p);
        if (norm == 0.0) throw ZeroRowError("row " + std::to_string(i) + " is all-zero");
        scales[i] = norm;
        for (int j = 0; j < m.n; ++j) out(i, j) = m(i, j) / norm;
    }
    return {std::move(out), std::move(scales)};
}

struct NormRatio {
    double ratio;
    bool within_bounds;
};

// ||v||_p / ||v||_p' for p < p', checked against [1, n^(1/p - 1/p')].
inline NormRatio norm_ratio_check(std::span<const double> v, double p, double p_prime) {
    if (!(p >= 1.0) || !(p_prime > p))
        throw std::invalid_argument("norm_ratio_check requires 1 <= p < p'");
    const double np = lp_norm(v, p);
    const double npp = lp_norm(v, p_prime);
    if (npp == 0.0) throw ZeroRowError("norm ratio of the zero vector is undefined");
    const double ratio = np / npp;
    const double upper = std::pow(static_cast<double>(v.size()), 1.0 / p - 1.0 / p_prime);
    const double slack = 1e-12;
    const bool ok = ratio >= 1.0 - slack && ratio <= upper + slack * std::max(1.0, upper);
    return {ratio, ok};
}

inline NormRatio norm_ratio_check(const std::vector<double>& v, double p, double p_prime) {
    return norm_ratio_check(std::span<const double>(v.data(), v.size()), p, p_prime);
}

inline bool is_stochastic(const NonnegMatrix& m, double tol = 1e-9) {
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += m(i, j);
        if (std::fabs(s - 1.0) > tol) return false;
    }
    return true;
}

inline bool is_doubly_stochastic(const NonnegMatrix& m, double tol = 1e-9) {
    if (!is_stochastic(m, tol)) return false;
    for (int j = 0; j < m.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.n; ++i) s += m(i, j);
        if (std::fabs(s - 1.0) > tol) return false;
    }
    return true;
}

// Entry-wise q-th power; 0^q stays exactly 0.
inline NonnegMatrix elementwise_pow(const NonnegMatrix& m, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("elementwise_pow requires q > 0");
    NonnegMatrix out = m;
    for (double& x : out.a) x = std::pow(x, q);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing and serialization.
//
// CSV: one row per line, comma-separated decimal literals, no header.
// Structured: {"n": int, "rows": [[...], ...]}.
// ---------------------------------------------------------------------------

enum class MatrixFormat { csv, structured };

namespace detail {

inline double parse_entry(const std::string& tok, int line_no) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == begin || (end && *end != '\0'))
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + tok + "'");
    if (!std::isfinite(v))
        throw ParseError("line " + std::to_string(line_no) + ": non-finite value '" + tok + "'");
    if (v < 0.0)
        throw NegativeEntryError("line " + std::to_string(line_no) + ": negative entry " + tok);
    return v;
}

} // namespace detail

inline NonnegMatrix parse_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (blank) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(detail::parse_entry(tok, line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no matrix rows found");
    const size_t width = rows.front().size();
    for (size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != width)
            throw ShapeError("ragged input: row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(width));
    if (rows.size() != width)
        throw ShapeError("matrix is " + std::to_string(rows.size()) + "x" + std::to_string(width) +
                         ", expected square");
    return NonnegMatrix::from_rows(rows);
}

inline NonnegMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("rows"))
        throw ParseError("structured matrix must be an object with fields 'n' and 'rows'");
    const int n = j.at("n").get<int>();
    const auto& jr = j.at("rows");
    if (!jr.is_array() || static_cast<int>(jr.size()) != n)
        throw ShapeError("'rows' must be an array of length n");
    std::vector<std::vector<double>> rows;
    rows.reserve(jr.size());
    for (const auto& r : jr) {
        if (!r.is_array() || static_cast<int>(r.size()) != n)
            throw ShapeError("each row must be an array of length n");
        rows.push_back(r.get<std::vector<double>>());
    }
    return NonnegMatrix::from_rows(rows);
}

inline NonnegMatrix parse_matrix(std::istream& in, MatrixFormat format) {
    if (format == MatrixFormat::csv) return parse_matrix_csv(in);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("structured parse failure: ") + e.what());
    }
    return matrix_from_json(j);
}

inline NonnegMatrix parse_matrix(const std::string& text, MatrixFormat format) {
    std::istringstream in(text);
    return parse_matrix(in, format);
}

// Shortest decimal that round-trips binary64.
inline std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string to_csv(const NonnegMatrix& m) {
    std::string out;
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json(const NonnegMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.n; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return {{"n", m.n}, {"rows", std::move(rows)}};
}

} // namespace permlp
