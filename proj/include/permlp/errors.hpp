#pragma once
#include <stdexcept>
#include <string>

namespace permlp {

// Matrix text could not be read in the declared format.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// An entry violates the nonnegativity invariant.
struct NegativeEntryError : std::runtime_error {
    explicit NegativeEntryError(const std::string& what) : std::runtime_error(what) {}
};

// Input rows are ragged or the matrix is not square.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Dimension outside the guard of an exact evaluator, or an index out of range.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroRowError : std::runtime_error {
    explicit ZeroRowError(const std::string& what) : std::runtime_error(what) {}
};

struct NotStochasticError : std::runtime_error {
    explicit NotStochasticError(const std::string& what) : std::runtime_error(what) {}
};

// The positive support of the matrix admits no perfect matching (permanent is 0).
struct NoSupportError : std::runtime_error {
    explicit NoSupportError(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergenceError : std::runtime_error {
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Alternating-sign accumulation cancelled beyond the tolerated level.
struct NumericInstabilityError : std::runtime_error {
    explicit NumericInstabilityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace permlp
