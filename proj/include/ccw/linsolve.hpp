#pragma once

#include <cstddef>
#include <vector>

#include "ccw/ratfunc.hpp"

namespace ccw {

using RFMatrix = std::vector<std::vector<RationalFunction>>;
using QMatrix = std::vector<std::vector<Rational>>;
using QVector = std::vector<Rational>;

/// Unique solution of A x = b over the fraction field, A of size m x n with
/// m >= n. Rows are cleared of denominators, then eliminated fraction-free
/// (Bareiss) with exact polynomial division.
///
/// Throws SingularSystem when A has rank < n (as a rational-function matrix)
/// and InconsistentSystem when the surplus equations are not satisfied.
std::vector<RationalFunction> solve_unique(const RFMatrix& a, const std::vector<RationalFunction>& b);

/// Determinant of a square polynomial matrix (Bareiss).
Polynomial determinant(std::vector<std::vector<Polynomial>> m);

// Exact rational linear algebra at points.

std::size_t rank(QMatrix m);
/// Basis of {v : M v = 0}; `cols` is needed when M has no rows.
std::vector<QVector> kernel(const QMatrix& m, std::size_t cols);
Rational determinant(QMatrix m);
/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(QMatrix& m);

}  // namespace ccw
