#ifndef CONVAC_LINALG_HPP
#define CONVAC_LINALG_HPP

#include <vector>

#include "convac/rational.hpp"
#include "convac/tensor.hpp"

namespace convac {

// Exact matrix rank by fraction-preserving Gaussian elimination. Pivots are
// chosen by largest absolute value to limit coefficient growth.
int rank_exact(const Matrix<Rational>& m);

bool is_nonsingular(const Matrix<Rational>& m);

// Exact inverse via Gauss-Jordan; throws std::invalid_argument if singular.
Matrix<Rational> invert_exact(const Matrix<Rational>& m);

// Singular values in descending order (double precision).
std::vector<double> singular_values(const Matrix<double>& m);

// Numeric rank: the number of singular values above tol * max(rows, cols) * sigma_max.
// Throws std::invalid_argument on non-finite entries or tol <= 0.
int rank_numeric(const Matrix<double>& m, double tol = 1e-9);

}  // namespace convac

#endif
