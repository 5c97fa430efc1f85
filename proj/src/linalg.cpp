#include "convac/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace convac {

namespace {

int abs_cmp(const Rational& a, const Rational& b) {
    // Compares |a| and |b| without allocating canonical temporaries.
    Rational aa = abs(a);
    Rational bb = abs(b);
    return cmp(aa, bb);
}

}  // namespace

int rank_exact(const Matrix<Rational>& m) {
    Matrix<Rational> work = m;
    const int rows = work.rows;
    const int cols = work.cols;
    int rank = 0;
    int pivot_row = 0;
    for (int col = 0; col < cols && pivot_row < rows; ++col) {
        int best = -1;
        for (int r = pivot_row; r < rows; ++r) {
            if (work(r, col) == 0) continue;
            if (best < 0 || abs_cmp(work(r, col), work(best, col)) > 0) best = r;
        }
        if (best < 0) continue;
        if (best != pivot_row)
            for (int c = col; c < cols; ++c) std::swap(work(pivot_row, c), work(best, c));
        const Rational pivot = work(pivot_row, col);
        for (int r = pivot_row + 1; r < rows; ++r) {
            if (work(r, col) == 0) continue;
            const Rational factor = work(r, col) / pivot;
            work(r, col) = 0;
            for (int c = col + 1; c < cols; ++c) work(r, c) -= factor * work(pivot_row, c);
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

bool is_nonsingular(const Matrix<Rational>& m) {
    return m.rows == m.cols && rank_exact(m) == m.rows;
}

Matrix<Rational> invert_exact(const Matrix<Rational>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("cannot invert a non-square matrix");
    const int n = m.rows;
    Matrix<Rational> work = m;
    Matrix<Rational> inv = Matrix<Rational>::identity(n);
    for (int col = 0; col < n; ++col) {
        int best = -1;
        for (int r = col; r < n; ++r) {
            if (work(r, col) == 0) continue;
            if (best < 0 || abs_cmp(work(r, col), work(best, col)) > 0) best = r;
        }
        if (best < 0) throw std::invalid_argument("matrix is singular");
        if (best != col)
            for (int c = 0; c < n; ++c) {
                std::swap(work(col, c), work(best, c));
                std::swap(inv(col, c), inv(best, c));
            }
        const Rational pivot = work(col, col);
        for (int c = 0; c < n; ++c) {
            work(col, c) /= pivot;
            inv(col, c) /= pivot;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || work(r, col) == 0) continue;
            const Rational factor = work(r, col);
            for (int c = 0; c < n; ++c) {
                work(r, c) -= factor * work(col, c);
                inv(r, c) -= factor * inv(col, c);
            }
        }
    }
    return inv;
}

std::vector<double> singular_values(const Matrix<double>& m) {
    Eigen::MatrixXd em(m.rows, m.cols);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) {
            if (!std::isfinite(m(r, c)))
                throw std::invalid_argument("non-finite matrix entry");
            em(r, c) = m(r, c);
        }
    if (m.rows == 0 || m.cols == 0) return {};
    // JacobiSVD rather than BDCSVD: the 3.4.0 divide-and-conquer kernel can
    // index out of bounds on rank-deficient inputs with a wide value spread,
    // returning spurious large singular values. The matrices here stay small.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(em);
    const auto& sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

int rank_numeric(const Matrix<double>& m, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
    const std::vector<double> sv = singular_values(m);
    if (sv.empty()) return 0;
    const double cutoff = tol * static_cast<double>(std::max(m.rows, m.cols)) * sv.front();
    int rank = 0;
    for (double s : sv)
        if (s > cutoff) ++rank;
    return rank;
}

}  // namespace convac
