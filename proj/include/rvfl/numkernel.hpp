#pragma once

// Dense linear algebra used by the RVFL output layer: Moore-Penrose
// pseudoinverse and minimum-norm least squares, both through the SVD.
//
// Singular values below  max(rows, cols) * sigma_max * eps  are treated as
// zero. All functions are pure; nothing here keeps state between calls.

#include <Eigen/Dense>

#include <cstddef>

namespace rvfl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws InvalidInput if the matrix is empty or holds NaN/Inf.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

/// Rank cutoff used by every solver in this module.
double singular_value_cutoff(std::size_t rows, std::size_t cols, double sigma_max);

Matrix pseudoinverse(const Matrix& m);

/// Minimum-norm minimizer of ||D beta - y||_2.
Vector solve_least_squares(const Matrix& design, const Vector& y);

/// Factorizes a design matrix once and returns the minimum-norm least-squares
/// solution for any leading block of its columns.
///
/// With D = QR (Householder, no pivoting) the first k columns satisfy
/// D_k = Q R_k, so D_k^+ y = R_k^+ (Q^T y) and the singular values of R_k are
/// those of D_k. Each solve is an SVD of the small triangular block instead of
/// the tall design. The cutoff still uses the row count of D.
class NestedLeastSquares {
public:
    NestedLeastSquares(const Matrix& design, const Vector& y);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return static_cast<std::size_t>(r_.cols()); }

    /// Solution using columns [0, k) of the design. 1 <= k <= cols().
    Vector solve(std::size_t k) const;

private:
    std::size_t rows_;
    Matrix r_;    // top min(rows, cols) rows of R
    Vector qty_;  // matching entries of Q^T y
};

}  // namespace rvfl
