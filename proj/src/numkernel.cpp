#include "rvfl/numkernel.hpp"

#include "rvfl/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace rvfl {

namespace {

// Applies V * diag(1/s, cutoff) * U^T to rhs (rhs may have several columns).
template <typename Svd, typename Rhs>
Matrix apply_pinv(const Svd& svd, const Rhs& rhs, std::size_t rows, std::size_t cols) {
    if (svd.info() != Eigen::Success) {
        throw NumericFailure("SVD did not converge");
    }
    const Vector& s = svd.singularValues();
    const double sigma_max = s.size() > 0 ? s(0) : 0.0;
    const double tol = singular_value_cutoff(rows, cols, sigma_max);
    Vector inv = Vector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol) inv(i) = 1.0 / s(i);
    }
    Matrix out = svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().transpose() * rhs));
    if (!out.allFinite()) throw NumericFailure("pseudoinverse produced non-finite values");
    return out;
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw InvalidInput(std::string(what) + ": matrix must be at least 1x1");
    }
    if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

void require_finite(const Vector& v, const char* what) {
    if (v.size() < 1) throw InvalidInput(std::string(what) + ": vector must be non-empty");
    if (!v.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

double singular_value_cutoff(std::size_t rows, std::size_t cols, double sigma_max) {
    return static_cast<double>(std::max(rows, cols)) * sigma_max *
           std::numeric_limits<double>::epsilon();
}

Matrix pseudoinverse(const Matrix& m) {
    require_finite(m, "pseudoinverse");
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto rows = static_cast<std::size_t>(m.rows());
    const auto cols = static_cast<std::size_t>(m.cols());
    return apply_pinv(svd, Matrix::Identity(m.rows(), m.rows()), rows, cols);
}

Vector solve_least_squares(const Matrix& design, const Vector& y) {
    require_finite(design, "solve_least_squares design");
    require_finite(y, "solve_least_squares target");
    if (design.rows() != y.size()) {
        throw InvalidInput("solve_least_squares: design has " + std::to_string(design.rows()) +
                           " rows but target has " + std::to_string(y.size()) + " entries");
    }
    Eigen::BDCSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return apply_pinv(svd, y, static_cast<std::size_t>(design.rows()),
                      static_cast<std::size_t>(design.cols()));
}

NestedLeastSquares::NestedLeastSquares(const Matrix& design, const Vector& y)
    : rows_(static_cast<std::size_t>(design.rows())) {
    require_finite(design, "NestedLeastSquares design");
    require_finite(y, "NestedLeastSquares target");
    if (design.rows() != y.size()) {
        throw InvalidInput("NestedLeastSquares: row count of design and target differ");
    }
    Eigen::HouseholderQR<Matrix> qr(design);
    const Eigen::Index top = std::min(design.rows(), design.cols());
    r_ = qr.matrixQR().topRows(top).triangularView<Eigen::Upper>();
    Vector qty = qr.householderQ().transpose() * y;
    qty_ = qty.head(top);
}

Vector NestedLeastSquares::solve(std::size_t k) const {
    if (k < 1 || k > cols()) {
        throw InvalidInput("NestedLeastSquares::solve: column count out of range");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    const Eigen::Index top = std::min(kk, r_.rows());
    // Rank-revealing QR of the small triangular block; the pivot threshold
    // mirrors the singular value cutoff used by the SVD routes.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(static_cast<double>(std::max(rows_, k)) *
                     std::numeric_limits<double>::epsilon());
    cod.compute(r_.topLeftCorner(top, kk));
    Vector beta = cod.solve(qty_.head(top));
    if (!beta.allFinite()) throw NumericFailure("NestedLeastSquares: non-finite solution");
    return beta;
}

}  // namespace rvfl
