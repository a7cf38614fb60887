#include "oracles.hpp"

#include "rvfl/errors.hpp"
#include "rvfl/numkernel.hpp"

#include <doctest.h>

#include <limits>

using namespace rvfl;

TEST_CASE("pseudoinverse of identity is identity") {
    const Matrix p = pseudoinverse(Matrix::Identity(3, 3));
    CHECK((p - Matrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("pseudoinverse of rank-deficient diagonal zeroes the null direction") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    const Matrix p = pseudoinverse(d);
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p(0, 1) == 0.0);
    CHECK(p(1, 0) == 0.0);
    CHECK(p(1, 1) == 0.0);
}

TEST_CASE("pseudoinverse matches normal-equations oracle on full column rank") {
    Rng rng = RngStream(7).child("pinv-oracle").engine();
    for (int k = 0; k < 20; ++k) {
        const Matrix a = oracle::gaussian_matrix(6, 4, rng);
        CHECK(oracle::relative_error(pseudoinverse(a), oracle::normal_equations_pinv(a)) < 1e-8);
    }
}

TEST_CASE("Moore-Penrose conditions including rank-deficient and wide inputs") {
    Rng rng = RngStream(11).child("mp").engine();
    std::uniform_int_distribution<int> dim(1, 15);
    for (int k = 0; k < 60; ++k) {
        const int rows = dim(rng), cols = dim(rng);
        Matrix a = oracle::gaussian_matrix(rows, cols, rng);
        if (k % 3 == 0 && rows > 1 && cols > 1) {
            // rank one
            a = oracle::gaussian_matrix(rows, 1, rng) * oracle::gaussian_matrix(1, cols, rng);
        }
        const Matrix p = pseudoinverse(a);
        CHECK(p.rows() == cols);
        CHECK(p.cols() == rows);
        CHECK(oracle::relative_error(a * p * a, a) < 1e-8);
        CHECK(oracle::relative_error(p * a * p, p) < 1e-8);
        CHECK(oracle::relative_error((a * p).transpose(), a * p) < 1e-8);
        CHECK(oracle::relative_error((p * a).transpose(), p * a) < 1e-8);
    }
}

TEST_CASE("pseudoinverse rejects non-finite input") {
    Matrix a = Matrix::Identity(2, 2);
    a(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pseudoinverse(a), InvalidInput);
    a(1, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(pseudoinverse(a), InvalidInput);
}

TEST_CASE("solve_least_squares small exact cases") {
    Vector y(2);
    y << 3, 5;
    const Vector b = solve_least_squares(Matrix::Identity(2, 2), y);
    CHECK(b(0) == doctest::Approx(3.0));
    CHECK(b(1) == doctest::Approx(5.0));

    Matrix ones = Matrix::Ones(2, 1);
    Vector t(2);
    t << 0, 2;
    const Vector mean = solve_least_squares(ones, t);
    REQUIRE(mean.size() == 1);
    CHECK(mean(0) == doctest::Approx(1.0));
}

TEST_CASE("solve_least_squares equals normal equations on 8x3 systems") {
    Rng rng = RngStream(3).child("lsq").engine();
    for (int k = 0; k < 20; ++k) {
        const Matrix d = oracle::gaussian_matrix(8, 3, rng);
        const Vector y = oracle::gaussian_matrix(8, 1, rng);
        const Vector beta = solve_least_squares(d, y);
        CHECK(oracle::relative_error(beta, oracle::normal_equations(d, y)) < 1e-8);
        // residual orthogonal to the column space
        CHECK((d.transpose() * (d * beta - y)).norm() < 1e-10 * (1.0 + y.norm()));
    }
}

TEST_CASE("solve_least_squares returns the minimum-norm minimizer") {
    Rng rng = RngStream(5).child("minnorm").engine();
    // third column duplicates the first: null space spanned by (1, 0, -1)
    Matrix d = oracle::gaussian_matrix(10, 3, rng);
    d.col(2) = d.col(0);
    const Vector y = oracle::gaussian_matrix(10, 1, rng);
    const Vector beta = solve_least_squares(d, y);
    CHECK(beta(0) == doctest::Approx(beta(2)).epsilon(1e-10));
    Vector null(3);
    null << 1, 0, -1;
    for (double t : {-1.0, -1e-3, 1e-3, 0.5}) {
        const Vector other = beta + t * null;
        CHECK((d * other - y).norm() == doctest::Approx((d * beta - y).norm()).epsilon(1e-10));
        CHECK(other.norm() > beta.norm());
    }
}

TEST_CASE("solve_least_squares validates dimensions") {
    CHECK_THROWS_AS(solve_least_squares(Matrix::Identity(3, 3), Vector::Ones(2)), InvalidInput);
}

TEST_CASE("solve_least_squares is deterministic") {
    Rng rng = RngStream(9).child("det").engine();
    const Matrix d = oracle::gaussian_matrix(40, 12, rng);
    const Vector y = oracle::gaussian_matrix(40, 1, rng);
    const Vector a = solve_least_squares(d, y);
    const Vector b = solve_least_squares(d, y);
    CHECK(a == b);
}

TEST_CASE("NestedLeastSquares agrees with a direct solve on every leading block") {
    Rng rng = RngStream(13).child("nested").engine();
    SUBCASE("tall, full rank") {
        const Matrix d = oracle::gaussian_matrix(50, 12, rng);
        const Vector y = oracle::gaussian_matrix(50, 1, rng);
        const NestedLeastSquares nested(d, y);
        for (std::size_t k = 1; k <= 12; ++k) {
            const Vector direct = solve_least_squares(d.leftCols(static_cast<Eigen::Index>(k)), y);
            CHECK(oracle::relative_error(nested.solve(k), direct) < 1e-9);
        }
    }
    SUBCASE("rank deficient and wider than tall") {
        Matrix d = oracle::gaussian_matrix(8, 14, rng);
        d.col(5) = d.col(1) + d.col(2);
        const Vector y = oracle::gaussian_matrix(8, 1, rng);
        const NestedLeastSquares nested(d, y);
        for (std::size_t k : {1u, 4u, 6u, 8u, 11u, 14u}) {
            const Vector direct = solve_least_squares(d.leftCols(static_cast<Eigen::Index>(k)), y);
            CHECK(oracle::relative_error(nested.solve(k), direct) < 1e-9);
        }
    }
    const NestedLeastSquares n2(Matrix::Identity(2, 2), Vector::Ones(2));
    CHECK_THROWS_AS(n2.solve(0), InvalidInput);
    CHECK_THROWS_AS(n2.solve(3), InvalidInput);
}
