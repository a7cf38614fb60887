#include "oracles.hpp"

#include "rvfl/errors.hpp"
#include "rvfl/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace rvfl;

TEST_CASE("rmse") {
    Vector a(3), b(3);
    a << 1, 2, 3;
    CHECK(rmse(a, a) == 0.0);
    Vector ones = Vector::Ones(2), zeros = Vector::Zero(2);
    CHECK(rmse(ones, zeros) == 1.0);
    Vector p(2);
    p << 1, 3;
    CHECK(rmse(p, zeros) == doctest::Approx(2.2360679774997897));  // sqrt((1 + 9) / 2)
    CHECK_THROWS_AS(rmse(a, zeros), InvalidInput);

    // scale equivariance
    Rng rng = RngStream(1).engine();
    for (double c : {-3.0, 0.5, 7.0}) {
        const Vector x = oracle::gaussian_matrix(20, 1, rng);
        const Vector y = oracle::gaussian_matrix(20, 1, rng);
        CHECK(rmse(c * x, c * y) == doctest::Approx(std::fabs(c) * rmse(x, y)).epsilon(1e-14));
    }
}

TEST_CASE("aggregate") {
    const std::vector<double> same{2, 2, 2};
    CHECK(aggregate(same).mean == 2.0);
    CHECK(aggregate(same).std == 0.0);
    const std::vector<double> two{1, 3};
    CHECK(aggregate(two).mean == 2.0);
    CHECK(aggregate(two).std == doctest::Approx(1.4142135623730951));  // sqrt(2), n-1 denominator
    const std::vector<double> one{5};
    CHECK(aggregate(one).mean == 5.0);
    CHECK(aggregate(one).std == 0.0);
    CHECK(aggregate(one).count == 1);
    CHECK_THROWS_AS(aggregate(std::vector<double>{}), InvalidInput);
}

TEST_CASE("average ranks") {
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0, 3.0};
    const auto r = average_ranks(v);
    CHECK(r == std::vector<double>{4.0, 1.0, 4.0, 2.0, 4.0});
    CHECK(average_ranks(v) == oracle::counted_ranks(v));
}

TEST_CASE("wilcoxon reference cases") {
    SUBCASE("six positive differences") {
        // 64 sign patterns, only the all-positive one reaches W- = 0
        const std::vector<double> d{1, 2, 3, 4, 5, 6};
        const auto r = wilcoxon_signed_rank(d);
        CHECK(r.w_minus == 0.0);
        CHECK(r.w_plus == 21.0);
        CHECK(r.w_statistic == 0.0);
        CHECK(r.n_effective == 6);
        CHECK(r.method == WilcoxonMethod::Exact);
        CHECK(r.p_value == 0.03125);
        CHECK(oracle::wilcoxon_brute_force(d) == 0.03125);
    }
    SUBCASE("balanced pair") {
        const std::vector<double> d{-1, 1};
        CHECK(wilcoxon_signed_rank(d).p_value == 1.0);
    }
    SUBCASE("all zero") {
        const std::vector<double> d{0, 0, 0};
        const auto r = wilcoxon_signed_rank(d);
        CHECK(r.n_effective == 0);
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("zeros are dropped") {
        const std::vector<double> with{0, 1, 2, 0, 3, 4, 5, 6};
        const std::vector<double> without{1, 2, 3, 4, 5, 6};
        CHECK(wilcoxon_signed_rank(with).p_value == wilcoxon_signed_rank(without).p_value);
        CHECK(wilcoxon_signed_rank(with).n_effective == 6);
    }
    CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{}), InvalidInput);
}

TEST_CASE("exact wilcoxon equals brute-force enumeration") {
    Rng rng = RngStream(2).child("wilcoxon").engine();
    std::uniform_int_distribution<int> len(1, 14);
    std::uniform_int_distribution<int> val(-5, 5);  // many ties and zeros
    for (int k = 0; k < 300; ++k) {
        std::vector<double> d(static_cast<std::size_t>(len(rng)));
        for (double& v : d) v = val(rng);
        const auto r = wilcoxon_signed_rank(d);
        CHECK(r.p_value == oracle::wilcoxon_brute_force(d));
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
        CHECK(r.n_effective <= d.size());
        // two-sided symmetry
        std::vector<double> neg(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) neg[i] = -d[i];
        CHECK(wilcoxon_signed_rank(neg).p_value == r.p_value);
    }
}

TEST_CASE("normal approximation near the switch point") {
    Rng rng = RngStream(3).child("approx").engine();
    std::normal_distribution<double> g(0.3, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        std::vector<double> d(20);
        for (double& v : d) v = g(rng);
        const double exact = wilcoxon_signed_rank(d).p_value;
        std::vector<double> d21 = d;
        d21.push_back(0.0);  // still 20 effective: exact path
        CHECK(wilcoxon_signed_rank(d21).method == WilcoxonMethod::Exact);

        // normal approximation on the same 20 values, computed by hand
        const auto ranks = average_ranks([&] {
            std::vector<double> m;
            for (double v : d) m.push_back(std::fabs(v));
            return m;
        }());
        double wp = 0, wm = 0;
        for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? wp : wm) += ranks[i];
        const double w = std::min(wp, wm);
        const double z = (w - 105.0 + 0.5) / std::sqrt(717.5);  // n = 20: mean 105, var 717.5
        const double approx = std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
        worst = std::max(worst, std::fabs(approx - exact));
    }
    CHECK(worst < 0.02);

    // 25 effective differences take the approximation path
    std::vector<double> big(25);
    for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(i + 1);
    const auto r = wilcoxon_signed_rank(big);
    CHECK(r.method == WilcoxonMethod::NormalApproximation);
    CHECK(r.p_value < 1e-4);
}

TEST_CASE("normal approximation applies the tie correction") {
    // 30 differences, magnitudes in three tie groups of 10
    std::vector<double> d;
    for (int g = 1; g <= 3; ++g) {
        for (int i = 0; i < 10; ++i) d.push_back((i < 7 ? 1.0 : -1.0) * g);
    }
    const auto r = wilcoxon_signed_rank(d);
    REQUIRE(r.method == WilcoxonMethod::NormalApproximation);
    const double n = 30.0;
    const double var = n * (n + 1) * (2 * n + 1) / 24.0 - 3.0 * (1000.0 - 10.0) / 48.0;
    const double z = (r.w_statistic - n * (n + 1) / 4.0 + 0.5) / std::sqrt(var);
    CHECK(r.p_value == doctest::Approx(std::erfc(-z / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("significance flags") {
    // dyadic values keep every difference exact, so the tie structure is known
    std::vector<double> base(30), lower(30), alternating(30);
    for (std::size_t i = 0; i < 30; ++i) {
        base[i] = 1.0 + static_cast<double>(i % 7) / 8.0;
        lower[i] = 0.9 * base[i];
        alternating[i] = base[i] + (i % 2 == 0 ? -0.125 : 0.125);
    }
    alternating[0] -= 1.0 / 64.0;  // mean slightly lower, signs still balanced

    const auto flags = significance_flags(
        base, {{"same", base}, {"lower", lower}, {"alternating", alternating},
               {"higher", std::vector<double>(30, 5.0)}});
    CHECK_FALSE(flags.at("same").significant);
    CHECK(flags.at("same").p_value == 1.0);
    CHECK(flags.at("lower").significant);
    CHECK(flags.at("lower").p_value < 1e-5);
    CHECK_FALSE(flags.at("alternating").significant);
    CHECK(flags.at("alternating").p_value > 0.5);
    CHECK_FALSE(flags.at("higher").significant);  // rejects, but the variant is worse
    CHECK(flags.at("higher").p_value < 0.05);

    CHECK_THROWS_AS(significance_flags(base, {{"short", std::vector<double>(3, 1.0)}}),
                    InvalidInput);
}
