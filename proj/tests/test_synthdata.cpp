#include "rvfl/errors.hpp"
#include "rvfl/stats.hpp"
#include "rvfl/synthdata.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace rvfl;

namespace {

Vector point(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("target functions at reference points") {
    CHECK(eval_target(TargetFunction::NL, point({0.5, 0.5, 0.5})) == 1.0);
    CHECK(eval_target(TargetFunction::L, point({1.0, 1.0})) == 6.0);
    CHECK(eval_target(TargetFunction::NLF, point({0.0})) == 0.0);
    // sin(20 e) + 3, evaluated at 40 digits: 2.181634311532141062570744...
    CHECK(eval_target(TargetFunction::NLF_L, point({1.0})) ==
          doctest::Approx(2.1816343115321411).epsilon(1e-14));
}

TEST_CASE("target flags") {
    CHECK(target_flags(TargetFunction::NLF).fluctuation);
    CHECK_FALSE(target_flags(TargetFunction::NLF).linear);
    CHECK(target_flags(TargetFunction::NLF_L).fluctuation);
    CHECK(target_flags(TargetFunction::NLF_L).linear);
    CHECK_FALSE(target_flags(TargetFunction::L).fluctuation);
    CHECK(target_flags(TargetFunction::L).linear);
    for (auto tf : {TargetFunction::NL, TargetFunction::NLF, TargetFunction::NLF_L,
                    TargetFunction::L}) {
        CHECK(parse_target(to_string(tf)) == tf);
    }
    CHECK(parse_target("NLF+L") == TargetFunction::NLF_L);
    CHECK_THROWS_AS(parse_target("quadratic"), InvalidParameter);
}

TEST_CASE("NL peaks at the centre of the unit square") {
    double best = -1.0;
    Vector arg(2);
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            const Vector x = point({i / 100.0, j / 100.0});
            const double v = eval_target(TargetFunction::NL, x);
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
            if (v > best) {
                best = v;
                arg = x;
            }
        }
    }
    CHECK(arg(0) == 0.5);
    CHECK(arg(1) == 0.5);
}

TEST_CASE("L is additive and NLF_L splits into NLF + L") {
    Rng rng = RngStream(1).engine();
    std::uniform_real_distribution<double> half(0.0, 0.5);
    for (int k = 0; k < 500; ++k) {
        const Vector x = point({half(rng), half(rng), half(rng)});
        const Vector z = point({half(rng), half(rng), half(rng)});
        CHECK(eval_target(TargetFunction::L, x) + eval_target(TargetFunction::L, z) ==
              doctest::Approx(eval_target(TargetFunction::L, Vector(x + z))).epsilon(1e-14));
        CHECK(std::fabs(eval_target(TargetFunction::NLF, x) + eval_target(TargetFunction::L, x) -
                        eval_target(TargetFunction::NLF_L, x)) < 1e-12);
    }
}

TEST_CASE("sample_dataset") {
    const RngStream s = derive_stream(5, {{"trial", 0}, {"train", 0}});
    SUBCASE("noise-free targets match g(x)") {
        const Dataset d = sample_dataset(TargetFunction::NLF, 2, 500, 0.0, s);
        CHECK(d.size() == 500);
        CHECK(d.dim() == 2);
        CHECK(d.y == eval_target(TargetFunction::NLF, d.x));
        CHECK((d.x.array() >= 0.0).all());
        CHECK((d.x.array() <= 1.0).all());
        CHECK(d.provenance == s.describe());
    }
    SUBCASE("same stream, same data") {
        const Dataset a = sample_dataset(TargetFunction::NL, 3, 100, 0.1, s);
        const Dataset b = sample_dataset(TargetFunction::NL, 3, 100, 0.1, s);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
    SUBCASE("noise standard deviation") {
        const Dataset d = sample_dataset(TargetFunction::NL, 2, 100000, 0.1, s);
        const Vector resid = d.y - eval_target(TargetFunction::NL, d.x);
        const std::vector<double> r(resid.data(), resid.data() + resid.size());
        CHECK(std::fabs(aggregate(r).std - 0.1) < 0.002);
    }
    CHECK_THROWS_AS(sample_dataset(TargetFunction::NL, 2, 0, 0.0, s), InvalidParameter);
    CHECK_THROWS_AS(sample_dataset(TargetFunction::NL, 0, 5, 0.0, s), InvalidParameter);
    CHECK_THROWS_AS(sample_dataset(TargetFunction::NL, 2, 5, -0.1, s), InvalidParameter);
}

TEST_CASE("make_test_set is noise free and independent of the training stream") {
    const RngStream root(8);
    const Dataset test = make_test_set(TargetFunction::NLF_L, 2, 1000, root.child("test"));
    const Dataset train = sample_dataset(TargetFunction::NLF_L, 2, 1000, 0.05, root.child("train"));
    CHECK(test.noise_sigma == 0.0);
    CHECK(rmse(eval_target(TargetFunction::NLF_L, test.x), test.y) == 0.0);
    for (Eigen::Index i = 0; i < test.x.rows(); ++i) {
        for (Eigen::Index j = 0; j < train.x.rows(); ++j) {
            REQUIRE(test.x.row(i) != train.x.row(j));
        }
    }
}

TEST_CASE("derived streams") {
    const RngStream a = derive_stream(42, {{"trial", 1}});
    const RngStream b = derive_stream(42, {{"trial", 1}});
    const RngStream c = derive_stream(42, {{"trial", 2}});
    CHECK(a == b);
    Rng ea = a.engine(), eb = b.engine(), ec = c.engine();
    bool any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = ea(), vb = eb(), vc = ec();
        CHECK(va == vb);
        any_diff = any_diff || va != vc;
    }
    CHECK(any_diff);
    CHECK(a.key() != derive_stream(43, {{"trial", 1}}).key());
    CHECK(a.key() != derive_stream(42, {{"trials", 1}}).key());
    CHECK(a.child("x").key() != a.child("y").key());

    // empirical independence of two sibling streams
    Rng u = c.child("u").engine(), v = c.child("v").engine();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr int n = 100000;
    double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
    for (int i = 0; i < n; ++i) {
        const double x = unit(u), y = unit(v);
        su += x;
        sv += y;
        suu += x * x;
        svv += y * y;
        suv += x * y;
    }
    const double cov = suv / n - (su / n) * (sv / n);
    const double r = cov / std::sqrt((suu / n - su * su / n / n) * (svv / n - sv * sv / n / n));
    CHECK(std::fabs(r) < 0.01);
}

TEST_CASE("CSV export and import") {
    const Dataset d = sample_dataset(TargetFunction::NLF, 3, 50, 0.05, RngStream(12));
    std::stringstream ss;
    write_csv(ss, d);
    const std::string text = ss.str();
    CHECK(text.rfind("x1,x2,x3,y\n", 0) == 0);
    const Dataset back = read_csv(ss);
    CHECK(back.x == d.x);  // 17 significant digits round-trip exactly
    CHECK(back.y == d.y);

    std::istringstream bad_header("a,b\n1,2\n");
    CHECK_THROWS_AS(read_csv(bad_header), InvalidInput);
    std::istringstream bad_row("x1,y\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(bad_row), InvalidInput);
    std::istringstream bad_number("x1,y\n1,abc\n");
    CHECK_THROWS_AS(read_csv(bad_number), InvalidInput);
    std::istringstream empty("x1,y\n");
    CHECK_THROWS_AS(read_csv(empty), InvalidInput);
}
