#include "rvfl/selftest.hpp"

#include "rvfl/model.hpp"
#include "rvfl/numkernel.hpp"
#include "rvfl/stats.hpp"
#include "rvfl/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace rvfl {

namespace {

double rel_err(const Matrix& a, const Matrix& b) {
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
}

// Literal enumeration of all sign patterns.
double brute_force_p(const std::vector<double>& diffs) {
    std::vector<double> nz;
    for (double d : diffs) {
        if (d != 0.0) nz.push_back(d);
    }
    if (nz.empty()) return 1.0;
    std::vector<double> mags(nz.size());
    std::transform(nz.begin(), nz.end(), mags.begin(), [](double d) { return std::fabs(d); });
    const auto ranks = average_ranks(mags);
    double wp = 0.0, wm = 0.0;
    for (std::size_t i = 0; i < nz.size(); ++i) (nz[i] > 0 ? wp : wm) += ranks[i];
    const double w = std::min(wp, wm);
    const std::uint64_t total = std::uint64_t{1} << nz.size();
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < nz.size(); ++i) {
            if (mask >> i & 1U) s += ranks[i];
        }
        if (s <= w) ++hits;
    }
    return std::min(1.0, 2.0 * static_cast<double>(hits) / static_cast<double>(total));
}

SelftestCheck check(std::string name, const std::function<std::string()>& body) {
    SelftestCheck c{std::move(name), true, {}};
    try {
        c.detail = body();
        if (!c.detail.empty()) c.passed = false;
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = std::string("exception: ") + e.what();
    }
    return c;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
    std::vector<SelftestCheck> out;
    const RngStream root(seed);

    out.push_back(check("moore-penrose identities", [&]() -> std::string {
        Rng rng = root.child("selftest-pinv").engine();
        std::uniform_int_distribution<int> dim(1, 12);
        for (int k = 0; k < 40; ++k) {
            const int rows = dim(rng);
            const int cols = dim(rng);
            Matrix a = random_matrix(rows, cols, rng);
            if (k % 2 == 1 && cols > 1) a.col(cols - 1) = a.col(0);  // rank deficient
            const Matrix p = pseudoinverse(a);
            const double e1 = rel_err(a * p * a, a);
            const double e2 = rel_err(p * a * p, p);
            const double e3 = rel_err((a * p).transpose(), a * p);
            const double e4 = rel_err((p * a).transpose(), p * a);
            if (std::max({e1, e2, e3, e4}) > 1e-8) {
                std::ostringstream os;
                os << "case " << k << " errors " << e1 << ' ' << e2 << ' ' << e3 << ' ' << e4;
                return os.str();
            }
        }
        return {};
    }));

    out.push_back(check("least squares vs normal equations", [&]() -> std::string {
        Rng rng = root.child("selftest-lsq").engine();
        for (int k = 0; k < 40; ++k) {
            const Matrix d = random_matrix(30, 8, rng);
            const Vector y = random_matrix(30, 1, rng);
            const Vector oracle = (d.transpose() * d).llt().solve(d.transpose() * y);
            const double e = rel_err(solve_least_squares(d, y), oracle);
            if (e > 1e-8) return "relative error " + std::to_string(e);
        }
        return {};
    }));

    out.push_back(check("wilcoxon exact vs brute force", [&]() -> std::string {
        Rng rng = root.child("selftest-wilcoxon").engine();
        std::uniform_int_distribution<int> len(1, 12);
        std::uniform_int_distribution<int> val(-6, 6);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> d(static_cast<std::size_t>(len(rng)));
            for (double& v : d) v = val(rng);
            const double got = wilcoxon_signed_rank(d).p_value;
            const double want = brute_force_p(d);
            if (got != want) {
                return "case " + std::to_string(k) + ": " + std::to_string(got) +
                       " != " + std::to_string(want);
            }
        }
        return {};
    }));

    out.push_back(check("anchor and slope-angle invariants", [&]() -> std::string {
        Rng rng = root.child("selftest-anchor").engine();
        const Dataset data =
            sample_dataset(TargetFunction::NL, 3, 50, 0.0, root.child("selftest-anchor-data"));
        const Topology t(3, 200, {false, false});
        constexpr double deg = std::numbers::pi / 180.0;
        for (const InitStrategy& s : {InitStrategy{AnchoredInit{7.0}},
                                      InitStrategy{SlopeAngleInit{30.0, 60.0}}}) {
            const HiddenLayer h = init_hidden(t, s, data.x, rng);
            for (std::size_t i = 0; i < h.nodes(); ++i) {
                const auto row = static_cast<Eigen::Index>(h.anchors[i]);
                const Matrix at = hidden_output(h, data.x.row(row));
                if (std::fabs(at(0, static_cast<Eigen::Index>(i)) - 0.5) > 1e-12) {
                    return "node " + std::to_string(i) + " is not centred on its anchor";
                }
            }
            if (std::holds_alternative<SlopeAngleInit>(s)) {
                const double lo = 4.0 * std::tan(30.0 * deg);
                const double hi = 4.0 * std::tan(60.0 * deg);
                const double amin = h.weights.cwiseAbs().minCoeff();
                const double amax = h.weights.cwiseAbs().maxCoeff();
                if (amin < lo - 1e-12 || amax > hi + 1e-12) return "slope weight out of range";
            }
        }
        return {};
    }));

    out.push_back(check("target function identities", [&]() -> std::string {
        Rng rng = root.child("selftest-targets").engine();
        std::uniform_real_distribution<double> unit(0.0, 0.5);
        for (int k = 0; k < 200; ++k) {
            Vector x(2), z(2);
            x << unit(rng), unit(rng);
            z << unit(rng), unit(rng);
            const double split = eval_target(TargetFunction::NLF, x) +
                                 eval_target(TargetFunction::L, x) -
                                 eval_target(TargetFunction::NLF_L, x);
            const double additive = eval_target(TargetFunction::L, x) +
                                    eval_target(TargetFunction::L, z) -
                                    eval_target(TargetFunction::L, Vector(x + z));
            if (std::fabs(split) > 1e-12 || std::fabs(additive) > 1e-12) {
                return "identity violated at sample " + std::to_string(k);
            }
        }
        Vector c(2);
        c << 0.5, 0.5;
        if (eval_target(TargetFunction::NL, c) != 1.0) return "NL(centre) != 1";
        return {};
    }));

    out.push_back(check("training reproducibility and decomposition", [&]() -> std::string {
        const Dataset data =
            sample_dataset(TargetFunction::NLF_L, 2, 200, 0.05, root.child("selftest-train-data"));
        const Topology t(2, 30, {true, true});
        const InitStrategy s = SlopeAngleInit{15.0, 75.0};
        Rng r1 = root.child("selftest-train").engine();
        Rng r2 = root.child("selftest-train").engine();
        const TrainedModel a = train(t, s, data, r1);
        const TrainedModel b = train(t, s, data, r2);
        if (a.beta != b.beta || a.hidden.weights != b.hidden.weights) return "not reproducible";
        const Decomposition d = decompose(a, data.x);
        const double gap =
            (d.linear + d.nonlinear + d.bias - predict(a, data.x)).cwiseAbs().maxCoeff();
        if (gap > 1e-10) return "components do not sum to prediction";
        return {};
    }));

    out.push_back(check("linear target exact fit", [&]() -> std::string {
        const Dataset data =
            sample_dataset(TargetFunction::L, 2, 300, 0.0, root.child("selftest-linear"));
        Rng rng = root.child("selftest-linear-init").engine();
        const TrainedModel m = train(Topology(2, 3, {true, true}), StandardInit{1.0}, data, rng);
        const double e = rmse(predict(m, data.x), data.y);
        if (e > 1e-8) return "training RMSE " + std::to_string(e);
        return {};
    }));

    return out;
}

}  // namespace rvfl
