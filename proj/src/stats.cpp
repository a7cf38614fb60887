#include "rvfl/stats.hpp"

#include "rvfl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace rvfl {

double rmse(const Vector& predicted, const Vector& actual) {
    if (predicted.size() != actual.size()) {
        throw InvalidInput("rmse: length mismatch (" + std::to_string(predicted.size()) + " vs " +
                           std::to_string(actual.size()) + ")");
    }
    if (predicted.size() == 0) throw InvalidInput("rmse: empty input");
    return std::sqrt((predicted - actual).squaredNorm() / static_cast<double>(predicted.size()));
}

AggregateResult aggregate(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("aggregate: empty list");
    AggregateResult r;
    r.count = values.size();
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(r.count);
    if (r.count > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - r.mean) * (v - r.mean);
        r.std = std::sqrt(ss / static_cast<double>(r.count - 1));
    }
    return r;
}

std::string_view to_string(WilcoxonMethod m) {
    return m == WilcoxonMethod::Exact ? "exact" : "normal";
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

namespace {

// Exact null distribution of W+ over all 2^n sign patterns, counted by
// subset-sum over doubled ranks (average ranks are multiples of 1/2).
double exact_two_sided_p(const std::vector<double>& ranks, double w) {
    std::vector<std::int64_t> doubled;
    doubled.reserve(ranks.size());
    std::int64_t total = 0;
    for (double r : ranks) {
        doubled.push_back(std::llround(2.0 * r));
        total += doubled.back();
    }
    std::vector<std::uint64_t> count(static_cast<std::size_t>(total) + 1, 0);
    count[0] = 1;
    std::int64_t reach = 0;
    for (std::int64_t r : doubled) {
        for (std::int64_t s = reach; s >= 0; --s) {
            count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
        }
        reach += r;
    }
    const std::int64_t limit = std::llround(2.0 * w);
    std::uint64_t tail = 0;
    for (std::int64_t s = 0; s <= limit; ++s) tail += count[static_cast<std::size_t>(s)];
    const double patterns = std::ldexp(1.0, static_cast<int>(ranks.size()));
    return std::min(1.0, 2.0 * static_cast<double>(tail) / patterns);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs) {
    if (diffs.empty()) throw InvalidInput("wilcoxon_signed_rank: empty input");
    std::vector<double> nonzero;
    for (double d : diffs) {
        if (!std::isfinite(d)) throw InvalidInput("wilcoxon_signed_rank: non-finite difference");
        if (d != 0.0) nonzero.push_back(d);
    }
    WilcoxonResult r;
    r.n_effective = nonzero.size();
    if (nonzero.empty()) return r;

    std::vector<double> magnitudes(nonzero.size());
    std::transform(nonzero.begin(), nonzero.end(), magnitudes.begin(),
                   [](double d) { return std::fabs(d); });
    const std::vector<double> ranks = average_ranks(magnitudes);
    for (std::size_t i = 0; i < nonzero.size(); ++i) {
        (nonzero[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
    }
    r.w_statistic = std::min(r.w_plus, r.w_minus);

    const auto n = static_cast<double>(r.n_effective);
    if (r.n_effective <= kWilcoxonExactLimit) {
        r.method = WilcoxonMethod::Exact;
        r.p_value = exact_two_sided_p(ranks, r.w_statistic);
        return r;
    }

    r.method = WilcoxonMethod::NormalApproximation;
    std::vector<double> sorted = magnitudes;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (r.w_statistic - mean + 0.5) / std::sqrt(var);
    const double lower_tail = 0.5 * std::erfc(-z / std::sqrt(2.0));
    r.p_value = std::clamp(2.0 * lower_tail, 0.0, 1.0);
    return r;
}

std::map<std::string, SignificanceFlag> significance_flags(
    std::span<const double> baseline, const std::map<std::string, std::vector<double>>& others,
    double level) {
    std::map<std::string, SignificanceFlag> out;
    for (const auto& [name, values] : others) {
        if (values.size() != baseline.size()) {
            throw InvalidInput("significance_flags: variant '" + name + "' has " +
                               std::to_string(values.size()) + " trials, baseline has " +
                               std::to_string(baseline.size()));
        }
        if (values.empty()) throw InvalidInput("significance_flags: empty trial lists");
        std::vector<double> diffs(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) diffs[i] = baseline[i] - values[i];
        SignificanceFlag flag;
        flag.p_value = wilcoxon_signed_rank(diffs).p_value;
        flag.mean_difference = aggregate(diffs).mean;
        flag.significant = flag.p_value < level && flag.mean_difference > 0.0;
        out.emplace(name, flag);
    }
    return out;
}

}  // namespace rvfl
