#pragma once

#include "rvfl/numkernel.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rvfl {

double rmse(const Vector& predicted, const Vector& actual);

struct AggregateResult {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
    std::size_t count = 0;

    friend bool operator==(const AggregateResult&, const AggregateResult&) = default;
};

AggregateResult aggregate(std::span<const double> values);

enum class WilcoxonMethod { Exact, NormalApproximation };

std::string_view to_string(WilcoxonMethod m);

struct WilcoxonResult {
    double w_statistic = 0.0;  // min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    std::size_t n_effective = 0;  // non-zero differences
    double p_value = 1.0;         // two-sided
    WilcoxonMethod method = WilcoxonMethod::Exact;
};

/// Sample sizes up to this use the exact null distribution.
inline constexpr std::size_t kWilcoxonExactLimit = 20;

/// Two-sided Wilcoxon signed-rank test of zero median.
///
/// Zero differences are dropped; tied |d| get average ranks. For
/// n_effective <= 20 the p-value is 2 * #{sign patterns with W+ <= W} / 2^n
/// (capped at 1). Larger samples use the normal approximation with the tie
/// correction and a 0.5 continuity correction. All-zero input gives
/// n_effective = 0 and p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs);

/// Average ranks (1-based) of the values, ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

struct SignificanceFlag {
    bool significant = false;  // rejects at the level AND variant mean is lower
    double p_value = 1.0;
    double mean_difference = 0.0;  // mean(baseline - variant)
};

/// For each variant, test baseline - variant paired by index.
std::map<std::string, SignificanceFlag> significance_flags(
    std::span<const double> baseline, const std::map<std::string, std::vector<double>>& others,
    double level = 0.05);

}  // namespace rvfl
