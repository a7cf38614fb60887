#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rvfl {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick oracle and property checks of the installed library: Moore-Penrose
/// identities, normal-equation agreement, brute-force Wilcoxon p-values,
/// anchor and slope-angle invariants, target identities, reproducibility.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 20240601);

}  // namespace rvfl
