#pragma once

#include <stdexcept>
#include <string>

namespace rvfl {

// Shape mismatches, non-finite data, malformed files.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Out-of-range hyperparameters (u <= 0, bad angle range, N = 0, ...).
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// Decomposition did not converge or produced non-finite values.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rvfl
