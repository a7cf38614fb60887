#pragma once

#include "rvfl/numkernel.hpp"
#include "rvfl/rng.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

namespace rvfl {

/// Synthetic regression targets on the unit hypercube.
///   NL     exp(-sum (x_j - 0.5)^2)
///   NLF    sum sin(20 e^{x_j}) x_j^2
///   NLF_L  NLF + L
///   L      3 sum x_j
enum class TargetFunction { NL, NLF, NLF_L, L };

std::string_view to_string(TargetFunction tf);
/// Accepts "NL", "NLF", "NLF_L" (also "NLF+L"), "L".
TargetFunction parse_target(std::string_view name);

/// Fluctuation / linear switches of the sum-form targets; NL has neither.
struct TargetFlags {
    bool fluctuation = false;
    bool linear = false;
};
TargetFlags target_flags(TargetFunction tf);

double eval_target(TargetFunction tf, const Vector& x);
Vector eval_target(TargetFunction tf, const Matrix& x);

struct Dataset {
    Matrix x;  // N x n, entries in [0, 1]
    Vector y;  // N
    double noise_sigma = 0.0;
    std::string provenance;  // RngStream::describe() of the generating stream

    std::size_t size() const { return static_cast<std::size_t>(x.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }
};

/// X ~ U[0,1]^n row-wise, y = g(x) + N(0, sigma^2).
Dataset sample_dataset(TargetFunction tf, std::size_t n, std::size_t count, double noise_sigma,
                       const RngStream& stream);

/// Noise-free evaluation set.
Dataset make_test_set(TargetFunction tf, std::size_t n, std::size_t count,
                      const RngStream& stream);

/// CSV with header x1..xn,y and 17 significant digits.
void write_csv(std::ostream& os, const Dataset& data);
Dataset read_csv(std::istream& is);

}  // namespace rvfl
