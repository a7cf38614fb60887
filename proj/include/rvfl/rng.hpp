#pragma once

// Named random streams. Every random draw in an experiment comes from an
// engine seeded by hashing (master seed, label path), so a unit of work gets
// the same numbers no matter which thread runs it or in which order.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace rvfl {

using Rng = std::mt19937_64;

class RngStream {
public:
    RngStream() = default;
    explicit RngStream(std::uint64_t master_seed) : master_seed_(master_seed) {}

    std::uint64_t master_seed() const { return master_seed_; }
    const std::vector<std::pair<std::string, std::uint64_t>>& path() const { return path_; }

    /// New stream one level deeper; the parent is unchanged.
    RngStream child(std::string label, std::uint64_t index = 0) const;

    /// 64-bit key mixing the seed and the whole path.
    std::uint64_t key() const;

    /// Freshly seeded engine; two calls return engines with identical output.
    Rng engine() const;

    /// Human-readable form, e.g. "42/trial:3/train:0".
    std::string describe() const;

    friend bool operator==(const RngStream&, const RngStream&) = default;

private:
    std::uint64_t master_seed_ = 0;
    std::vector<std::pair<std::string, std::uint64_t>> path_;
};

/// derive_stream(seed, {{"trial", 1}, {"train", 0}})
RngStream derive_stream(std::uint64_t master_seed,
                        const std::vector<std::pair<std::string, std::uint64_t>>& path);

}  // namespace rvfl
