#include "rvfl/rng.hpp"

#include <array>

namespace rvfl {

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_label(const std::string& label) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RngStream RngStream::child(std::string label, std::uint64_t index) const {
    RngStream out = *this;
    out.path_.emplace_back(std::move(label), index);
    return out;
}

std::uint64_t RngStream::key() const {
    std::uint64_t h = mix64(master_seed_);
    for (const auto& [label, index] : path_) {
        h = mix64(h ^ hash_label(label));
        h = mix64(h ^ index);
    }
    return h;
}

Rng RngStream::engine() const {
    const std::uint64_t k = key();
    const std::uint64_t k2 = mix64(k);
    std::array<std::uint32_t, 4> words{
        static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
        static_cast<std::uint32_t>(k2), static_cast<std::uint32_t>(k2 >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

std::string RngStream::describe() const {
    std::string out = std::to_string(master_seed_);
    for (const auto& [label, index] : path_) {
        out += '/';
        out += label;
        out += ':';
        out += std::to_string(index);
    }
    return out;
}

RngStream derive_stream(std::uint64_t master_seed,
                        const std::vector<std::pair<std::string, std::uint64_t>>& path) {
    RngStream s(master_seed);
    for (const auto& [label, index] : path) s = s.child(label, index);
    return s;
}

}  // namespace rvfl
