#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace replikit {

// Counter-free splitmix64 step. Platform-stable: only 64-bit integer ops.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
    // FNV-1a over the label bytes.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Deterministic pseudorandom stream (splitmix64). Value type; a single
// stream must not be drawn from concurrently.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Box-Muller; consumes exactly two draws per call, no cached spare.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // uniform index in [0, n)
    std::size_t next_index(std::size_t n) {
        // modulo bias is negligible for n << 2^64 and irrelevant for replicability
        return static_cast<std::size_t>(next_u64() % n);
    }

private:
    std::uint64_t state_;
};

// Hierarchical seeded randomness. child(label) derives a statistically
// independent substream; the derivation is a pure function of
// (master_seed, path), so streams are stable across processes and platforms.
class SharedRandomness {
public:
    explicit SharedRandomness(std::uint64_t master_seed)
        : master_seed_(master_seed), derived_(mix64(master_seed)) {}

    SharedRandomness child(std::string_view label) const {
        SharedRandomness c(*this);
        c.path_.emplace_back(label);
        c.derived_ = mix64(c.derived_ ^ hash_label(label));
        return c;
    }

    RngStream stream() const { return RngStream(derived_); }

    std::uint64_t master_seed() const { return master_seed_; }
    const std::vector<std::string>& path() const { return path_; }

private:
    std::uint64_t master_seed_;
    std::vector<std::string> path_;
    std::uint64_t derived_;
};

}  // namespace replikit
