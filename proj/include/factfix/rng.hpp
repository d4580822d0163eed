// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>

// Per-record randomness. Each record gets its own generator keyed by
// (master seed, record id), so output never depends on processing order.
// Only the engine's raw 64-bit output is consumed; the distributions below
// are spelled out here because the standard ones are implementation-defined.
namespace factfix::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// record_seed = splitmix64(splitmix64(master_seed) XOR fnv1a64(record_id))
inline constexpr std::uint64_t record_seed(std::uint64_t master_seed, std::string_view record_id) {
    return splitmix64(splitmix64(master_seed) ^ fnv1a64(record_id));
}

/// Anything that can draw a uniform index and a uniform double in [0, 1).
/// Tests substitute scripted samplers to walk every branch.
template <typename T>
concept IndexSampler = requires(T& t, std::size_t n) {
    { t.uniform_index(n) } -> std::convertible_to<std::size_t>;
    { t.uniform01() } -> std::convertible_to<double>;
};

class RecordRng {
public:
    explicit RecordRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, n); n must be positive.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

inline RecordRng derive_record_rng(std::uint64_t master_seed, std::string_view record_id) {
    return RecordRng(record_seed(master_seed, record_id));
}

template <IndexSampler S>
bool bernoulli(S& sampler, double p) {
    return sampler.uniform01() < p;
}

/// Draws an index with probability proportional to `weights`. At least one
/// weight must be positive.
template <IndexSampler S>
std::size_t choose_weighted(S& sampler, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = sampler.uniform01() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (target < acc) return i;
    }
    return last_positive;
}

}  // namespace factfix::rng
