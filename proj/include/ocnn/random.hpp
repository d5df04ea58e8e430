#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace ocnn {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Seeded deterministic random stream. Identical (seed, stream id) pairs
/// yield identical draw sequences across runs and platforms: the engine is
/// the standard-mandated mt19937_64 and all distribution code below is our
/// own (std:: distributions are not portable across standard libraries).
///
/// derive() is pure — it builds a child stream from the parent's identity
/// only, never from engine state — so each unit of parallel work (ensemble
/// member, fold) can own an independent stream that does not depend on how
/// much its parent has already drawn.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed),
          stream_(stream_id),
          key_(detail::splitmix64(detail::splitmix64(seed) + stream_id)),
          engine_(key_) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    RandomStream derive(std::uint64_t child_id) const { return RandomStream(key_, child_id); }

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased integer in [0, n). Rejection sampling on the top of the range.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t bound = max - max % n; // multiple of n
        std::uint64_t x = next_u64();
        while (x >= bound) x = next_u64();
        return x % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (cosine branch); consumes two draws.
    double normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace ocnn
