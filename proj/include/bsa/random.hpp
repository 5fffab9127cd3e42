#pragma once

#include <cstdint>
#include <limits>

namespace bsa {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based random stream.
///
/// A master seed and a stream index (trial number, worker id, sweep cell...) determine the
/// whole sequence, so Monte Carlo loops can hand each trial its own stream and obtain results
/// that do not depend on how trials are scheduled across threads. Satisfies
/// UniformRandomBitGenerator.
class Stream {
public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, std::uint64_t index) noexcept
        : key_(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., bound-1}; bound > 0. Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<__uint128_t>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (one output per call, deterministic across platforms
    /// given the same libm).
    double normal() noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace bsa
