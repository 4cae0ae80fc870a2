#pragma once

// Counter-based random streams. A draw is a pure function of
// (seed, stream, counter), so the i-th draw of a stream never depends on how
// many draws were taken before it or on the size of the dataset being built.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rankagg {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Named substreams used by the generators; values are part of the determinism contract.
enum class Stream : std::uint64_t {
    Features = 1,
    Weights = 2,
    Labels = 3,
    Covariance = 4,
    Resample = 5,
    Shuffle = 6,
    Init = 7,
    Pairs = 8,
    Split = 9,
    Eval = 10,
};

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}
    RandomStream(std::uint64_t seed, Stream stream) noexcept
        : RandomStream(seed, static_cast<std::uint64_t>(stream)) {}

    /// Child stream keyed off this one; used to give each trial or sweep point its own substreams.
    RandomStream fork(std::uint64_t id) const noexcept { return RandomStream(key_, id + 0x100); }

    std::uint64_t bits_at(std::uint64_t counter) const noexcept {
        return splitmix64(key_ + counter * 0x9E3779B97F4A7C15ULL);
    }
    std::uint64_t next_bits() noexcept { return bits_at(counter_++); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound) by rejection, bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            const std::uint64_t r = next_bits();
            if (r < limit) return r % bound;
        }
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Standard normal via Box-Muller; consumes two draws.
    double normal() noexcept {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t counter() const noexcept { return counter_; }
    void seek(std::uint64_t counter) noexcept { counter_ = counter; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rankagg
