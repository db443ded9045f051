#pragma once

#include <cstdint>

namespace hotspot {

__extension__ using uint128_t = unsigned __int128;

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic, splittable random stream.
///
/// The generator is SplitMix64: the state advances by the golden-ratio
/// increment 0x9E3779B97F4A7C15 and each output is mix64(state). A substream
/// is keyed by (seed, index) with key = mix64(seed + 0x9E3779B97F4A7C15 * (index + 1))
/// and starts from state = key. Substreams depend only on their key, so work
/// items draw identical numbers regardless of scheduling.
///
/// Bounded integers use Lemire's multiply-shift with rejection; reals in
/// [0, 1) take the top 53 bits of one output.
class Rng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    explicit constexpr Rng(std::uint64_t state) noexcept : state_(state) {}

    static constexpr Rng substream(std::uint64_t seed, std::uint64_t index) noexcept {
        return Rng(mix64(seed + kGolden * (index + 1)));
    }
    /// Child stream keyed off this stream's current state; does not advance it.
    constexpr Rng split(std::uint64_t index) const noexcept { return substream(state_, index); }

    constexpr std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        uint128_t m = static_cast<uint128_t>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<uint128_t>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform real in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace hotspot
