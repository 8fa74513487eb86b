#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace latentgp {

// Stream tags. Every consumer of randomness opens its own KeyedStream
// from (seed, tag, indices...), so the draw sequence depends only on
// the logical identity of the work item, never on thread scheduling.
enum StreamTag : std::uint64_t {
    kTagDataset = 1,
    kTagAeInit = 2,
    kTagShuffle = 3,
    kTagGpRestart = 4,
    kTagMonteCarlo = 5,
    kTagScatter = 6,
};

namespace detail {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based pseudo-random stream. The state is derived by folding
// the key words through the splitmix64 finalizer; draws then advance a
// splitmix64 sequence. Identical keys give identical streams on any
// platform with IEEE-754 doubles.
class KeyedStream {
public:
    explicit KeyedStream(std::initializer_list<std::uint64_t> key) {
        state_ = 0x243f6a8885a308d3ULL;  // arbitrary nonzero origin
        for (std::uint64_t w : key)
            state_ = detail::mix64(state_ ^ w);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller. Draws two uniforms per call and
    // discards the second variate to keep the draw count predictable.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        // Guard the log against u1 == 0.
        while (u1 <= 0.0)
            u1 = uniform01();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Unbiased integer in [0, n) (Lemire's rejection method).
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0)
            return 0;
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0ULL - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Derives an independent 64-bit seed for a sub-task, e.g. one GP of a
// bundle. Used where a component takes a plain seed rather than a key.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    return detail::mix64(detail::mix64(detail::mix64(seed) ^ tag) ^ index);
}

}  // namespace latentgp
