#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace swiptsim {

// Deterministic random stream. All distribution transforms are written out
// explicitly so a given seed yields the same sequence on any platform
// (std::mt19937_64 output is standardized, the distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in the open interval (0,1); never returns 0 or 1
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // unbiased enough for action spaces (bias < n / 2^64)
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    // standard normal via Box-Muller; consumes two uniforms per call
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // unit-mean exponential by inverse CDF
    double exponential() { return -std::log1p(-uniform01()); }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer, used to derive independent sub-streams from one seed
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = mix_seed(base ^ 0x6a09e667f3bcc909ULL);
    s = mix_seed(s ^ tag);
    s = mix_seed(s ^ a);
    s = mix_seed(s ^ b);
    return s;
}

// stream tags (arbitrary distinct constants, fixed for reproducibility)
namespace stream {
constexpr std::uint64_t kTopology = 0xA1;
constexpr std::uint64_t kLargeScale = 0xB2;
constexpr std::uint64_t kFading = 0xB3;
constexpr std::uint64_t kAgentInit = 0xC4;
constexpr std::uint64_t kAgentExplore = 0xC5;
constexpr std::uint64_t kReplaySample = 0xC6;
constexpr std::uint64_t kTestLargeScale = 0xD7;
constexpr std::uint64_t kTestFading = 0xD8;
constexpr std::uint64_t kTestExplore = 0xD9;
}  // namespace stream

}  // namespace swiptsim
