#pragma once

#include <cmath>
#include <cstdint>

namespace htsim {

// splitmix64 finalizer; also used to fold substream labels into seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Labeled substream derivation. Every random quantity in the simulator is
// drawn from a stream keyed by (master seed, tag, indices...), so results do
// not depend on the order in which beams/users/epochs are visited.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0,
                                    std::uint64_t d = 0) {
    std::uint64_t s = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    s = mix64(s ^ a);
    s = mix64(s ^ b);
    s = mix64(s ^ c);
    s = mix64(s ^ d);
    return s;
}

// Stream tags. Values are arbitrary but frozen: changing them changes every
// seeded result.
namespace stream {
inline constexpr std::uint64_t kPlacement = 0x01;
inline constexpr std::uint64_t kLoPhase = 0x02;
inline constexpr std::uint64_t kTraffic = 0x03;
inline constexpr std::uint64_t kCsiError = 0x04;
inline constexpr std::uint64_t kCsiDrift = 0x05;
inline constexpr std::uint64_t kScheduler = 0x06;
inline constexpr std::uint64_t kRun = 0x07;
inline constexpr std::uint64_t kScrambler = 0x08;
}  // namespace stream

// Small deterministic generator (splitmix64 sequence). Self-contained so that
// seeded runs are reproducible bit-for-bit across platforms, independent of
// any standard-library distribution implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; no cached spare so the draw count per
    // call is fixed, which keeps substreams alignment-free.
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

}  // namespace htsim
