#pragma once

#include <cmath>
#include <cstdint>

namespace tilesim {

// SplitMix64; used only to expand seeds into generator state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Stream split function: run i of a batch seeded with `master` uses
// stream_seed(master, i). Two finalizer passes keep adjacent run indices
// statistically unrelated.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t run_index) {
    SplitMix64 mix(master ^ (0x9e3779b97f4a7c15ULL * (run_index + 1)));
    mix.next();
    return mix.next();
}

// xoshiro256++ (Blackman/Vigna), state filled from SplitMix64.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 mix(seed);
        for (auto& word : s_) word = mix.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in (0,1]; safe as a log argument
    double uniform_pos() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift; bias is negligible for the n used here
        return static_cast<std::uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace tilesim
