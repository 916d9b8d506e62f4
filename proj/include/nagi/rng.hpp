#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace nagi {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Streams are pure functions of their key material, so simulation results
// do not depend on thread scheduling or evaluation order.

struct Philox4x32 {
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static void block(const std::uint32_t key[2], const std::uint32_t counter[4],
                      std::uint32_t out[4]) {
        std::uint32_t c0 = counter[0], c1 = counter[1], c2 = counter[2], c3 = counter[3];
        std::uint32_t k0 = key[0], k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kW0; k1 += kW1;
        }
        out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Collapses an arbitrary key tuple into one 64-bit stream key.
inline std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x243F6A8885A308D3ull;  // arbitrary nonzero start
    for (std::uint64_t p : parts) h = splitmix64(h ^ p);
    return h;
}

// Purpose tags keep independently-keyed streams from colliding when they
// share the same seed material. Values are arbitrary but fixed.
namespace stream_tag {
inline constexpr std::uint64_t kWeights = 0x77;
inline constexpr std::uint64_t kEncoder = 0xE1;
inline constexpr std::uint64_t kEnvPoints = 0xE2;
inline constexpr std::uint64_t kEnvBoundary = 0xE3;
inline constexpr std::uint64_t kEnvOrder = 0xE4;
inline constexpr std::uint64_t kSchedule = 0x5C;
inline constexpr std::uint64_t kTrial = 0x7A;
inline constexpr std::uint64_t kInitPopulation = 0x1F;
inline constexpr std::uint64_t kReproduction = 0x2F;
inline constexpr std::uint64_t kRepresentative = 0x3F;
}  // namespace stream_tag

// A random stream identified by a key tuple. The Philox key/counter prefix is
// derived from the tuple; the low counter word counts emitted blocks.
class RngStream {
public:
    RngStream() : RngStream({0}) {}

    explicit RngStream(std::initializer_list<std::uint64_t> parts) {
        const std::uint64_t a = derive_key(parts);
        const std::uint64_t b = splitmix64(a);
        key_[0] = static_cast<std::uint32_t>(a);
        key_[1] = static_cast<std::uint32_t>(a >> 32);
        hi_[0] = static_cast<std::uint32_t>(b);
        hi_[1] = static_cast<std::uint32_t>(b >> 32);
    }

    explicit RngStream(std::uint64_t seed) : RngStream({seed}) {}

    std::uint32_t next_u32() {
        if (index_ == 4) refill();
        return buffer_[index_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform_real(double lo, double hi) {
        return lo + uniform_double() * (hi - lo);
    }

    // Uniform in [0, n). Lemire multiply-shift; n = 0 is a caller bug.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform_double() < p; }

    // Box-Muller, cosine branch only; two uniforms per draw, no cached state.
    double gaussian(double mean, double stddev) {
        const double u1 = 1.0 - uniform_double();  // (0, 1]
        const double u2 = uniform_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    void refill() {
        const std::uint32_t counter[4] = {
            static_cast<std::uint32_t>(block_),
            static_cast<std::uint32_t>(block_ >> 32), hi_[0], hi_[1]};
        Philox4x32::block(key_, counter, buffer_);
        ++block_;
        index_ = 0;
    }

    std::uint32_t key_[2]{};
    std::uint32_t hi_[2]{};
    std::uint64_t block_ = 0;
    std::uint32_t buffer_[4]{};
    int index_ = 4;
};

}  // namespace nagi
