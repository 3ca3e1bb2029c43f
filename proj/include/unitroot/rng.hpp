#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace unitroot {

/// splitmix64 step; used both as a standalone mixer and to seed the engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and up to three
/// indices (e.g. grid cell coordinates and replication number). Streams are
/// independent of thread count by construction: the derivation is a pure
/// function of the indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i,
                                 std::uint64_t j = 0, std::uint64_t k = 0) {
    std::uint64_t s = master;
    s ^= splitmix64(s) + 0x632be59bd9b4e019ULL * (i + 1);
    s ^= splitmix64(s) + 0x9e3779b97f4a7c15ULL * (j + 1);
    s ^= splitmix64(s) + 0xd1b54a32d192ed03ULL * (k + 1);
    std::uint64_t t = s;
    return splitmix64(t);
}

/// xoshiro256++ by Blackman and Vigna. Self-contained so that simulated
/// streams are bit-identical across platforms and standard libraries.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in (0, 1); never returns exactly 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller. Draws are consumed in pairs; the
    /// spare is cached so consecutive calls are deterministic.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace unitroot
