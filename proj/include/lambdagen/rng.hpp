#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lambdagen {

/// xoshiro256++ generator with splitmix64 seeding.
///
/// Deterministic across platforms for a given seed, unlike the standard
/// library distributions, which is what makes byte-identical reruns of the
/// CLI possible. Supports Vigna's jump() as well as cheap derived streams
/// for parallel sampling.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
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

    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        // masked rejection: portable and bias-free
        const std::uint64_t mask = mask_for(bound - 1);
        std::uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= bound);
        return v;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real01() < p; }

    bool coin() { return (next_u64() >> 63) != 0; }

    /// Geometric number of failures before the first success, success
    /// probability 1 - q (so P(k) = (1-q) q^k).
    std::uint64_t geometric(double q) {
        if (q <= 0.0) return 0;
        double u = real01();
        while (u == 0.0) u = real01();
        const double g = std::floor(std::log(u) / std::log(q));
        return g < 0 ? 0 : static_cast<std::uint64_t>(g);
    }

    /// Advance 2^128 steps; partitions the stream for long-lived siblings.
    void jump() {
        static constexpr std::array<std::uint64_t, 4> kJump = {
            0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
            0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
        std::array<std::uint64_t, 4> acc = {0, 0, 0, 0};
        for (std::uint64_t word : kJump)
            for (int bit = 0; bit < 64; ++bit) {
                if (word & (1ULL << bit))
                    for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
                next_u64();
            }
        state_ = acc;
    }

    /// Independent generator derived from (seed, index); used by --jobs.
    static Rng child(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed;
        std::uint64_t mixed = splitmix64(s) ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return Rng(mixed);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& s) {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    static std::uint64_t mask_for(std::uint64_t v) {
        std::uint64_t m = v;
        m |= m >> 1;
        m |= m >> 2;
        m |= m >> 4;
        m |= m >> 8;
        m |= m >> 16;
        m |= m >> 32;
        return m;
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace lambdagen
