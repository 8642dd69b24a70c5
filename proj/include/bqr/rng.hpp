#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace bqr {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// xoshiro256++ (Blackman and Vigna), state filled from the seed by splitmix64.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed = 0) {
        for (auto& word : state_) {
            word = mix64(seed);
            seed += 0x9e3779b97f4a7c15ULL;
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
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

    friend bool operator==(const Xoshiro256pp&, const Xoshiro256pp&) = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

/// Random stream owned by exactly one chain.
///
/// Backed by xoshiro256++ with Boost's ziggurat normal and exponential
/// generators. Boost's distributions are specified independently of the
/// standard library implementation, so a given seed yields the same stream
/// on every platform.
class Rng {
public:
    using engine_type = Xoshiro256pp;

    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_(engine_); }

    /// Exponential with rate 1.
    double exponential() { return exponential_(engine_); }

    engine_type& engine() { return engine_; }

private:
    std::uint64_t seed_;
    engine_type engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::exponential_distribution<double> exponential_;
};

/// Seed for chain `index` derived from a user seed: mix64(base + mix64(index)).
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base + mix64(index));
}

}  // namespace bqr
