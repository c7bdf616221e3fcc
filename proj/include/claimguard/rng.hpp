#pragma once

#include <cstdint>
#include <random>

namespace claimguard {

/// splitmix64 step; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic RNG wrapper. Distribution helpers avoid std::uniform_*
/// so sequences do not depend on the standard library implementation.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    std::size_t index(std::size_t n) { // n > 0
        return static_cast<std::size_t>(gen() % n);
    }

    bool bernoulli(double rate) { return uniform01() < rate; }
};

} // namespace claimguard
