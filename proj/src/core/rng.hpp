#ifndef WONHAM_CORE_RNG_HPP
#define WONHAM_CORE_RNG_HPP

#include <cstdint>
#include <random>

namespace wonham {

using RngStream = std::mt19937_64;

// SplitMix64 finalizer; good avalanche on sequential counters.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the stream owned by Monte Carlo path `index`.
///
/// Counter construction: the master seed and the path index are mixed by two
/// SplitMix64 rounds. The mapping is part of the output format; changing it
/// changes every published CSV.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ (index + 0x632be59bd9b4e019ULL));
}

inline RngStream make_stream(std::uint64_t master, std::uint64_t index) {
    return RngStream(derive_seed(master, index));
}

}  // namespace wonham

#endif  // WONHAM_CORE_RNG_HPP
