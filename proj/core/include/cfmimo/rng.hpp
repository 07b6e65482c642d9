#pragma once

#include <cstdint>
#include <random>

namespace cfmimo {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used for seed derivation and fingerprinting.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed derivation: hash(master, deployment index, run index, stream id).
/// This contract is part of the reproducibility guarantee and must not change
/// between versions.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t deployment,
                                    std::uint64_t run, std::uint64_t stream) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ mix64(deployment + 0x01));
    s = mix64(s ^ mix64(run + 0x9e3779b9));
    s = mix64(s ^ mix64(stream + 0xabcdef12345ULL));
    return s;
}

}  // namespace cfmimo
