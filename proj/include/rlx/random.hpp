#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rlx {

/// Random stream used everywhere. Distributions come from <random>, so
/// streams are bit-reproducible for a given standard library build.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a list of words into one stream id:
/// h = splitmix64(master); h = splitmix64(h ^ w) for each w in order.
constexpr std::uint64_t mix_stream(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = splitmix64(master);
    for (auto w : words)
        h = splitmix64(h ^ w);
    return h;
}

inline Rng make_rng(std::uint64_t stream_id) { return Rng{stream_id}; }

} // namespace rlx
