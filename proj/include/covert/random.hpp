#pragma once

#include <cstdint>
#include <random>

namespace covert {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream purposes, so detection and decoding trials never share draws.
enum class StreamTag : std::uint64_t {
    layout = 1,
    detection = 2,
    decoding = 3,
    expectation = 4,
    grid_point = 5,
};

/// Seed for stream `index` of kind `tag` under `master`. Counter-based: the
/// result depends only on the triple, never on the order streams are drawn.
constexpr std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index) noexcept {
    return mix64(mix64(master ^ mix64(static_cast<std::uint64_t>(tag))) + index);
}

inline Rng make_stream(std::uint64_t master, StreamTag tag, std::uint64_t index) {
    return Rng(derive_seed(master, tag, index));
}

}  // namespace covert
