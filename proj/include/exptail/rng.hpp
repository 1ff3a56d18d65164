#pragma once

#include <cstdint>

namespace exptail::dist {

// Counter-based generation in the SplitMix64 construction: a stream key and
// a counter map statelessly to 64 random bits, so any (row, column) entry of
// a sample matrix can be produced independently and in parallel while staying
// bit-reproducible for a fixed seed.

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64_mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
}

inline std::uint64_t bits_at(std::uint64_t key, std::uint64_t counter) {
    return splitmix64_mix(key + 0x9E3779B97F4A7C15ull * counter);
}

// Uniform on (0, 1]: 53 random bits, never zero, so logs are safe.
inline double uniform_at(std::uint64_t key, std::uint64_t counter) {
    return static_cast<double>((bits_at(key, counter) >> 11) + 1) * 0x1p-53;
}

// Standard normal via Box-Muller; consumes counters 2c and 2c+1 of the key.
double normal_at(std::uint64_t key, std::uint64_t counter);

}  // namespace exptail::dist
