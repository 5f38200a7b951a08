#pragma once

#include <cstdint>
#include <random>

namespace qrc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to turn (master seed, stream index) into
/// statistically independent child seeds.
uint64_t splitmix64(uint64_t x);

/// Child seed for stream `stream` of master seed `seed`. Results computed
/// over streams are independent of how the streams are scheduled.
uint64_t derive_seed(uint64_t seed, uint64_t stream);

inline Rng make_rng(uint64_t seed, uint64_t stream) {
    return Rng(derive_seed(seed, stream));
}

// The standard library distributions are implementation-defined; these two
// are spelled out so seeded outputs match across toolchains.

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng &rng);

/// Standard normal via the Marsaglia polar method.
double standard_normal(Rng &rng);

/// +1 or -1 with equal probability.
inline int random_sign(Rng &rng) { return (rng() >> 63) ? 1 : -1; }

}  // namespace qrc
