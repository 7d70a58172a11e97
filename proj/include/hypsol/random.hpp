#pragma once

// Portable draws from mt19937_64: the standard distributions are
// implementation-defined, these are not.

#include <cstdint>
#include <random>

namespace hypsol {

inline double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [lo, hi].
inline long long uniform_int(std::mt19937_64& rng, long long lo, long long hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(rng() % span);
}

}  // namespace hypsol
