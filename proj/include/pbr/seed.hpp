#pragma once

#include <cstdint>
#include <string_view>

#include <boost/random/mersenne_twister.hpp>

namespace pbr {

/// Engine used everywhere. Boost distributions are used on top of it so that
/// streams are identical across standard library implementations.
using Rng = boost::random::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a of a purpose string.
std::uint64_t fnv1a64(std::string_view text);

/// Child seed for one purpose and index:
/// splitmix64(master ^ splitmix64(fnv1a64(purpose) + index * 0x9E3779B97F4A7C15)).
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0) {
    return Rng(derive_seed(master, purpose, index));
}

} // namespace pbr
