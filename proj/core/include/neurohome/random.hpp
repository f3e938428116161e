#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace neurohome {

using Rng = std::mt19937_64;

// splitmix64 finaliser; decorrelates consecutive seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

// Independent stream for (seed, tag...) so each generator can own its own RNG.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept;

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(derive_seed(seed, tags));
}

}  // namespace neurohome
