#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace eigenvi {

/// Every sampling routine takes a caller-owned engine; nothing in the library
/// holds shared random state.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Independent stream for a (seed, tags...) pair, e.g. one per sweep cell and
/// purpose, so adding a cell does not shift the draws of the others.
inline Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (auto t : tags) {
    words.push_back(static_cast<std::uint32_t>(t));
    words.push_back(static_cast<std::uint32_t>(t >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace eigenvi
