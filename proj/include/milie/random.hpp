#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace milie {

// 64-bit FNV-1a. Used to derive per-record seeds from string ids so the
// result is stable across platforms and standard libraries.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull + (b << 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Bounded draw and shuffle avoid std::uniform_int_distribution /
// std::shuffle, whose sequences are implementation-defined.
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  return n ? static_cast<std::size_t>(rng() % n) : 0;
}

inline double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Container>
void shuffle_deterministic(Container& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[draw_index(rng, i)]);
}

}  // namespace milie
