#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <string_view>

namespace smallworld {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent sub-seeds from a master seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) noexcept {
  return mix64(master ^ mix64(salt));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) noexcept {
  // FNV-1a over the tag.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return derive_seed(master, h);
}

inline std::uint64_t derive_seed(std::uint64_t master, double param) noexcept {
  return derive_seed(master, std::bit_cast<std::uint64_t>(param));
}

}  // namespace smallworld
