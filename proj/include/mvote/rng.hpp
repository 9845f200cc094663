#pragma once

// Seed derivation and the few random variates the simulator needs.
//
// std::mt19937_64 output is fixed by the standard, but the std::*_distribution
// classes are not, so variates are produced here from raw 64-bit words to keep
// runs reproducible across standard library implementations.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace mvote::rng {

using Engine = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; used for stream labels so that the derivation does not depend on std::hash.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(seed ^ mix64(value + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t combine(std::uint64_t seed, double value) noexcept {
  return combine(seed, std::bit_cast<std::uint64_t>(value));
}

inline std::uint64_t combine(std::uint64_t seed, std::string_view label) noexcept {
  return combine(seed, label_hash(label));
}

/// Derives a sub-stream seed from a master seed and an ordered list of keys
/// (labels, integers or doubles).
template <typename... Keys>
std::uint64_t derive(std::uint64_t master, const Keys&... keys) {
  std::uint64_t s = mix64(master);
  ((s = combine(s, keys)), ...);
  return s;
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& eng, double p) { return uniform01(eng) < p; }

inline double exponential(Engine& eng, double rate) {
  return -std::log1p(-uniform01(eng)) / rate;
}

/// Poisson(mean) by counting arrivals of a unit-time process with the given rate.
/// O(mean) draws, exact for any mean; fine for the sensor counts used here.
inline std::uint64_t poisson(Engine& eng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::uint64_t n = 0;
  double t = exponential(eng, mean);
  while (t <= 1.0) {
    ++n;
    t += exponential(eng, mean);
  }
  return n;
}

}  // namespace mvote::rng
