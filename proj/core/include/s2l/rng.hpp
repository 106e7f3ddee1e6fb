#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace s2l {

// Seeded random source with platform-independent draws. std::mt19937_64 has a
// fully specified output sequence; the standard distributions do not, so the
// draws below are implemented directly on the raw 64-bit output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  // True with probability p. p <= 0 never fires, p >= 1 always fires.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable hash of a seed and a list of string parts. Parts are length-prefixed
// so ("ab", "c") and ("a", "bc") differ.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::string_view> parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a offset basis
  auto feed = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (std::string_view part : parts) {
    std::uint64_t len = part.size();
    for (int i = 0; i < 8; ++i) feed(static_cast<unsigned char>(len >> (8 * i)));
    for (char c : part) feed(static_cast<unsigned char>(c));
  }
  return mix64(h ^ mix64(seed));
}

}  // namespace s2l
