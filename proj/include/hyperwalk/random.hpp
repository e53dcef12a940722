#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hyperwalk {

using Engine = std::mt19937_64;

// SplitMix64 finalizer; used only to derive well-separated seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Named, counter-keyed random substreams derived from one run seed.
///
/// Every consumer (walks, negatives, splits, init) asks for its own stream
/// by tag and up to two integer keys, so a component can be re-run in
/// isolation and walks can be generated in any order or thread layout
/// without changing the output.
class SeedSequence {
 public:
  explicit SeedSequence(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t derive(std::string_view tag, std::uint64_t a = 0,
                       std::uint64_t b = 0) const noexcept {
    std::uint64_t h = mix64(seed_ ^ hash_tag(tag));
    h = mix64(h ^ mix64(a + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ mix64(b + 0x8cb92ba72f3d8dd7ULL));
    return h;
  }

  Engine stream(std::string_view tag, std::uint64_t a = 0,
                std::uint64_t b = 0) const {
    return Engine(derive(tag, a, b));
  }

 private:
  std::uint64_t seed_;
};

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), n > 0. Lemire's multiply-and-reject.
inline std::uint64_t uniform_below(Engine& rng, std::uint64_t n) {
  using u128 = unsigned __int128;
  std::uint64_t x = rng();
  u128 m = static_cast<u128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = rng();
      m = static_cast<u128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace hyperwalk
