#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace perseval {

// MurmurHash64A over the bytes of `data`, reading blocks little-endian so the
// value is identical on every platform.
std::uint64_t murmur_hash64(std::string_view data, std::uint64_t seed);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Folds a string into a seed. Used to derive per-(user, text) streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view part) {
  return mix64(base ^ murmur_hash64(part, 0x9e3779b97f4a7c15ULL));
}

// Seeded generator whose draws are fully specified (mt19937_64 plus our own
// bounded sampling), unlike std::uniform_int_distribution / std::shuffle.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace perseval
