#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bootci {

/// Engine used throughout the library and harness. All algorithms are
/// templated on the URBG, this is only the default.
using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1).
template <class URBG>
double uniform_open01(URBG& rng) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0 && u < 1.0) return u;
  }
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over the bytes, then mixed with the running state.
inline std::uint64_t absorb(std::uint64_t state, std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // Length is absorbed too so ("ab","c") and ("a","bc") differ.
  return splitmix64(state ^ splitmix64(h ^ (bytes.size() * 0x9e3779b97f4a7c15ULL)));
}

inline std::uint64_t absorb(std::uint64_t state, std::uint64_t value) {
  return splitmix64(state ^ splitmix64(value + 0x632be59bd9b4e019ULL));
}

}  // namespace detail

/// Hashes a tuple of keys into a seeded engine. Identical tuples give
/// identical streams; the engine is seeded through std::seed_seq with the
/// full 64-bit digest.
class SeedBuilder {
 public:
  explicit SeedBuilder(std::uint64_t master) : state_(detail::splitmix64(master)) {}

  SeedBuilder& add(std::string_view token) {
    state_ = detail::absorb(state_, token);
    return *this;
  }
  SeedBuilder& add(std::uint64_t value) {
    state_ = detail::absorb(state_, value);
    return *this;
  }

  std::uint64_t digest() const { return state_; }

  Rng engine() const {
    const std::uint64_t a = state_;
    const std::uint64_t b = detail::splitmix64(state_);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
  }

 private:
  std::uint64_t state_;
};

}  // namespace bootci
