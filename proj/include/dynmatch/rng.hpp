#pragma once

#include <cstdint>
#include <initializer_list>

#include "dynmatch/rational.hpp"

namespace dynmatch::rng {

// SplitMix64 step (Steele, Lea, Flood). Deterministic across platforms.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Collapses (seed, key parts) into one substream word by chaining splitmix64,
// so every (edge, draw index) pair gets an independent deterministic coin.
inline uint64_t mix(uint64_t seed, std::initializer_list<uint64_t> parts) {
  uint64_t h = splitmix64(seed);
  for (uint64_t p : parts) h = splitmix64(h ^ p);
  return h;
}

// True with probability min(1, max(0, p)), consuming exactly one 64-bit word.
// Exact: compares draw/2^64 < p in integer arithmetic.
bool bernoulli(uint64_t draw, const Rational& p);

// Uniform value in [0, bound) derived from one word; bound > 0.
inline uint64_t bounded(uint64_t word, uint64_t bound) {
  // 128-bit multiply-shift reduction; deterministic and unbiased enough for
  // stream generation (not used for the sampling coins).
  return static_cast<uint64_t>((static_cast<__uint128_t>(word) * bound) >> 64);
}

// Tiny sequential generator for the stream generators.
struct Sequence {
  uint64_t state;
  explicit Sequence(uint64_t seed) : state(splitmix64(seed)) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t bound) { return bounded(next(), bound); }
  // Uniform in [0, 1) with 53-bit resolution.
  double fraction() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace dynmatch::rng
