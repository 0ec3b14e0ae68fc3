#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace hbtsim::rng {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// splitmix64 step; the workhorse behind seed derivation and the
/// counter-addressed generators below.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive a child seed from a parent seed and a salt. Used to hand
/// independent, reproducible streams to sources, detectors and chunks.
inline uint64_t mix(uint64_t seed, uint64_t salt) {
  uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (salt + 1));
  return splitmix64(s);
}

inline uint64_t mix(uint64_t seed, uint64_t a, uint64_t b) { return mix(mix(seed, a), b); }
inline uint64_t mix(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return mix(mix(seed, a, b), c);
}

/// Uniform in (0,1]; never returns 0 so it is safe under log().
inline double uniform_pos(uint64_t bits) { return (double)((bits >> 11) + 1) * 0x1.0p-53; }

/// Uniform in [0,1).
inline double uniform(uint64_t bits) { return (double)(bits >> 11) * 0x1.0p-53; }

/// Counter-addressed circular complex Gaussian with unit mean square,
/// i.e. Re and Im are independent N(0, 1/2). Sample `index` of stream
/// `seed` is a pure function of (seed, index), so any partition of a
/// stream into blocks reproduces identical values.
inline std::complex<double> complex_gaussian_at(uint64_t seed, uint64_t index) {
  uint64_t s = mix(seed, index);
  const double u1 = uniform_pos(splitmix64(s));
  const double u2 = uniform(splitmix64(s));
  const double r = std::sqrt(-std::log(u1));  // |z|^2 ~ Exp(1)
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

}  // namespace hbtsim::rng
