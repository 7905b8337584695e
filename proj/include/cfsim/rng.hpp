#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace cfsim {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive decorrelated engine seeds from
// (master seed, stream index) pairs so that per-drop and per-realization
// streams are independent of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// A fresh distribution object per call keeps results a pure function of the
// engine state; std::normal_distribution may otherwise carry a cached spare
// variate across unrelated engines.
inline double randn(Rng& rng) {
  std::normal_distribution<double> dist;
  return dist(rng);
}

// Circularly-symmetric complex Gaussian, unit variance per complex sample.
inline std::complex<double> crandn(Rng& rng) {
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  std::normal_distribution<double> dist;
  const double re = dist(rng);
  const double im = dist(rng);
  return {re * inv_sqrt2, im * inv_sqrt2};
}

inline double runif(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

}  // namespace cfsim
