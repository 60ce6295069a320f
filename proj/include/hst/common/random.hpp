// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace hst {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used both for seed derivation and as a counter-based
// generator where random access to a stream is needed.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based split: the seed for (stream, index) depends only on its
// arguments, never on the order in which workers request seeds.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                           std::uint64_t index = 0) {
  return mix64(mix64(mix64(master) ^ stream) + index);
}

// Uniform in (0, 1) from a 64-bit key.
inline double counter_uniform(std::uint64_t key) {
  return (static_cast<double>(mix64(key) >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal draw addressed by (seed, index); platform independent.
inline double counter_normal(std::uint64_t seed, std::int64_t index) {
  const auto base = derive_seed(seed, static_cast<std::uint64_t>(index));
  const double u1 = counter_uniform(base);
  const double u2 = counter_uniform(base ^ 0xd1b54a32d192ed03ULL);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline std::complex<double> complex_normal(Rng& rng, double variance = 1.0) {
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace hst
