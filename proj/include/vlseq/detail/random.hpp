#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vlseq/sequence.hpp"

namespace vlseq::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for task `stream` under a run seed.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(std::mt19937_64& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// Random test sequence drawn from a mixture of shapes: dense uniform, sparse
/// with log-uniform magnitudes, and near-flat.
inline FiniteSequence random_sequence(std::mt19937_64& rng, std::size_t D) {
  std::vector<double> v(D, 0.0);
  const int shape = static_cast<int>(rng() % 3);
  const double density = uniform(rng, 0.1, 1.0);
  for (auto& x : v) {
    const double sign = (rng() & 1U) ? 1.0 : -1.0;
    switch (shape) {
      case 0: x = uniform(rng, -1.0, 1.0); break;
      case 1: x = uniform(rng) < density ? sign * std::pow(10.0, uniform(rng, -3.0, 1.0)) : 0.0; break;
      default: x = sign * uniform(rng, 0.9, 1.1); break;
    }
  }
  bool all_zero = true;
  for (double x : v) all_zero = all_zero && x == 0.0;
  if (all_zero) v[rng() % D] = 1.0;
  return FiniteSequence(std::move(v));
}

}  // namespace vlseq::detail
