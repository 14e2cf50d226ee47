#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "secofdm/complex_matrix.hpp"

namespace secofdm {

// SplitMix64 finalizer; the building block for all seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

// Stable two-argument seed mix. Used to derive per-point, per-trial and
// per-purpose sub-seeds so that streams never alias and adding one consumer
// (e.g. artificial noise) cannot shift the draws of another.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Deterministic Gaussian source. The normal transform is a hand-rolled
// Marsaglia polar method over mt19937_64 rather than std::normal_distribution,
// whose algorithm is implementation-defined; golden fixtures depend on the
// exact stream.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed), cached_(false), cache_(0.0) {}

  // Uniform on [0, 1).
  double uniform();

  // Standard normal, mean 0 variance 1.
  double gaussian();

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cxd cgaussian(double variance);

  std::vector<cxd> cgaussian_vector(std::size_t n, double variance);

  // One uniformly random bit (from a dedicated 64-bit refill buffer).
  int bit();

private:
  std::mt19937_64 eng_;
  bool cached_;
  double cache_;
  std::uint64_t bitbuf_ = 0;
  int bits_left_ = 0;
};

}  // namespace secofdm
