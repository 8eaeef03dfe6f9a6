#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "cheb/linalg.hpp"

namespace cheb {

/// SplitMix64 finalizer over (seed, stream name, index). Gives every
/// (suite, trial) pair an independent, reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index);

/// Seeded generator for matrix instances. Deterministic for a fixed seed on
/// a given standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi); ///< inclusive
  double normal();
  bool coin(double p = 0.5);
  /// Standard complex Gaussian: (x + iy)/sqrt(2) with x, y ~ N(0, 1).
  Complex complex_normal();

  std::mt19937_64 &engine() noexcept { return engine_; }

private:
  std::mt19937_64 engine_;
};

Matrix gaussian_matrix(Rng &rng, int rows, int cols);

/// G*G for an n x n standard complex Gaussian G, rescaled to trace n.
HermitianMatrix random_psd(Rng &rng, int n);
/// Rank-deficient variant: G is rank x n, then trace-normalized to n.
HermitianMatrix random_psd(Rng &rng, int n, int rank);
/// (G + G*)/2 for a standard complex Gaussian G.
HermitianMatrix random_hermitian(Rng &rng, int n);
Vector random_unit_vector(Rng &rng, int n);

} // namespace cheb
