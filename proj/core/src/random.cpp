#include "cheb/random.hpp"

#include <cmath>

namespace cheb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
  // FNV-1a over the stream name keeps the mapping stable across platforms.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : stream) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed ^ h) + index);
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int Rng::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

bool Rng::coin(double p) { return uniform(0.0, 1.0) < p; }

Complex Rng::complex_normal() {
  const double x = normal();
  const double y = normal();
  return Complex(x, y) / std::sqrt(2.0);
}

Matrix gaussian_matrix(Rng &rng, int rows, int cols) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      g(i, j) = rng.complex_normal();
  return g;
}

HermitianMatrix random_psd(Rng &rng, int n) { return random_psd(rng, n, n); }

HermitianMatrix random_psd(Rng &rng, int n, int rank) {
  const Matrix g = gaussian_matrix(rng, rank, n);
  Matrix p = g.adjoint() * g;
  const double tr = p.trace().real();
  p *= static_cast<double>(n) / tr;
  return HermitianMatrix::from_hermitian_part(p);
}

HermitianMatrix random_hermitian(Rng &rng, int n) {
  const Matrix g = gaussian_matrix(rng, n, n);
  return HermitianMatrix::from_hermitian_part(g);
}

Vector random_unit_vector(Rng &rng, int n) {
  Vector x(n);
  for (int i = 0; i < n; ++i)
    x(i) = rng.complex_normal();
  return x / x.norm();
}

} // namespace cheb
