#pragma once

// Reference computations that share no code with the library: plain loops,
// closed forms and brute-force expansions. Tests compare library kernels
// against these.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix hadamard(const Matrix &a, const Matrix &b) {
  Matrix c(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      c(i, j) = a(i, j) * b(i, j);
  return c;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
  const auto p = b.rows(), q = b.cols();
  Matrix c(a.rows() * p, a.cols() * q);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < p; ++k)
        for (Eigen::Index l = 0; l < q; ++l)
          c(i * p + k, j * q + l) = a(i, j) * b(k, l);
  return c;
}

inline Matrix matmul(const Matrix &a, const Matrix &b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        c(i, j) += a(i, k) * b(k, j);
  return c;
}

/// Leibniz expansion over all permutations; fine up to 7x7.
inline Complex det(const Matrix &a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j])
          ++inversions;
    Complex term = (inversions % 2) ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i)
      term *= a(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Roots of the 2x2 Hermitian characteristic polynomial, descending.
inline std::vector<double> eigenvalues_2x2(const Matrix &a) {
  const double p = a(0, 0).real(), d = a(1, 1).real();
  const double half = 0.5 * (p + d);
  const double r = std::hypot(0.5 * (p - d), std::abs(a(0, 1)));
  return {half + r, half - r};
}

/// Trigonometric solution of the 3x3 Hermitian characteristic cubic,
/// descending.
inline std::vector<double> eigenvalues_3x3(const Matrix &a) {
  const double q = (a(0, 0).real() + a(1, 1).real() + a(2, 2).real()) / 3.0;
  const double off = std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2));
  double p2 = 2.0 * off;
  for (int i = 0; i < 3; ++i)
    p2 += (a(i, i).real() - q) * (a(i, i).real() - q);
  if (p2 == 0.0)
    return {q, q, q};
  const double p = std::sqrt(p2 / 6.0);
  Matrix b = a;
  for (int i = 0; i < 3; ++i)
    b(i, i) -= q;
  b /= p;
  const double r = std::clamp(0.5 * det(b).real(), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  return {e1, 3.0 * q - e1 - e3, e3};
}

/// Weighted Chebyshev functional (sum w)(sum w a b) - (sum w a)(sum w b).
inline double chebyshev_sum(const std::vector<double> &w, const std::vector<double> &a,
                            const std::vector<double> &b) {
  double sw = 0, sab = 0, sa = 0, sb = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    sw += w[k];
    sab += w[k] * a[k] * b[k];
    sa += w[k] * a[k];
    sb += w[k] * b[k];
  }
  return sw * sab - sa * sb;
}

inline double max_abs_diff(const Matrix &a, const Matrix &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

inline Matrix real(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto &row : rows) {
    Eigen::Index j = 0;
    for (double x : row)
      m(i, j++) = x;
    ++i;
  }
  return m;
}

} // namespace oracle
