#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cheb/errors.hpp"

namespace cheb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest operand dimension accepted by HermitianMatrix.
inline constexpr int kMaxDim = 16;

/// Entrywise Hermitian tolerance enforced on externally supplied matrices.
inline constexpr double kHermitianTol = 1e-13;

/// Dense complex matrix known to be Hermitian. Every theorem operand is one.
///
/// The checked constructor rejects input whose entries differ from the
/// conjugate transpose by more than kHermitianTol and then stores the exact
/// Hermitian part, so downstream kernels see a bit-exact Hermitian matrix.
class HermitianMatrix {
public:
  explicit HermitianMatrix(Matrix m);

  /// Projects onto (M + M*)/2. For results that are Hermitian in exact
  /// arithmetic but carry round-off asymmetry (products, congruences).
  static HermitianMatrix from_hermitian_part(const Matrix &m);

  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix diagonal(std::initializer_list<double> d);
  /// Real symmetric matrix from row-major rows.
  static HermitianMatrix real(std::initializer_list<std::initializer_list<double>> rows);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix &matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double frobenius() const { return m_.norm(); }
  double trace() const { return m_.diagonal().real().sum(); }

  HermitianMatrix &operator+=(const HermitianMatrix &o);
  HermitianMatrix &operator-=(const HermitianMatrix &o);
  HermitianMatrix &operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix &b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix &b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

  bool operator==(const HermitianMatrix &o) const { return m_ == o.m_; }

private:
  struct Unchecked {};
  HermitianMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
struct EigenSystem {
  std::vector<double> values;
  Matrix vectors;

  double max() const { return values.front(); }
  double min() const { return values.back(); }
};

/// Outcome of a Loewner-order query A >= B.
struct OrderVerdict {
  bool holds = false;
  double margin = 0.0; ///< smallest eigenvalue of A - B
  std::optional<Vector> witness; ///< unit eigenvector achieving `margin`
};

/// Cyclic complex Jacobi. Convergence when the off-diagonal Frobenius mass
/// drops to 1e-13 * ||A||_F; throws ConvergenceError after 100 sweeps.
EigenSystem hermitian_eigen(const HermitianMatrix &a);

/// Rebuilds V diag(values) V* as a Hermitian matrix.
HermitianMatrix spectral_compose(const Matrix &vectors, std::span<const double> values);

double lambda_min(const HermitianMatrix &a);
double lambda_max(const HermitianMatrix &a);

/// 1e-9 * max(1, ||A||_F + ||B||_F).
double default_loewner_tol(const HermitianMatrix &a, const HermitianMatrix &b);

/// Tests A >= B, i.e. holds iff lambda_min(A - B) >= -tol.
OrderVerdict loewner_geq(const HermitianMatrix &a, const HermitianMatrix &b, double tol);
OrderVerdict loewner_geq(const HermitianMatrix &a, const HermitianMatrix &b);

bool is_psd(const HermitianMatrix &a, double tol);

Matrix hadamard(const Matrix &a, const Matrix &b);
HermitianMatrix hadamard(const HermitianMatrix &a, const HermitianMatrix &b);

Matrix kronecker(const Matrix &a, const Matrix &b);

/// The n^2 x n isometry with columns e_j (x) e_j.
Matrix diagonal_isometry(int n);

/// U*(A (x) B)U with U = diagonal_isometry(n). Agrees with hadamard().
Matrix hadamard_via_tensor(const Matrix &a, const Matrix &b);

/// Singular values, descending. Hermitian input uses |eigenvalues|; general
/// input goes through the Hermitian dilation [[0, A], [A*, 0]].
std::vector<double> singular_values(const Matrix &a);
std::vector<double> singular_values(const HermitianMatrix &a);

struct TraceDet {
  Complex trace;
  Complex det;
};

/// General square input: determinant by partially pivoted elimination.
TraceDet trace_det(const Matrix &a);
/// Hermitian input: determinant as the eigenvalue product.
TraceDet trace_det(const HermitianMatrix &a);

/// Largest |M_ij - conj(M_ji)|.
double hermitian_defect(const Matrix &m);

void require_same_dim(int a, int b, const char *what);

} // namespace cheb
