#include "cheb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace cheb {

namespace {

constexpr int kSweepCap = 100;
constexpr double kJacobiTol = 1e-13;

double off_diagonal_norm(const Matrix &a) {
  double s = 0.0;
  const auto n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j)
        s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Works on any square Hermitian input; the public entry point adds the
// dimension cap, the dilation in singular_values() does not need it.
EigenSystem jacobi_eigen(Matrix a) {
  const auto n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();
  const double target = kJacobiTol * scale;

  for (Eigen::Index i = 0; i < n; ++i)
    a(i, i) = a(i, i).real();

  int sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (sweep == kSweepCap) {
      std::ostringstream msg;
      msg << "hermitian_eigen: no convergence after " << kSweepCap
          << " sweeps, off-diagonal residual " << off;
      throw ConvergenceError(msg.str(), off);
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0)
          continue;
        const Complex phase = apq / r; // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex sc = s * std::conj(phase); // s e^{-i phi}
        const Complex cc = c * std::conj(phase); // c e^{-i phi}

        // A <- A U with U_pp = c, U_pq = s, U_qp = -s e^{-i phi},
        // U_qq = c e^{-i phi}.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - sc * akq;
          a(k, q) = s * akp + cc * akq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - sc * vkq;
          v(k, q) = s * vkp + cc * vkq;
        }
        // A <- U* A
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - std::conj(sc) * aqk;
          a(q, k) = s * apk + std::conj(cc) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    ++sweep;
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });

  EigenSystem es;
  es.values.reserve(order.size());
  es.vectors.resize(n, n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    es.values.push_back(a(order[k], order[k]).real());
    es.vectors.col(static_cast<Eigen::Index>(k)) = v.col(order[k]);
  }
  return es;
}

void require_square(const Matrix &a, const char *what) {
  if (a.rows() != a.cols())
    throw DimensionMismatch(std::string(what) + ": matrix is not square");
}

} // namespace

void require_same_dim(int a, int b, const char *what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(msg.str());
  }
}

double hermitian_defect(const Matrix &m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

HermitianMatrix::HermitianMatrix(Matrix m) {
  require_square(m, "HermitianMatrix");
  if (m.rows() < 1 || m.rows() > kMaxDim) {
    std::ostringstream msg;
    msg << "HermitianMatrix: dimension " << m.rows() << " outside 1.." << kMaxDim;
    throw DimensionMismatch(msg.str());
  }
  const double defect = hermitian_defect(m);
  if (defect > kHermitianTol) {
    std::ostringstream msg;
    msg << "HermitianMatrix: entries differ from conjugate transpose by " << defect;
    throw NotHermitian(msg.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::from_hermitian_part(const Matrix &m) {
  require_square(m, "HermitianMatrix");
  if (m.rows() < 1 || m.rows() > kMaxDim)
    throw DimensionMismatch("HermitianMatrix: dimension outside supported range");
  return HermitianMatrix((m + m.adjoint()) * 0.5, Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(Matrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return HermitianMatrix(Matrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    m(i, i) = d[static_cast<std::size_t>(i)];
  return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

HermitianMatrix HermitianMatrix::real(
    std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  Eigen::Index i = 0;
  for (const auto &row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw DimensionMismatch("HermitianMatrix::real: ragged rows");
    Eigen::Index j = 0;
    for (double x : row)
      m(i, j++) = x;
    ++i;
  }
  return HermitianMatrix(std::move(m));
}

HermitianMatrix &HermitianMatrix::operator+=(const HermitianMatrix &o) {
  require_same_dim(dim(), o.dim(), "HermitianMatrix +");
  m_ += o.m_;
  return *this;
}

HermitianMatrix &HermitianMatrix::operator-=(const HermitianMatrix &o) {
  require_same_dim(dim(), o.dim(), "HermitianMatrix -");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix &HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

EigenSystem hermitian_eigen(const HermitianMatrix &a) {
  return jacobi_eigen(a.matrix());
}

HermitianMatrix spectral_compose(const Matrix &vectors, std::span<const double> values) {
  const auto n = vectors.cols();
  if (static_cast<Eigen::Index>(values.size()) != n)
    throw DimensionMismatch("spectral_compose: value count mismatch");
  Matrix scaled = vectors;
  for (Eigen::Index k = 0; k < n; ++k)
    scaled.col(k) *= values[static_cast<std::size_t>(k)];
  return HermitianMatrix::from_hermitian_part(scaled * vectors.adjoint());
}

double lambda_min(const HermitianMatrix &a) { return hermitian_eigen(a).min(); }
double lambda_max(const HermitianMatrix &a) { return hermitian_eigen(a).max(); }

double default_loewner_tol(const HermitianMatrix &a, const HermitianMatrix &b) {
  return 1e-9 * std::max(1.0, a.frobenius() + b.frobenius());
}

OrderVerdict loewner_geq(const HermitianMatrix &a, const HermitianMatrix &b, double tol) {
  require_same_dim(a.dim(), b.dim(), "loewner_geq");
  if (tol < 0.0)
    throw PreconditionError("loewner_geq: negative tolerance");
  const EigenSystem es = hermitian_eigen(a - b);
  OrderVerdict v;
  v.margin = es.min();
  v.holds = v.margin >= -tol;
  v.witness = es.vectors.col(es.vectors.cols() - 1);
  return v;
}

OrderVerdict loewner_geq(const HermitianMatrix &a, const HermitianMatrix &b) {
  return loewner_geq(a, b, default_loewner_tol(a, b));
}

bool is_psd(const HermitianMatrix &a, double tol) { return lambda_min(a) >= -tol; }

Matrix hadamard(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("hadamard: operands differ in shape");
  return a.cwiseProduct(b);
}

HermitianMatrix hadamard(const HermitianMatrix &a, const HermitianMatrix &b) {
  require_same_dim(a.dim(), b.dim(), "hadamard");
  // Entrywise products of conjugate pairs are exact conjugates.
  return HermitianMatrix::from_hermitian_part(a.matrix().cwiseProduct(b.matrix()));
}

Matrix kronecker(const Matrix &a, const Matrix &b) {
  require_square(a, "kronecker");
  require_square(b, "kronecker");
  const auto n = a.rows();
  const auto m = b.rows();
  Matrix out(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out.block(i * m, j * m, m, m) = a(i, j) * b;
  return out;
}

Matrix diagonal_isometry(int n) {
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(n) * n, n);
  for (int j = 0; j < n; ++j)
    u(static_cast<Eigen::Index>(j) * n + j, j) = 1.0;
  return u;
}

Matrix hadamard_via_tensor(const Matrix &a, const Matrix &b) {
  require_square(a, "hadamard_via_tensor");
  require_square(b, "hadamard_via_tensor");
  require_same_dim(static_cast<int>(a.rows()), static_cast<int>(b.rows()),
                   "hadamard_via_tensor");
  const Matrix u = diagonal_isometry(static_cast<int>(a.rows()));
  return u.adjoint() * kronecker(a, b) * u;
}

std::vector<double> singular_values(const HermitianMatrix &a) {
  std::vector<double> s = hermitian_eigen(a).values;
  for (double &x : s)
    x = std::abs(x);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::vector<double> singular_values(const Matrix &a) {
  require_square(a, "singular_values");
  const auto n = a.rows();
  if (n >= 1 && n <= kMaxDim && hermitian_defect(a) <= kHermitianTol)
    return singular_values(HermitianMatrix(a));
  Matrix dilation = Matrix::Zero(2 * n, 2 * n);
  dilation.topRightCorner(n, n) = a;
  dilation.bottomLeftCorner(n, n) = a.adjoint();
  const EigenSystem es = jacobi_eigen(dilation);
  std::vector<double> s(es.values.begin(), es.values.begin() + n);
  for (double &x : s)
    x = std::max(x, 0.0);
  return s;
}

TraceDet trace_det(const Matrix &a) {
  require_square(a, "trace_det");
  const auto n = a.rows();
  Matrix lu = a;
  Complex det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k)))
        pivot = i;
    if (lu(pivot, k) == Complex(0.0)) {
      det = 0.0;
      break;
    }
    if (pivot != k) {
      lu.row(pivot).swap(lu.row(k));
      det = -det;
    }
    det *= lu(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Complex factor = lu(i, k) / lu(k, k);
      lu.row(i).tail(n - k) -= factor * lu.row(k).tail(n - k);
    }
  }
  return {a.trace(), det};
}

TraceDet trace_det(const HermitianMatrix &a) {
  const EigenSystem es = hermitian_eigen(a);
  double det = 1.0;
  for (double x : es.values)
    det *= x;
  return {Complex(a.trace(), 0.0), Complex(det, 0.0)};
}

} // namespace cheb
