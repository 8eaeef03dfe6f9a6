#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cheb/linalg.hpp"
#include "cheb/random.hpp"
#include "oracles.hpp"

using namespace cheb;

namespace {

using H = HermitianMatrix;

void expect_values(const std::vector<double> &got, const std::vector<double> &want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

double reconstruction_error(const H &a, const EigenSystem &es) {
  const auto back = spectral_compose(es.vectors, es.values);
  return (back.matrix() - a.matrix()).norm();
}

} // namespace

TEST(Hermitian, RejectsAsymmetricInput) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(H{m}, NotHermitian);
  EXPECT_THROW(H{Matrix(2, 3)}, Error);
}

TEST(Hermitian, AcceptsRoundoffAndStoresExactHermitianPart) {
  Matrix m(2, 2);
  m << 1, Complex(2, 1), Complex(2, -1 + 1e-14), 3;
  const H h(m);
  EXPECT_EQ(hermitian_defect(h.matrix()), 0.0);
}

TEST(Eigen, TwoByTwoOracle) {
  const auto es = hermitian_eigen(H::real({{2, 1}, {1, 2}}));
  expect_values(es.values, {3, 1}, 1e-13);
}

TEST(Eigen, IdentityIsUnitary) {
  const auto es = hermitian_eigen(H::identity(3));
  expect_values(es.values, {1, 1, 1}, 0);
  EXPECT_LT((es.vectors.adjoint() * es.vectors - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(Eigen, DiagonalGivesPermutationVectors) {
  const auto es = hermitian_eigen(H::diagonal({5, -2, 0}));
  expect_values(es.values, {5, 0, -2}, 0);
  EXPECT_NEAR(std::abs(es.vectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(2, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(1, 2)), 1.0, 1e-15);
}

TEST(Eigen, RandomReconstructionUnitarityAndOrder) {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 12;
    const H a = random_hermitian(rng, n);
    const auto es = hermitian_eigen(a);
    EXPECT_LE(reconstruction_error(a, es), 1e-10 * std::max(1.0, a.frobenius()));
    const Matrix gram = es.vectors.adjoint() * es.vectors;
    EXPECT_LE((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(std::is_sorted(es.values.rbegin(), es.values.rend()));
  }
}

TEST(Eigen, ClosedFormThreeByThree) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const H a = random_hermitian(rng, 3);
    expect_values(hermitian_eigen(a).values, oracle::eigenvalues_3x3(a.matrix()), 1e-10);
  }
}

TEST(Eigen, RepeatedEigenvalues) {
  Rng rng(3);
  const Matrix q = gaussian_matrix(rng, 4, 4).householderQr().householderQ();
  const std::vector<double> d{2, 2, -1, -1};
  const H a = spectral_compose(q, d);
  const auto es = hermitian_eigen(a);
  expect_values(es.values, {2, 2, -1, -1}, 1e-12);
  EXPECT_LE(reconstruction_error(a, es), 1e-12);
}

TEST(Eigen, LargestSupportedDimension) {
  Rng rng(5);
  const H a = random_hermitian(rng, kMaxDim);
  EXPECT_LE(reconstruction_error(a, hermitian_eigen(a)), 1e-10 * a.frobenius());
}

TEST(Loewner, DiagonalDifference) {
  const auto v = loewner_geq(H::diagonal({2, 3}), H::identity(2), 0.0);
  EXPECT_TRUE(v.holds);
  EXPECT_NEAR(v.margin, 1.0, 1e-15);
}

TEST(Loewner, EqualOperands) {
  Rng rng(11);
  const H a = random_hermitian(rng, 4);
  const auto v = loewner_geq(a, a);
  EXPECT_TRUE(v.holds);
  EXPECT_NEAR(v.margin, 0.0, 1e-13);
}

TEST(Loewner, IncomparablePairHasWitness) {
  const auto v = loewner_geq(H::diagonal({1, 0}), H::diagonal({0, 1}), 0.0);
  EXPECT_FALSE(v.holds);
  EXPECT_NEAR(v.margin, -1.0, 1e-15);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_NEAR(std::abs((*v.witness)(1)), 1.0, 1e-15);
}

TEST(Loewner, MutualOrderImpliesCloseness) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 5;
    const H a = random_hermitian(rng, n);
    const H b = a + 1e-12 * random_hermitian(rng, n);
    const double tol = default_loewner_tol(a, b);
    if (loewner_geq(a, b).holds && loewner_geq(b, a).holds)
      EXPECT_LE((a - b).frobenius(), n * tol * std::max({1.0, a.frobenius(), b.frobenius()}));
  }
}

TEST(Loewner, DimensionMismatch) {
  EXPECT_THROW(loewner_geq(H::identity(2), H::identity(3)), DimensionMismatch);
}

TEST(Hadamard, EntrywiseExample) {
  Matrix a(2, 2), b(2, 2), want(2, 2);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  want << 5, 12, 21, 32;
  EXPECT_EQ(hadamard(a, b), want);
}

TEST(Hadamard, AllOnesIsNeutral) {
  Rng rng(17);
  const Matrix a = gaussian_matrix(rng, 3, 3);
  EXPECT_EQ(hadamard(a, Matrix::Ones(3, 3)), a);
}

TEST(Hadamard, DiagonalTimesPsd) {
  const H c = hadamard(H::diagonal({1, 2}), H::real({{2, 1}, {1, 1}}));
  EXPECT_EQ(c.matrix(), oracle::diag({2, 2}));
}

TEST(Hadamard, MatchesOracleAndTensorFilter) {
  Rng rng(19);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 6;
    const Matrix a = gaussian_matrix(rng, n, n), b = gaussian_matrix(rng, n, n);
    EXPECT_LE(oracle::max_abs_diff(hadamard(a, b), oracle::hadamard(a, b)), 0.0);
    EXPECT_LE(oracle::max_abs_diff(hadamard_via_tensor(a, b), oracle::hadamard(a, b)), 1e-12);
  }
}

TEST(Hadamard, TensorFilterOfIdentities) {
  EXPECT_LE(oracle::max_abs_diff(hadamard_via_tensor(Matrix::Identity(3, 3), Matrix::Identity(3, 3)),
                                 Matrix::Identity(3, 3)),
            0.0);
}

TEST(Hadamard, SchurProductIsPsd) {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 8;
    const H a = random_psd(rng, n, 1 + t % n), b = random_psd(rng, n);
    const double tol = 1e-10 * std::max(1.0, a.frobenius() * b.frobenius());
    EXPECT_GE(lambda_min(hadamard(a, b)), -tol);
  }
}

TEST(Hadamard, ShapeMismatch) {
  EXPECT_THROW(hadamard(Matrix(2, 2), Matrix(3, 3)), DimensionMismatch);
}

TEST(Kronecker, Examples) {
  const Matrix b = oracle::real({{1, 2}, {2, 5}});
  Matrix block = Matrix::Zero(4, 4);
  block.topLeftCorner(2, 2) = b;
  block.bottomRightCorner(2, 2) = b;
  EXPECT_EQ(kronecker(Matrix::Identity(2, 2), b), block);

  const Matrix swap = oracle::real({{0, 1}, {1, 0}});
  EXPECT_EQ(kronecker(swap, oracle::real({{1}})), swap);
  EXPECT_EQ(kronecker(oracle::diag({1, 2}), oracle::diag({3, 4})), oracle::diag({3, 4, 6, 8}));
}

TEST(Kronecker, MatchesOracle) {
  Rng rng(29);
  const Matrix a = gaussian_matrix(rng, 2, 2), b = gaussian_matrix(rng, 3, 3);
  EXPECT_LE(oracle::max_abs_diff(kronecker(a, b), oracle::kron(a, b)), 0.0);
}

TEST(SingularValues, Examples) {
  Matrix nil(2, 2);
  nil << 0, 2, 0, 0;
  expect_values(singular_values(nil), {2, 0}, 1e-12);
  expect_values(singular_values(H::diagonal({3, -4})), {4, 3}, 0);
  expect_values(singular_values(H::identity(5)), {1, 1, 1, 1, 1}, 0);
}

TEST(SingularValues, HermitianAgreesWithAbsoluteEigenvalues) {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const H a = random_hermitian(rng, 2 + t % 5);
    auto want = hermitian_eigen(a).values;
    for (double &x : want)
      x = std::abs(x);
    std::sort(want.rbegin(), want.rend());
    expect_values(singular_values(a), want, 1e-10);
    // iA is not Hermitian, so this goes through the dilation path.
    expect_values(singular_values(Matrix(Complex(0, 1) * a.matrix())), want, 1e-10);
  }
}

TEST(SingularValues, GeneralMatchesEigenOfGram) {
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 4;
    const Matrix a = gaussian_matrix(rng, n, n);
    auto want = hermitian_eigen(HermitianMatrix::from_hermitian_part(a.adjoint() * a)).values;
    for (double &x : want)
      x = std::sqrt(std::max(0.0, x));
    expect_values(singular_values(a), want, 1e-9);
  }
}

TEST(TraceDet, Examples) {
  auto td = trace_det(H::diagonal({2, 3}));
  EXPECT_NEAR(td.trace.real(), 5, 1e-15);
  EXPECT_NEAR(td.det.real(), 6, 1e-14);
  td = trace_det(H::identity(3));
  EXPECT_NEAR(td.trace.real(), 3, 1e-15);
  EXPECT_NEAR(td.det.real(), 1, 1e-14);
  td = trace_det(H::real({{2, 1}, {1, 2}}));
  EXPECT_NEAR(td.trace.real(), 4, 1e-14);
  EXPECT_NEAR(td.det.real(), 3, 1e-13);
}

TEST(TraceDet, AgreesWithLeibniz) {
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 5;
    const Matrix g = gaussian_matrix(rng, n, n);
    const Complex want = oracle::det(g);
    EXPECT_LE(std::abs(trace_det(g).det - want), 1e-10 * std::max(1.0, std::abs(want)));
    const H h = random_hermitian(rng, n);
    const Complex hw = oracle::det(h.matrix());
    EXPECT_LE(std::abs(trace_det(h).det - hw), 1e-10 * std::max(1.0, std::abs(hw)));
  }
}

TEST(TraceDet, SingularMatrix) {
  const Matrix m = oracle::real({{1, 2}, {2, 4}});
  EXPECT_NEAR(std::abs(trace_det(m).det), 0.0, 1e-14);
}
