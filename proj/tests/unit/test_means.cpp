#include <gtest/gtest.h>

#include <cmath>

#include "cheb/means.hpp"
#include "cheb/random.hpp"
#include "oracles.hpp"

using namespace cheb;

namespace {

using H = HermitianMatrix;

H congruence(const Matrix &t, const H &a) {
  return H::from_hermitian_part(t.adjoint() * a.matrix() * t);
}

double scale(const H &a, const H &b) { return std::max({1.0, a.frobenius(), b.frobenius()}); }

} // namespace

TEST(MeanDescriptor, CatalogMeans) {
  EXPECT_EQ(MeanDescriptor::geometric(0.25).weight(), 0.25);
  EXPECT_EQ(parse_mean("geo:0.5").name(), "geo:0.5");
  EXPECT_FALSE(parse_mean("harmonic").weight());
  EXPECT_NO_THROW(parse_mean("arithmetic"));
  EXPECT_EQ(parse_mean("custom:pow:0.5").name(), "custom:pow:0.5");
}

TEST(MeanDescriptor, RejectsInvalidRepresentingFunctions) {
  EXPECT_THROW(parse_mean("geo:1.5"), PreconditionError);
  EXPECT_THROW(parse_mean("geo:x"), UnknownName);
  EXPECT_THROW(parse_mean("custom:frac"), PreconditionError); // f(1) = 1/2
  EXPECT_THROW(parse_mean("custom:pow:2"), PreconditionError); // not operator monotone
  EXPECT_THROW(parse_mean("median"), UnknownName);
}

TEST(ApplyMean, GeometricCommutingCase) {
  const H r = apply_mean(MeanDescriptor::geometric(0.5), H::diagonal({4, 9}), H::diagonal({9, 4}));
  EXPECT_LE(oracle::max_abs_diff(r.matrix(), oracle::diag({6, 6})), 1e-8);
}

TEST(ApplyMean, IdentityIsFixed) {
  for (const char *m : {"geo:0.3", "harmonic", "arithmetic"}) {
    const H r = apply_mean(parse_mean(m), H::identity(3), H::identity(3));
    EXPECT_LE(oracle::max_abs_diff(r.matrix(), Matrix::Identity(3, 3)), 1e-9) << m;
  }
}

TEST(ApplyMean, HarmonicCommutingCase) {
  const H r = apply_mean(MeanDescriptor::harmonic(), H::diagonal({1, 3}), H::diagonal({1, 6}));
  // 2 / (1/3 + 1/6) = 4.
  EXPECT_LE(oracle::max_abs_diff(r.matrix(), oracle::diag({1, 4})), 1e-8);
}

TEST(ApplyMean, RejectsIndefiniteOperands) {
  EXPECT_THROW(apply_mean(MeanDescriptor::harmonic(), H::diagonal({1, -1}), H::identity(2)),
               DomainError);
}

TEST(ApplyMean, SingularOperandsAreRegularized) {
  const H r = apply_mean(MeanDescriptor::geometric(0.5), H::diagonal({1, 0}), H::diagonal({0, 1}));
  EXPECT_LE(r.frobenius(), 1e-4);
}

TEST(WeightedGeometric, Endpoints) {
  Rng rng(3);
  const H a = random_psd(rng, 3), b = random_psd(rng, 3);
  EXPECT_LE((weighted_geometric(a, b, 0.0) - a).frobenius(), 1e-9 * scale(a, b));
  EXPECT_LE((weighted_geometric(a, b, 1.0) - b).frobenius(), 1e-9 * scale(a, b));
}

TEST(WeightedGeometric, CommutingCase) {
  const H a = H::diagonal({1, 4}), b = H::diagonal({4, 1});
  const H r = weighted_geometric(a, b, 0.5);
  EXPECT_LE(oracle::max_abs_diff(r.matrix(), oracle::diag({2, 2})), 2e-9);
  // Exact once the regularization shift is applied to both operands.
  const double e = mean_regularization(a, b);
  const double g = std::sqrt((1 + e) * (4 + e));
  EXPECT_LE(oracle::max_abs_diff(r.matrix(), oracle::diag({g, g})), 1e-14);
}

TEST(WeightedGeometric, AgreesWithRepresentingFunctionPath) {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 5;
    const double mu = rng.uniform(0, 1);
    const H a = random_psd(rng, n), b = random_psd(rng, n);
    const H direct = weighted_geometric(a, b, mu);
    const H general = apply_mean(MeanDescriptor::geometric(mu), a, b);
    EXPECT_LE((direct - general).frobenius(), 1e-10 * scale(a, b));
  }
}

TEST(MeanAxioms, MonotoneInBothArguments) {
  Rng rng(7);
  for (const char *m : {"geo:0.5", "geo:0.2", "harmonic", "arithmetic"}) {
    const auto mean = parse_mean(m);
    for (int t = 0; t < 25; ++t) {
      const int n = 2 + t % 4;
      const H a = random_psd(rng, n), b = random_psd(rng, n);
      const H c = a + random_psd(rng, n, 1 + t % n), d = b + random_psd(rng, n);
      const H lo = apply_mean(mean, a, b), hi = apply_mean(mean, c, d);
      EXPECT_TRUE(loewner_geq(hi, lo, 1e-8 * scale(hi, lo)).holds) << m;
    }
  }
}

TEST(MeanAxioms, TransformerEqualityForInvertibleCongruence) {
  Rng rng(9);
  for (const char *m : {"geo:0.7", "harmonic"}) {
    const auto mean = parse_mean(m);
    for (int t = 0; t < 20; ++t) {
      const int n = 2 + t % 4;
      const H a = random_psd(rng, n) + 0.5 * H::identity(n);
      const H b = random_psd(rng, n) + 0.5 * H::identity(n);
      const Matrix tm = Matrix::Identity(n, n) + 0.3 * gaussian_matrix(rng, n, n);
      const H lhs = congruence(tm, apply_mean(mean, a, b));
      const H rhs = apply_mean(mean, congruence(tm, a), congruence(tm, b));
      EXPECT_LE((lhs - rhs).frobenius(), 1e-8 * scale(lhs, rhs)) << m;
    }
  }
}

TEST(MeanAxioms, HarmonicGeometricArithmeticSandwich) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 5;
    const H a = random_psd(rng, n), b = random_psd(rng, n, 1 + t % n);
    const H harm = apply_mean(MeanDescriptor::harmonic(), a, b);
    const H geo = weighted_geometric(a, b, 0.5);
    const H arith = 0.5 * (a + b);
    const double tol = 1e-8 * scale(a, b);
    EXPECT_TRUE(loewner_geq(geo, harm, tol).holds);
    EXPECT_TRUE(loewner_geq(arith, geo, tol).holds);
  }
}

TEST(MeanRegularization, ScalesWithTrace) {
  EXPECT_DOUBLE_EQ(mean_regularization(H::zero(2), H::zero(2)), 1e-10);
  EXPECT_DOUBLE_EQ(mean_regularization(H::diagonal({3, 4}), H::diagonal({1, 2})), 1e-9);
}
