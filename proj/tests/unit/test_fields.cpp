#include <gtest/gtest.h>

#include "cheb/fields.hpp"
#include "cheb/random.hpp"
#include "oracles.hpp"

using namespace cheb;

namespace {

using H = HermitianMatrix;

OperatorField two_point(std::vector<H> ms, double alpha, double measure) {
  OperatorField f;
  f.grid = {0.0, 1.0};
  f.matrices = std::move(ms);
  f.alpha = {alpha, alpha};
  f.measures = {measure, measure};
  f.validate();
  return f;
}

FieldRecipe recipe(FieldRecipe::Kind kind, int dim, std::uint64_t seed) {
  FieldRecipe r;
  r.kind = kind;
  r.dim = dim;
  r.m = 16;
  r.seed = seed;
  return r;
}

} // namespace

TEST(Integrate, ConstantFieldWithUnitMass) {
  Rng rng(1);
  const H a = random_hermitian(rng, 3);
  OperatorField f;
  for (int k = 0; k < 8; ++k) {
    f.grid.push_back((k + 0.5) / 8);
    f.matrices.push_back(a);
    f.alpha.push_back(1.0);
    f.measures.push_back(1.0 / 8);
  }
  EXPECT_LE((integrate(f) - a).frobenius(), 1e-14);
  EXPECT_DOUBLE_EQ(total_weight(f), 1.0);
}

TEST(Integrate, SinglePoint) {
  OperatorField f{{0.5}, {H::identity(2)}, {2.0}, {0.5}};
  EXPECT_EQ(integrate(f).matrix(), Matrix::Identity(2, 2));
}

TEST(Integrate, TwoTermSum) {
  const auto f = two_point({H::zero(2), H::diagonal({2, 4})}, 1.0, 0.5);
  EXPECT_EQ(integrate(f).matrix(), oracle::diag({1, 2}));
}

TEST(Integrate, HadamardCommutesWithIntegral) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    auto r = recipe(FieldRecipe::Kind::custom_sampled, 3, 100 + t);
    r.weight = "exp:1";
    const auto f = make_field(r);
    const H b = random_hermitian(rng, 3);
    std::vector<H> products;
    for (const auto &a : f.matrices)
      products.push_back(hadamard(a, b));
    const H lhs = integrate(with_matrices(f, products));
    const H rhs = hadamard(integrate(f), b);
    EXPECT_LE((lhs - rhs).frobenius(), 1e-11);
  }
}

TEST(Integrate, DiscreteFieldIsWeightedSum) {
  Rng rng(3);
  const std::vector<double> w{0.5, 2.0, 1.25};
  std::vector<H> as;
  for (int k = 0; k < 3; ++k)
    as.push_back(random_hermitian(rng, 2));
  const H got = integrate(discrete_field(w, as));
  const H want = w[0] * as[0] + w[1] * as[1] + w[2] * as[2];
  EXPECT_EQ(got.matrix(), want.matrix());
}

TEST(Validate, RejectsMalformedFields) {
  EXPECT_THROW(OperatorField{}.validate(), PreconditionError);
  OperatorField f{{0.0, 1.0}, {H::identity(2), H::identity(2)}, {1.0, -1.0}, {1.0, 1.0}};
  try {
    f.validate();
    FAIL();
  } catch (const PreconditionError &e) {
    EXPECT_EQ(e.index(), 1);
  }
  f.alpha = {1.0, 1.0};
  f.grid = {1.0, 0.0};
  EXPECT_THROW(f.validate(), PreconditionError);
  f.grid = {0.0, 1.0};
  f.measures = {1.0, 0.0};
  EXPECT_THROW(f.validate(), PreconditionError);
  f.measures = {1.0, 1.0};
  f.matrices[1] = H::identity(3);
  EXPECT_THROW(f.validate(), PreconditionError);
}

TEST(SyncHadamard, IncreasingFieldsPass) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto fa = make_field(recipe(FieldRecipe::Kind::custom_sampled, 3, s));
    const auto fb = make_field(recipe(FieldRecipe::Kind::power_family, 3, s + 50));
    const double tol = 1e-10 * std::max(field_scale(fa), field_scale(fb));
    EXPECT_FALSE(check_sync_hadamard(fa, fb, tol));
  }
}

TEST(SyncHadamard, OppositeOrderWithOffDiagonalIncrementsFails) {
  Rng rng(4);
  const H p = random_psd(rng, 3), q = random_psd(rng, 3);
  const auto fa = two_point({H::zero(3), p}, 1.0, 1.0);
  const auto fb = two_point({q, H::zero(3)}, 1.0, 1.0);
  const auto w = check_sync_hadamard(fa, fb, 1e-10);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->s, 0u);
  EXPECT_EQ(w->t, 1u);
  EXPECT_NEAR(w->violation, lambda_max(hadamard(p, q)), 1e-12);
}

TEST(SyncHadamard, ConstantFieldPasses) {
  Rng rng(5);
  const auto fa = make_field(recipe(FieldRecipe::Kind::custom_sampled, 2, 9));
  const auto fb = with_matrices(fa, std::vector<H>(fa.size(), random_hermitian(rng, 2)));
  EXPECT_FALSE(check_sync_hadamard(fa, fb, 0.0));
}

TEST(MakeField, AffineWithZeroSlopeIsConstant) {
  auto r = recipe(FieldRecipe::Kind::affine_increasing, 2, 1);
  r.p0 = H::diagonal({1, 2});
  r.p1 = H::zero(2);
  const auto f = make_field(r);
  for (const auto &a : f.matrices)
    EXPECT_EQ(a.matrix(), oracle::diag({1, 2}));
}

TEST(MakeField, AffineDirectConstruction) {
  auto r = recipe(FieldRecipe::Kind::affine_increasing, 2, 1);
  r.m = 4;
  r.p0 = H::identity(2);
  r.p1 = H::diagonal({1, 2});
  const auto f = make_field(r);
  ASSERT_EQ(f.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    const double t = (k + 0.5) / 4;
    EXPECT_DOUBLE_EQ(f.grid[k], t);
    EXPECT_DOUBLE_EQ(f.measures[k], 0.25);
    EXPECT_LE(oracle::max_abs_diff(f.matrices[k].matrix(), oracle::diag({1 + t, 1 + 2 * t})), 1e-15);
  }
  EXPECT_FALSE(find_order_violation(f, Monotonicity::increasing, 0.0));
}

TEST(MakeField, DeterministicPerSeed) {
  for (auto kind : {FieldRecipe::Kind::affine_increasing, FieldRecipe::Kind::power_family,
                    FieldRecipe::Kind::custom_sampled}) {
    const auto a = make_field(recipe(kind, 4, 77)), b = make_field(recipe(kind, 4, 77));
    for (std::size_t k = 0; k < a.size(); ++k)
      EXPECT_EQ(a.matrices[k], b.matrices[k]);
  }
}

TEST(MakeField, DecreasingDirection) {
  for (auto kind : {FieldRecipe::Kind::affine_increasing, FieldRecipe::Kind::power_family,
                    FieldRecipe::Kind::custom_sampled}) {
    auto r = recipe(kind, 3, 5);
    r.direction = Monotonicity::decreasing;
    const auto f = make_field(r);
    EXPECT_FALSE(find_order_violation(f, Monotonicity::decreasing, 1e-10 * field_scale(f)));
    EXPECT_TRUE(find_order_violation(f, Monotonicity::increasing, 0.0));
  }
}

TEST(MakeField, RejectsNonIncreasingRamp) {
  auto r = recipe(FieldRecipe::Kind::affine_increasing, 2, 1);
  r.ramp = "inv";
  EXPECT_THROW(make_field(r), PreconditionError);
}

TEST(FieldRecipe, JsonRoundTrip) {
  auto r = recipe(FieldRecipe::Kind::power_family, 3, 12);
  r.weight = "harm";
  r.direction = Monotonicity::decreasing;
  const auto back = field_recipe_from_json(to_json(r));
  EXPECT_EQ(to_json(back), to_json(r));
  EXPECT_THROW(field_recipe_from_json({{"kind", "spiral"}, {"dim", 2}}), UnknownName);
  EXPECT_THROW(field_recipe_from_json({{"kind", "power_family"}}), Error);
}
