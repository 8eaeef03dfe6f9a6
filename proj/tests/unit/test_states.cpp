#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cheb/random.hpp"
#include "cheb/states.hpp"

using namespace cheb;

using H = HermitianMatrix;

TEST(States, NormalizedTrace) {
  EXPECT_DOUBLE_EQ(apply_state(StateDescriptor::normalized_trace(2), H::diagonal({2, 3})), 2.5);
}

TEST(States, VectorStateOnBasisVector) {
  Matrix m(2, 2);
  m << 7, Complex(1, 2), Complex(1, -2), 3;
  EXPECT_DOUBLE_EQ(apply_state(parse_state("vec:1", 2), H(m)), 7.0);
  EXPECT_DOUBLE_EQ(apply_state(parse_state("vec:2", 2), H(m)), 3.0);
}

TEST(States, HadamardTraceWithIdentityFilter) {
  const auto tau = StateDescriptor::hadamard_trace(H::identity(2));
  EXPECT_DOUBLE_EQ(tau.alpha(), 2.0);
  EXPECT_DOUBLE_EQ(apply_state(tau, H::diagonal({2, 3})), 2.5);
}

TEST(States, HadamardTraceByHand) {
  // tr(A o C) / tr(C) with off-diagonal entries of C ignored by the trace.
  const auto tau = StateDescriptor::hadamard_trace(H::real({{2, 1}, {1, 3}}));
  EXPECT_NEAR(apply_state(tau, H::real({{1, 5}, {5, 2}})), (2.0 * 1 + 3.0 * 2) / 5.0, 1e-15);
}

TEST(States, ConstructionErrors) {
  Vector x(2);
  x << 1, 1;
  EXPECT_THROW(StateDescriptor::vector_state(x), PreconditionError);
  EXPECT_THROW(StateDescriptor::hadamard_trace(H::diagonal({1, -0.5})), PreconditionError);
  EXPECT_THROW(parse_state("vec:3", 2), PreconditionError);
  EXPECT_THROW(parse_state("vec:0", 2), PreconditionError);
  EXPECT_THROW(parse_state("uniform", 2), UnknownName);
  EXPECT_THROW(apply_state(StateDescriptor::normalized_trace(2), H::identity(3)), DimensionMismatch);
}

TEST(States, VectorFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "cheb_state_vec.json";
  std::ofstream(path) << R"({"re": [0.6, 0], "im": [0, 0.8]})";
  const auto tau = parse_state("vec:" + path.string(), 2);
  EXPECT_NEAR(apply_state(tau, H::diagonal({1, 2})), 0.36 + 2 * 0.64, 1e-15);
  std::filesystem::remove(path);
}

TEST(ValidateState, NormalizedTracePasses) {
  const auto r = validate_state(StateDescriptor::normalized_trace(4), 100, 1);
  EXPECT_TRUE(r.passed());
}

TEST(ValidateState, RandomVectorStatePasses) {
  Rng rng(2);
  const auto r = validate_state(StateDescriptor::vector_state(random_unit_vector(rng, 3)), 100, 2);
  EXPECT_TRUE(r.passed());
}

TEST(ValidateState, NonPsdFilterIsCaught) {
  const auto tau = StateDescriptor::hadamard_trace_unchecked(H::diagonal({1, -0.5}));
  const auto r = validate_state(tau, 20, 3);
  EXPECT_FALSE(r.passed());
  EXPECT_LT(r.min_margin, -0.5);
}

TEST(ValidateState, EveryKindAcrossDims) {
  Rng rng(4);
  for (int n = 2; n <= 6; ++n) {
    const H c = random_psd(rng, n) + 0.1 * H::identity(n);
    for (const auto &tau : {StateDescriptor::normalized_trace(n),
                            StateDescriptor::vector_state(random_unit_vector(rng, n)),
                            StateDescriptor::hadamard_trace(c)})
      EXPECT_TRUE(validate_state(tau, 1000, 5).passed()) << tau.name() << " dim " << n;
  }
}

TEST(States, HadamardTracePositiveOnPsd) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 5;
    const auto tau = StateDescriptor::hadamard_trace(random_psd(rng, n) + 0.01 * H::identity(n));
    const H a = random_psd(rng, n, 1);
    EXPECT_GE(apply_state(tau, a), -1e-12 * std::max(1.0, a.frobenius()));
  }
}
