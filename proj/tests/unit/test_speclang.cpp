#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cheb/speclang.hpp"
#include "cheb/suites.hpp"
#include "oracles.hpp"

using namespace cheb;
using namespace cheb::spec;

namespace {

namespace fs = std::filesystem;

using H = HermitianMatrix;

const char *const kDiscreteChebyshev =
    "sum(j,w[j]) * sum(j, w[j]*(A[j] .o. B[j])) >= sum(j, w[j]*A[j]) .o. sum(j, w[j]*B[j])";

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> corpus(const fs::path &dir) {
  std::vector<fs::path> out;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.path().extension() == ".ineq")
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

SpecError parse_error(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const SpecError &e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return SpecError("none", 0, 0);
}

} // namespace

TEST(Parse, DiscreteChebyshevWithShortHeader) {
  const auto s = parse_spec("lists A,B; weights w", kDiscreteChebyshev);
  EXPECT_EQ(s.relation, Relation::loewner_ge);
  EXPECT_FALSE(s.reversed);
  ASSERT_NE(s.binding("A"), nullptr);
  EXPECT_EQ(s.binding("A")->sort, Sort::list);
  EXPECT_EQ(s.binding("w")->sort, Sort::weights);
  EXPECT_EQ(s.lhs.op, Op::scalar_mul);
  EXPECT_EQ(s.rhs.op, Op::hadamard);
  EXPECT_EQ(s.rhs.args.at(0).op, Op::sum);
}

TEST(Parse, StateRelationIsScalar) {
  const auto s = parse_spec("state(ntrace, f(A)*g(A)) >= state(ntrace, f(A))*state(ntrace, g(A))");
  EXPECT_EQ(s.relation, Relation::scalar_ge);
  EXPECT_EQ(s.lhs.op, Op::state);
  EXPECT_EQ(s.lhs.args.at(0).op, Op::mat_mul);
  EXPECT_EQ(s.binding("f")->sort, Sort::function);
  EXPECT_TRUE(s.binding("A")->inferred);
}

TEST(Parse, UnclosedCallReportsColumnFour) {
  const auto e = parse_error("tr(");
  EXPECT_EQ(e.line(), 1);
  EXPECT_EQ(e.column(), 4);
  EXPECT_NE(e.detail().find("unbalanced"), std::string::npos) << e.what();
}

TEST(Parse, PositionedErrors) {
  struct Case {
    const char *text;
    int line, column;
    const char *needle;
  };
  const Case cases[] = {
      {"A @ B >= A", 1, 3, "unexpected"},
      {"A .z. B >= A", 1, 3, "unknown operator"},
      {"let A : matrix;\nA + Q >= A", 2, 5, "undeclared"},
      {"let A : matrix;\nlet x : scalar;\ntr(x) >= 0", 3, 4, "matrix"},
      {"let A : matrix;\ntr(A) >= A", 2, 1, "mixed"},
      {"A) >= A", 1, 2, ")"},
      {"let A : matrix;\nA >= A + (A", 2, 12, "never closed"},
      {"let A : matrix bogus;\nA >= A", 1, 16, "constraint"},
      {"A >= 1.2.3", 1, 9, "unexpected character"},
  };
  for (const auto &c : cases) {
    const auto e = parse_error(c.text);
    EXPECT_EQ(e.line(), c.line) << c.text << " -> " << e.what();
    EXPECT_EQ(e.column(), c.column) << c.text << " -> " << e.what();
    EXPECT_NE(e.detail().find(c.needle), std::string::npos) << c.text << " -> " << e.what();
  }
}

TEST(Parse, TotalityOnRandomInput) {
  const std::vector<std::string> atoms{"A", "B", "w", "j", "f", "(", ")", "[", "]", ",", ";", "+",
                                       "-", "*", "/", "^", ".o.", ".x.", "#[", "0.5", "2", "tr",
                                       "sum", "state", "let", ":", "matrix", ">=", "<=", "mean:s",
                                       "\"id\"", "@", ".", "#", "\n", "sval", "dim", "é"};
  Rng rng(1);
  int errors = 0;
  for (int t = 0; t < 3000; ++t) {
    std::string text;
    const int len = rng.uniform_int(0, 14);
    for (int k = 0; k < len; ++k)
      text += atoms[rng.uniform_int(0, static_cast<int>(atoms.size()) - 1)] + " ";
    try {
      parse_spec(text);
    } catch (const SpecError &e) {
      ++errors;
      EXPECT_GE(e.line(), 1) << text;
      EXPECT_GE(e.column(), 1) << text;
    } catch (const std::exception &e) {
      ADD_FAILURE() << "non-positioned failure on '" << text << "': " << e.what();
    }
  }
  EXPECT_GT(errors, 2500);
}

TEST(Format, DiscreteChebyshevRoundTrip) {
  const auto s = parse_spec("lists A,B; weights w", kDiscreteChebyshev);
  const auto text = format_spec(s);
  const auto back = parse_spec(text);
  EXPECT_EQ(back, s) << text;
  EXPECT_EQ(format_spec(back), text);
}

TEST(Format, RedundantParensDropped) {
  const auto noisy = parse_spec("let A, B, C : matrix;\n((A)) + ((B) .o. (C)) >= (A)");
  const auto clean = parse_spec("let A, B, C : matrix;\nA + B .o. C >= A");
  EXPECT_EQ(noisy, clean);
  EXPECT_EQ(format_spec(noisy), format_spec(clean));
  EXPECT_EQ(format_expr(noisy.lhs), "A + B .o. C");
}

TEST(Format, NecessaryParensKept) {
  const auto s = parse_spec("let A, B, C : matrix;\n(A + B) .o. C - (A - B) >= -(A * B)");
  EXPECT_EQ(format_expr(s.lhs), "(A + B) .o. C - (A - B)");
  EXPECT_EQ(parse_spec(format_spec(s)), s);
}

TEST(Format, NestedSums) {
  const auto s = parse_spec("lists A; weights w, v",
                            "sum(i, v[i] * sum(j, w[j] * (A[i] .o. A[j]))) >= sum(i, v[i]*A[i]) .o. sum(j, w[j]*A[j])");
  const auto text = format_expr(s.lhs);
  EXPECT_EQ(text, "sum(i, v[i] * sum(j, w[j] * (A[i] .o. A[j])))");
  EXPECT_EQ(parse_spec(format_spec(s)), s);
}

TEST(Format, CorpusRoundTrip) {
  for (const auto &dir : {fs::path(CHEB_SPECS_DIR), fs::path(CHEB_SPECS_DIR) / "errata"})
    for (const auto &p : corpus(dir)) {
      const auto s = parse_spec(slurp(p));
      const auto text = format_spec(s);
      EXPECT_EQ(parse_spec(text), s) << p << "\n" << text;
    }
}

TEST(Evaluate, Variable) {
  const auto s = parse_spec("let A : matrix;\nA >= A");
  Env env;
  env.dim = 2;
  env.matrices.emplace("A", H::identity(2));
  const auto v = evaluate_expr(s.lhs, s, env);
  ASSERT_FALSE(v.is_scalar);
  EXPECT_EQ(v.matrix, Matrix::Identity(2, 2));
}

TEST(Evaluate, HadamardOfGeneralMatrices) {
  const auto s = parse_spec("let A, B : matrix;\nA .o. B >= A");
  Env env;
  env.dim = 2;
  env.general_matrices["A"] = oracle::real({{1, 2}, {3, 4}});
  env.general_matrices["B"] = oracle::real({{5, 6}, {7, 8}});
  EXPECT_EQ(evaluate_expr(s.lhs, s, env).matrix, oracle::real({{5, 12}, {21, 32}}));
}

TEST(Evaluate, WeightedSum) {
  const auto s = parse_spec("lists A; weights w", "sum(j, w[j]*A[j]) >= sum(j, A[j])");
  Env env;
  env.dim = 2;
  env.weights["w"] = {1, 2};
  env.lists["A"] = {H::identity(2), H::diagonal({1, 0})};
  EXPECT_EQ(evaluate_expr(s.lhs, s, env).matrix, oracle::diag({3, 1}));
}

TEST(Evaluate, OperatorsAgainstKernels) {
  const auto s = parse_spec(
      "let A, B : matrix psd; let f : fn = \"pow:2\"; let s : mean = \"harmonic\"; let k : scalar = 2;\n"
      "(A .x. B) + ((A #[0.25] B) .x. (A mean:s B)) >= tr(f(A)) * det(B) * (A .o. B .x. (A * B)) / eig(A, k)");
  Rng rng(3);
  Env env;
  env.dim = 2;
  const H a = random_psd(rng, 2) + 0.1 * H::identity(2), b = random_psd(rng, 2);
  env.matrices.emplace("A", a);
  env.matrices.emplace("B", b);
  env.functions.emplace("f", make_function("pow:2"));
  env.means.emplace("s", MeanDescriptor::harmonic());
  env.scalars["k"] = 2;
  const Matrix lhs = oracle::kron(a.matrix(), b.matrix()) +
                     oracle::kron(weighted_geometric(a, b, 0.25).matrix(),
                                  apply_mean(MeanDescriptor::harmonic(), a, b).matrix());
  EXPECT_LE(oracle::max_abs_diff(evaluate_expr(s.lhs, s, env).matrix, lhs), 1e-12);
  const double c = oracle::matmul(a.matrix(), a.matrix()).trace().real() * oracle::det(b.matrix()).real() /
                   hermitian_eigen(a).values[1];
  const Matrix rhs = c * oracle::kron(oracle::hadamard(a.matrix(), b.matrix()), oracle::matmul(a.matrix(), b.matrix()));
  EXPECT_LE(oracle::max_abs_diff(evaluate_expr(s.rhs, s, env).matrix, rhs), 1e-10 * std::max(1.0, rhs.norm()));
}

TEST(Evaluate, IndexOutOfRange) {
  const auto s = parse_spec("let A : matrix; let k : scalar = 3;\neig(A, k) >= 0");
  Env env;
  env.dim = 2;
  env.matrices.emplace("A", H::identity(2));
  env.scalars["k"] = 3;
  try {
    evaluate_expr(s.lhs, s, env);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("2:1"), std::string::npos) << e.what();
  }
}

TEST(Evaluate, DomainErrorPropagates) {
  const auto s = parse_spec("let A : matrix herm; let f : fn = \"log\";\ntr(f(A)) >= 0");
  Env env;
  env.dim = 2;
  env.matrices.emplace("A", H::diagonal({1, -1}));
  env.functions.emplace("f", make_function("log"));
  EXPECT_THROW(evaluate_expr(s.lhs, s, env), DomainError);
}

TEST(CheckSpec, DiscreteChebyshevHoldsFromHeader) {
  const auto s = parse_spec(slurp(fs::path(CHEB_SPECS_DIR) / "cor2_discrete.ineq"));
  const auto r = check_spec(s, 200, {2, 3, 4}, 42);
  EXPECT_TRUE(r.passed()) << r.violations.size();
}

TEST(CheckSpec, ReversedInequalityFails) {
  auto text = slurp(fs::path(CHEB_SPECS_DIR) / "cor2_discrete.ineq");
  text.replace(text.find(">="), 2, "<=");
  const auto s = parse_spec(text);
  EXPECT_TRUE(s.reversed);
  const auto r = check_spec(s, 200, {2, 3, 4}, 42);
  EXPECT_GE(r.violations.size(), 180u);
}

TEST(CheckSpec, SingleTermListsCollapse) {
  const auto s = parse_spec("let A, B : list dec herm len(1); let w : weights len(1);\n"
                            "sum(j, w[j]) * sum(j, w[j] * (A[j] .o. B[j])) >= sum(j, w[j] * A[j]) .o. sum(j, w[j] * B[j])");
  const auto r = check_spec(s, 50, {2, 3}, 5);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(std::max(std::abs(r.min_margin), std::abs(r.max_margin)), 1e-12);
}

TEST(CheckSpec, GeneratedInstancesSatisfyHeader) {
  for (const auto &p : corpus(CHEB_SPECS_DIR)) {
    const auto s = parse_spec(slurp(p));
    for (std::uint64_t t = 0; t < 20; ++t) {
      Rng rng(t);
      const Env env = generate_from_header(s, rng, 2 + static_cast<int>(t % 4));
      EXPECT_NO_THROW(verify_constraints(s, env)) << p;
    }
  }
}

TEST(CheckSpec, GeneratorNeedsFunctionValues) {
  const auto s = parse_spec("let A : matrix psd; let f : fn;\ntr(f(A)) >= 0");
  Rng rng(1);
  EXPECT_THROW(generate_from_header(s, rng, 2), SpecError);
}

TEST(CheckSpec, SuiteSortMismatch) {
  const auto s = parse_spec("let X : matrix psd;\ntr(X) >= 0");
  EXPECT_THROW(check_spec(s, 1, {2}, 1, {"cor2_discrete"}), Error);
}

TEST(Consistency, CorpusMatchesNativeMargins) {
  for (const auto &p : corpus(CHEB_SPECS_DIR)) {
    const auto id = p.stem().string();
    const auto s = parse_spec(slurp(p));
    const auto c = compare_with_suite(s, id, 50, {2, 3, 4, 5, 6}, 42);
    EXPECT_EQ(c.trials, 50u);
    EXPECT_LE(c.max_discrepancy, 1e-12) << id << " trial " << c.worst_trial;
  }
}

TEST(Consistency, ErrataMatchPrintedForms) {
  for (const auto &p : corpus(fs::path(CHEB_SPECS_DIR) / "errata")) {
    const auto id = p.stem().string();
    const auto s = parse_spec(slurp(p));
    double worst = 0;
    for (std::size_t t = 0; t < 30; ++t) {
      const Env env = generate_instance(id, 42, t, 2 + static_cast<int>(t % 5));
      const auto native = suite_margin(id, env, {true, Form::printed});
      const auto got = spec_margin(s, env);
      worst = std::max(worst, std::abs(got.value - native.value) / std::max(1.0, native.magnitude));
    }
    EXPECT_LE(worst, 1e-12) << id;
  }
}
