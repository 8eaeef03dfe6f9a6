#include <gtest/gtest.h>

#include <set>

#include "cheb/suites.hpp"

using namespace cheb;

namespace {

const std::vector<int> kDims{2, 3, 4, 5, 6};

std::vector<std::string> ids() {
  std::vector<std::string> v;
  for (const auto &s : suite_registry())
    v.push_back(s.id);
  return v;
}

} // namespace

TEST(Registry, FourteenUniqueSuites) {
  const auto v = ids();
  EXPECT_EQ(v.size(), 14u);
  EXPECT_EQ(std::set<std::string>(v.begin(), v.end()).size(), v.size());
  EXPECT_THROW(suite_info("bogus_suite"), UnknownName);
  EXPECT_THROW(run_suite("bogus_suite", 1, {2}, 1), UnknownName);
}

TEST(Registry, ScoredForms) {
  std::set<std::string> variants;
  for (const auto &s : suite_registry())
    if (s.has_printed_variant)
      variants.insert(s.id);
  EXPECT_EQ(variants, (std::set<std::string>{"thm4_decreasing", "thm4_mixed", "thm5_singular_main"}));
  EXPECT_EQ(scored_form("thm4_mixed"), Form::proved);
  EXPECT_EQ(scored_form("cor2_discrete"), Form::printed);
}

TEST(RunSuite, DiscreteReferenceRun) {
  const auto r = run_suite("cor2_discrete", 1000, kDims, 42);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.records.size(), 1000u);
  EXPECT_GE(r.min_margin, -1e-8);
}

TEST(RunSuite, EigsumUpToDimEight) {
  const auto r = run_suite("lem5_eigsum", 1000, {2, 3, 4, 5, 6, 7, 8}, 7);
  EXPECT_TRUE(r.passed());
  EXPECT_GE(r.min_margin, -1e-10);
}

TEST(RunSuite, NecessityInstanceWithHypothesesOff) {
  RunOptions opt;
  opt.check_hypotheses = false;
  opt.fixed_instance = necessity_counterexample();
  const auto r = run_suite("thm4_decreasing", 1, {2}, 0, opt);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NEAR(r.violations[0].raw_margin, -17.0 / 72, 1e-12);
  EXPECT_FALSE(r.violations[0].instance.is_null());
}

TEST(RunSuite, NecessityInstanceRejectedWithHypothesesOn) {
  RunOptions opt;
  opt.fixed_instance = necessity_counterexample();
  EXPECT_THROW(run_suite("thm4_decreasing", 1, {2}, 0, opt), PreconditionError);
}

class EverySuite : public ::testing::TestWithParam<std::string> {};

TEST_P(EverySuite, PassesOnRandomInstances) {
  const auto r = run_suite(GetParam(), 200, kDims, 2024);
  EXPECT_TRUE(r.passed()) << r.violations.size() << " violations, min " << r.min_margin;
  EXPECT_EQ(r.form, to_string(scored_form(GetParam())));
}

TEST_P(EverySuite, InstancesSatisfyHypotheses) {
  for (std::size_t t = 0; t < 10; ++t) {
    const Env env = generate_instance(GetParam(), 5, t, 3);
    EXPECT_EQ(env.dim, 3);
    EXPECT_NO_THROW(suite_margin(GetParam(), env, {true, scored_form(GetParam())}));
  }
}

TEST_P(EverySuite, DeterministicApartFromElapsed) {
  const auto a = run_suite(GetParam(), 20, {2, 4}, 99);
  const auto b = run_suite(GetParam(), 20, {2, 4}, 99);
  EXPECT_EQ(to_json(a, false).dump(), to_json(b, false).dump());
  const auto c = run_suite(GetParam(), 20, {2, 4}, 100);
  EXPECT_NE(to_json(a, false)["min_margin"], to_json(c, false)["min_margin"]);
}

INSTANTIATE_TEST_SUITE_P(Registry, EverySuite, ::testing::ValuesIn(ids()),
                         [](const auto &info) { return info.param; });

TEST(PrintedForms, CountedAndFailing) {
  for (const char *id : {"thm4_decreasing", "thm4_mixed", "thm5_singular_main"}) {
    const auto scored = run_suite(id, 300, kDims, 42);
    EXPECT_TRUE(scored.passed()) << id;
    ASSERT_TRUE(scored.printed_form_violations) << id;
    EXPECT_GT(*scored.printed_form_violations, 0u) << id;
    EXPECT_FALSE(scored.notes.empty());

    RunOptions opt;
    opt.form = Form::printed;
    const auto printed = run_suite(id, 300, kDims, 42, opt);
    EXPECT_EQ(printed.violations.size(), *scored.printed_form_violations) << id;
    EXPECT_FALSE(printed.printed_form_violations);
  }
}

TEST(EqualityCases, ConstantFieldsInIntegralSuite) {
  for (std::size_t t = 0; t < 50; ++t) {
    Env env = generate_instance("thm2_integral", 11, t, 2 + static_cast<int>(t % 5));
    for (const char *name : {"A", "B"}) {
      auto &list = env.lists.at(name);
      list.assign(list.size(), list.front());
    }
    const auto m = suite_margin("thm2_integral", env, {});
    EXPECT_LE(std::abs(m.value) / env.scale(), 1e-10);
  }
}

TEST(EqualityCases, SingularValueSuiteAtIdentity) {
  EXPECT_LE(singular_equality_residual(), 1e-10);
}

TEST(Counterexample, ExactValues) {
  const auto v = counterexample_values();
  EXPECT_NEAR(v.lhs, 13.0 / 72, 1e-12);
  EXPECT_NEAR(v.rhs, 5.0 / 12, 1e-12);
  EXPECT_NEAR(v.margin, -17.0 / 72, 1e-12);
  EXPECT_LT(v.lhs, v.rhs);
}

TEST(Counterexample, WrongNormalizationIsDetectable) {
  const auto v = counterexample_values(0.4);
  EXPECT_GT(std::abs(v.lhs - 13.0 / 72), 1e-3);
}

TEST(Report, JsonSchema) {
  const auto r = run_suite("prop3_trace", 5, {2, 3}, 1);
  const auto j = to_json(r);
  for (const char *key : {"suite_id", "trials", "dims", "seed", "tolerance", "form", "min_margin",
                          "max_margin", "violations", "elapsed_s"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(to_json(r, false).contains("elapsed_s"));
  const auto csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trial,dim,margin");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}
