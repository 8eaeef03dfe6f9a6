#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cheb/checkers.hpp"
#include "cheb/env.hpp"
#include "cheb/report.hpp"

namespace cheb {

struct SuiteInfo {
  std::string id;
  std::string statement; ///< one-line rendering of the inequality
  /// True for the three inequalities whose printed display differs from
  /// what the proof establishes; these are scored on Form::proved.
  bool has_printed_variant = false;
};

/// Registered suite ids in registry order.
const std::vector<SuiteInfo> &suite_registry();
/// Throws UnknownName.
const SuiteInfo &suite_info(std::string_view id);

/// Default scored form of a suite.
Form scored_form(std::string_view id);

/// Hypothesis-satisfying random instance for (seed, trial). Instances that
/// fail re-verification are regenerated from the same stream.
Env generate_instance(std::string_view id, std::uint64_t seed, std::size_t trial, int dim);

/// Native margin of the suite's inequality on an instance.
Margin suite_margin(std::string_view id, const Env &env, const CheckOptions &opt);

struct RunOptions {
  /// Overrides the suite's scored form.
  std::optional<Form> form;
  bool check_hypotheses = true;
  /// Evaluate this instance on every trial instead of generating.
  std::optional<Env> fixed_instance;
};

/// Trial t uses dimension dims[t % dims.size()]. Margins are normalized by
/// the instance scale and compared against -1e-8.
CheckReport run_suite(std::string_view id, std::size_t trials, const std::vector<int> &dims,
                      std::uint64_t seed, const RunOptions &opt = {});

/// tau = tr/2 on 2x2 matrices, f = g = 1/t, A = diag(2, 3), B = I: the
/// instance showing A <= B cannot be dropped from the decreasing-state
/// inequality.
Env necessity_counterexample();

struct CounterexampleValues {
  double lhs = 0.0;    ///< tau(A^{-2})
  double rhs = 0.0;    ///< tau(A^{-1}) tau(B^{-1})
  double margin = 0.0; ///< through margin_decreasing_state
};

/// Evaluates the counterexample with tau(X) = c tr(X). c = 1/2 is the
/// normalized trace; other values exist to exercise failure paths.
CounterexampleValues counterexample_values(double trace_normalization = 0.5);

/// Largest |margin| of the singular-value inequality at A = B = I over a
/// set of synchronous pairs, dimensions 1..6 and every index.
double singular_equality_residual();

} // namespace cheb
