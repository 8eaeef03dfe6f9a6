#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cheb/fields.hpp"
#include "cheb/funcalc.hpp"
#include "cheb/linalg.hpp"
#include "cheb/means.hpp"
#include "cheb/states.hpp"

namespace cheb {

/// Slack of an inequality LHS >= RHS.
struct Margin {
  enum class Kind { loewner, scalar };

  Kind kind = Kind::scalar;
  /// lambda_min(LHS - RHS) for loewner claims, LHS - RHS for scalar ones.
  double value = 0.0;
  /// Size of the compared quantities (Frobenius norm or absolute value of
  /// the larger side); used to scale comparisons between evaluators.
  double magnitude = 0.0;

  bool holds(double tol) const { return value >= -tol; }
};

Margin loewner_margin(const HermitianMatrix &lhs, const HermitianMatrix &rhs);
Margin scalar_margin(double lhs, double rhs);

/// Statement variant for the three inequalities whose printed form is not
/// what their proofs establish.
///
/// `printed` is the display as stated. `proved` is the inequality the
/// argument actually yields:
///   - decreasing state: tau(f(A)g(A)) >= tau(f(A)) tau(g(B))
///   - mixed state: tau2(f(B)g(B)) + f(tau1(A))g(tau1(A))
///                  >= f(tau1(A)) tau2(g(B)) + tau2(f(B)) g(tau1(A))
///   - singular main: the s_n product term is averaged over (A, B) and
///     (B, A) exactly like the s_j term.
/// Both coincide on the symmetric specialisations (A = B, tau1 = tau2).
enum class Form { printed, proved };

std::string to_string(Form f);
Form parse_form(const std::string &s);

/// Hypothesis checks are on by default; turning them off is only meant for
/// reproducing counterexamples.
struct CheckOptions {
  bool check_hypotheses = true;
  Form form = Form::printed;
};

// Field inequalities. The discrete statements are the unit-measure fields
// of discrete_field().

/// (int alpha)(int alpha A o B) - (int alpha A) o (int alpha B).
/// Requires the synchronous Hadamard property at 1e-10 * scale.
Margin margin_hadamard_chebyshev(const OperatorField &fa, const OperatorField &fb,
                                 const CheckOptions &opt = {});

/// (int alpha)(int alpha (A o B) s (C o D)) - (int alpha A s C) o (int alpha B s D)
/// for increasing PSD fields and a mean with super-multiplicative
/// representing function (sampled on [0, 8]).
Margin margin_mean_hadamard(const OperatorField &fa, const OperatorField &fb,
                            const OperatorField &fc, const OperatorField &fd,
                            const MeanDescriptor &mean, const CheckOptions &opt = {});

/// (int alpha)(int alpha A o B) - (int alpha A #_mu B) o (int alpha A #_{1-mu} B).
Margin margin_geo_split(const OperatorField &fa, const OperatorField &fb, double mu,
                        const CheckOptions &opt = {});

/// (sum w)(sum w f(A_j o B_j)) - (sum w f(A_j)) o (sum w f(B_j)) for
/// decreasing PSD chains and an operator monotone, super-multiplicative f.
Margin margin_monotone_fn(std::span<const double> weights, std::span<const HermitianMatrix> as,
                          std::span<const HermitianMatrix> bs, const ScalarFunction &f,
                          const CheckOptions &opt = {});

/// (sum w)^n det(sum w A_j o B_j) - (sum w^n det A_j)(sum w^n det B_j).
Margin margin_det(std::span<const double> weights, std::span<const HermitianMatrix> as,
                  std::span<const HermitianMatrix> bs, const CheckOptions &opt = {});

/// (sum w)(sum w tr(A_j^{-1} B_j)) - (sum w / tr(A_j))(sum w tr(B_j)) with A
/// decreasing and positive definite, B increasing and PSD.
Margin margin_trace(std::span<const double> weights, std::span<const HermitianMatrix> as,
                    std::span<const HermitianMatrix> bs, const CheckOptions &opt = {});

// State inequalities.

Margin margin_two_states(const StateDescriptor &tau1, const StateDescriptor &tau2,
                         const ScalarFunction &f, const ScalarFunction &g,
                         const HermitianMatrix &a, const HermitianMatrix &b,
                         const CheckOptions &opt = {});

/// Printed: tau(f(A)g(A)) - tau(f(B)) tau(g(A)). Requires A <= B, f
/// decreasing and nonnegative, g operator decreasing.
Margin margin_decreasing_state(const StateDescriptor &tau, const ScalarFunction &f,
                               const ScalarFunction &g, const HermitianMatrix &a,
                               const HermitianMatrix &b, const CheckOptions &opt = {});

/// Printed: tau2(f(A)g(A)) + f(tau1(B))g(tau1(B)) - f(tau1(A)) tau2(g(B))
/// - tau1(f(B)) g(tau2(A)). f and g must be defined on the whole line.
Margin margin_mixed_state(const StateDescriptor &tau1, const StateDescriptor &tau2,
                          const ScalarFunction &f, const ScalarFunction &g,
                          const HermitianMatrix &a, const HermitianMatrix &b,
                          const CheckOptions &opt = {});

/// (alpha beta - tau(f(B)g(B))) - (alpha - tau(f(B)))(beta - tau(g(A))).
Margin margin_aczel(const StateDescriptor &tau, const ScalarFunction &f, const ScalarFunction &g,
                    double alpha, double beta, const HermitianMatrix &a, const HermitianMatrix &b,
                    const CheckOptions &opt = {});

// Spectral inequalities; j is 1-based.

/// lambda_j(A + B) - (lambda_n(A) + lambda_j(B)).
Margin margin_eigsum(const HermitianMatrix &a, const HermitianMatrix &b, int j);

Margin margin_singular_main(const ScalarFunction &f, const ScalarFunction &g,
                            const HermitianMatrix &a, const HermitianMatrix &b, int j,
                            const CheckOptions &opt = {});

/// f(s_j(A))g(s_j(A)) + s_j(f(B)g(B)) - f(s_j(A)) s_n(g(B)) - s_j(f(B)) g(s_j(A)).
Margin margin_singular_alt(const ScalarFunction &f, const ScalarFunction &g,
                           const HermitianMatrix &a, const HermitianMatrix &b, int j,
                           const CheckOptions &opt = {});

/// The smallest interval containing every eigenvalue of the given matrices.
Interval spectral_hull(std::initializer_list<const HermitianMatrix *> ms);

} // namespace cheb
