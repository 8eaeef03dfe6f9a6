#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cheb/linalg.hpp"

namespace cheb {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Eigenvalues may overshoot a closed domain endpoint by this much; they are
/// clamped onto the endpoint before evaluation.
inline constexpr double kDomainSlack = 1e-10;

/// Real interval with independently open/closed ends; infinite ends are open.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval real_line() { return {}; }
  static Interval nonnegative() { return {0.0, kInf, true, false}; }
  static Interval positive() { return {0.0, kInf, false, false}; }

  bool empty() const;
  bool bounded() const { return lo > -kInf && hi < kInf; }
  bool contains(double x, double slack = 0.0) const;
  bool contains(const Interval &other) const;
  std::string to_string() const;
};

enum class Tri { unknown, declared_true, declared_false };

/// Catalog metadata. Checkers only rely on declared_true entries.
struct FunctionFlags {
  Tri monotone_increasing = Tri::unknown;
  Tri monotone_decreasing = Tri::unknown;
  Tri operator_monotone = Tri::unknown;
  Tri operator_decreasing = Tri::unknown;
  Tri nonnegative = Tri::unknown;
};

/// A named real function on an interval, e.g. "pow:0.5" or "inv".
class ScalarFunction {
public:
  using Rule = std::function<double(double)>;

  /// Probes the rule on 256 points of the domain and throws DomainError if
  /// any value is not finite.
  ScalarFunction(std::string name, Interval domain, Rule rule, FunctionFlags flags);

  const std::string &name() const noexcept { return name_; }
  const Interval &domain() const noexcept { return domain_; }
  const FunctionFlags &flags() const noexcept { return flags_; }

  /// Evaluates with endpoint slack; throws DomainError outside the domain.
  double operator()(double x) const;

private:
  std::string name_;
  Interval domain_;
  Rule rule_;
  FunctionFlags flags_;
};

/// Immutable registry of the bundled functions. Specs look like
/// `pow:<p>`, `exp:<a>`, `affine:<a>:<b>`, `min:<c>`, `const:<c>`, `id`,
/// `log`, `inv`, `harm` (2t/(1+t)), `frac` (t/(1+t)).
class FunctionCatalog {
public:
  ScalarFunction make(std::string_view spec) const;
  std::vector<std::string> forms() const;
};

const FunctionCatalog &function_catalog();

/// Shorthand for function_catalog().make(spec).
ScalarFunction make_function(std::string_view spec);

/// x -> outer(inner(x)) on inner's domain; flags unknown.
ScalarFunction compose(const ScalarFunction &outer, const ScalarFunction &inner);

/// V diag(f(lambda_j)) V*. Throws DomainError naming the first eigenvalue
/// outside f's domain.
HermitianMatrix apply_function(const ScalarFunction &f, const HermitianMatrix &a);
HermitianMatrix apply_function(const ScalarFunction &f, const EigenSystem &es);

/// A sampled counterexample; `violation` is strictly positive.
struct Witness {
  std::vector<double> points;
  double violation = 0.0;
};

/// Uniform grid on a bounded interval, endpoints included.
std::vector<double> uniform_grid(const Interval &j, int n);

inline constexpr int kDefaultGrid = 64;

/// Samples (f(t)-f(s))(g(t)-g(s)) >= 0 over all grid pairs. Returns the
/// worst violating pair, or nullopt. A pass does not prove synchronicity.
std::optional<Witness> check_synchronous(const ScalarFunction &f, const ScalarFunction &g,
                                         const Interval &j, int grid_n = kDefaultGrid);

/// Samples f(xy) >= f(x)f(y) - 1e-12 over grid pairs. Every product xy must
/// lie in f's domain (PreconditionError otherwise). Returns the worst
/// violating pair, or nullopt.
std::optional<Witness> check_supermultiplicative(const ScalarFunction &f, const Interval &j,
                                                 int grid_n = kDefaultGrid);

} // namespace cheb
