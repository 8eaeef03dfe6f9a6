#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cheb/checkers.hpp"
#include "cheb/env.hpp"
#include "cheb/random.hpp"
#include "cheb/report.hpp"

namespace cheb::spec {

/// Lexical, syntactic or sort error, positioned at a 1-based line and column.
class SpecError : public Error {
public:
  SpecError(const std::string &what, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  /// Message without the "line:col: " prefix.
  const std::string &detail() const noexcept { return detail_; }

private:
  int line_;
  int column_;
  std::string detail_;
};

enum class Sort { list, matrix, weights, scalar, function, state, mean };

std::string to_string(Sort s);

/// Header constraint such as `dec`, `psd`, `len(3)`, `ge(A)`, `in(0, 1)`.
/// Arguments keep their source spelling.
struct Constraint {
  std::string name;
  std::vector<std::string> args;

  bool operator==(const Constraint &) const = default;
};

struct Binding {
  std::string name;
  Sort sort = Sort::scalar;
  std::vector<Constraint> constraints;
  /// `= "pow:0.5"` for functions, states and means.
  std::optional<std::string> text_value;
  /// `= 0.25` for scalars.
  std::optional<double> number_value;
  /// Sort came from the headerless naming convention, not a declaration.
  bool inferred = false;
  int line = 0; ///< source position of the name; ignored by ==
  int column = 0;

  bool has(std::string_view constraint) const;
  const Constraint *find(std::string_view constraint) const;

  bool operator==(const Binding &o) const;
};

enum class Op {
  constant,
  dim,
  var,
  index_var, ///< name[index]
  add,
  sub,
  neg,
  mul,        ///< unresolved `*`; the sort checker rewrites it
  scalar_mul, ///< scalar * scalar, scalar * matrix or matrix * scalar
  mat_mul,
  div,        ///< division by a scalar
  power,
  hadamard,   ///< .o.
  kron,       ///< .x.
  geo,        ///< A #[mu] B; children {A, mu, B}
  mean,       ///< A mean:name B
  fn_apply,   ///< name(x)
  trace,
  det,
  sval,       ///< sval(X, k)
  eig,        ///< eig(X, k)
  state,      ///< state(name, X)
  sum,        ///< sum(index, body); `name` holds the index
};

struct Expr {
  Op op = Op::constant;
  double number = 0.0;
  std::string name;
  std::string index; ///< index_var only
  std::vector<Expr> args;
  int line = 0;
  int column = 0;

  /// Filled in by the sort checker.
  bool is_matrix = false;
  int dim_class = 0; ///< operand dimension is n^dim_class

  /// Structural equality: op, payload and children. Positions and checker
  /// annotations are ignored.
  bool operator==(const Expr &o) const;
};

enum class Relation { loewner_ge, scalar_ge };

struct InequalitySpec {
  std::vector<Binding> bindings;
  Expr lhs;
  Expr rhs;
  Relation relation = Relation::scalar_ge;
  /// Written with `<=`; the margin is then rhs - lhs.
  bool reversed = false;

  const Binding *binding(std::string_view name) const;

  /// Structural equality over bindings and both expression trees.
  bool operator==(const InequalitySpec &o) const;
};

/// Parses header statements followed by one relation. Statements are
/// separated by semicolons; a trailing semicolon is optional.
///
/// Without any declaration, sorts follow from usage: call heads are
/// functions, first arguments of state() are states, indexed names are
/// lists (uppercase initial) or weights, other uppercase names are matrices
/// and lowercase ones scalars.
InequalitySpec parse_spec(std::string_view text);
/// Header and relation given separately, e.g. ("lists A, B; weights w", "...").
InequalitySpec parse_spec(std::string_view header, std::string_view relation);

/// Canonical text: one `let` line per declared binding, then the relation
/// with minimal parentheses.
std::string format_spec(const InequalitySpec &s);
std::string format_expr(const Expr &e);

/// Evaluated expression: a scalar or a matrix; matrices remember whether
/// they are Hermitian by construction.
struct Value {
  bool is_scalar = true;
  double scalar = 0.0;
  Matrix matrix;
  bool hermitian = false;

  static Value of(double x);
  static Value of(const HermitianMatrix &m);
  static Value of_general(Matrix m);

  HermitianMatrix as_hermitian() const;
};

/// Evaluates left to right against env. Sum indices are bound in `indices`.
Value evaluate_expr(const Expr &e, const InequalitySpec &s, const Env &env,
                    const std::map<std::string, std::size_t> &indices = {});

/// lambda_min(lhs - rhs) or lhs - rhs (sides swapped for `<=`).
Margin spec_margin(const InequalitySpec &s, const Env &env);

/// Random instance satisfying the header constraints. Throws SpecError when
/// the header cannot drive a generator (e.g. a function without a value).
Env generate_from_header(const InequalitySpec &s, Rng &rng, int dim);

/// Re-checks every header constraint on env; throws PreconditionError.
void verify_constraints(const InequalitySpec &s, const Env &env);

/// Where check_spec takes its instances from.
struct SpecSource {
  /// Use this suite's verified instances instead of the header generator.
  std::optional<std::string> suite_id;
};

/// Margins are normalized by the instance scale as in run_suite.
CheckReport check_spec(const InequalitySpec &s, std::size_t trials, const std::vector<int> &dims,
                       std::uint64_t seed, const SpecSource &source = {});

struct SpecComparison {
  /// max over trials of |spec - native| / max(1, native magnitude).
  double max_discrepancy = 0.0;
  std::size_t worst_trial = 0;
  std::size_t trials = 0;
};

/// Evaluates the spec and the suite's native checker on the same instances.
SpecComparison compare_with_suite(const InequalitySpec &s, std::string_view suite_id,
                                  std::size_t trials, const std::vector<int> &dims,
                                  std::uint64_t seed);

} // namespace cheb::spec
