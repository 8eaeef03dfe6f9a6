#include <charconv>
#include <cmath>
#include <set>

#include "cheb/random.hpp"
#include "speclang_internal.hpp"

namespace cheb::spec {

Value Value::of(double x) {
  Value v;
  v.scalar = x;
  return v;
}

Value Value::of(const HermitianMatrix &m) {
  Value v;
  v.is_scalar = false;
  v.matrix = m.matrix();
  v.hermitian = true;
  return v;
}

Value Value::of_general(Matrix m) {
  Value v;
  v.is_scalar = false;
  v.matrix = std::move(m);
  return v;
}

HermitianMatrix Value::as_hermitian() const {
  if (is_scalar)
    throw Error("expected a matrix value, found a scalar");
  if (!hermitian)
    throw Error("operation needs a Hermitian matrix; this value is a general product");
  return HermitianMatrix::from_hermitian_part(matrix);
}

namespace {

constexpr double kHypothesisTol = 1e-10;
constexpr int kMinLength = 2;
constexpr int kMaxLength = 5;

std::string number(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

[[noreturn]] void eval_fail(const std::string &msg, const Expr &at) {
  throw Error("at " + std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + msg);
}

bool is_builtin_function(const std::string &name) {
  return name == "id" || name == "log" || name == "inv" || name == "harm" || name == "frac";
}

ScalarFunction lookup_function(const std::string &name, const Env &env) {
  if (const auto it = env.functions.find(name); it != env.functions.end())
    return it->second;
  if (is_builtin_function(name))
    return make_function(name);
  return env.function(name);
}

StateDescriptor lookup_state(const std::string &name, const Env &env) {
  if (const auto it = env.states.find(name); it != env.states.end())
    return it->second;
  if (name == "ntrace")
    return StateDescriptor::normalized_trace(env.dim);
  return env.state(name);
}

int integer_index(double x, int n, const char *what, const Expr &at) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9)
    eval_fail(std::string(what) + " index " + number(x) + " is not an integer", at);
  if (r < 1 || r > n)
    eval_fail(std::string(what) + " index " + number(r) + " outside 1.." + std::to_string(n), at);
  return static_cast<int>(r);
}

void collect_lengths(const Expr &e, const std::string &index, const Env &env,
                     const InequalitySpec &s, std::set<std::size_t> &out) {
  if (e.op == Op::index_var && e.index == index) {
    const Binding *b = s.binding(e.name);
    if (b && b->sort == Sort::weights)
      out.insert(env.weight(e.name).size());
    else
      out.insert(env.list(e.name).size());
  }
  // An inner sum rebinding the same index cannot occur (the checker forbids it).
  for (const auto &a : e.args)
    collect_lengths(a, index, env, s, out);
}

Value add(const Value &a, const Value &b, double sign, const Expr &at) {
  if (a.is_scalar != b.is_scalar)
    eval_fail("cannot combine a scalar and a matrix", at);
  if (a.is_scalar)
    return Value::of(a.scalar + sign * b.scalar);
  if (a.matrix.rows() != b.matrix.rows())
    throw DimensionMismatch("at " + std::to_string(at.line) + ":" + std::to_string(at.column) +
                            ": operands of size " + std::to_string(a.matrix.rows()) + " and " +
                            std::to_string(b.matrix.rows()));
  Value v = Value::of_general(sign > 0 ? Matrix(a.matrix + b.matrix) : Matrix(a.matrix - b.matrix));
  v.hermitian = a.hermitian && b.hermitian;
  return v;
}

void same_size(const Value &a, const Value &b, const Expr &at) {
  if (a.matrix.rows() != b.matrix.rows())
    throw DimensionMismatch("at " + std::to_string(at.line) + ":" + std::to_string(at.column) +
                            ": operands of size " + std::to_string(a.matrix.rows()) + " and " +
                            std::to_string(b.matrix.rows()));
}

Value matrix_power(const Value &base, double p, const Expr &at) {
  const int n = static_cast<int>(base.matrix.rows());
  if (p >= 0.0 && p == std::floor(p) && p <= 64.0) {
    Matrix acc = Matrix::Identity(n, n);
    for (int i = 0; i < static_cast<int>(p); ++i)
      acc = acc * base.matrix;
    if (base.hermitian)
      return Value::of(HermitianMatrix::from_hermitian_part(acc));
    return Value::of_general(std::move(acc));
  }
  if (!base.hermitian)
    eval_fail("non-integer or negative power of a non-Hermitian matrix", at);
  const ScalarFunction f = p == -1.0 ? make_function("inv") : make_function("pow:" + number(p));
  return Value::of(apply_function(f, base.as_hermitian()));
}

} // namespace

Value evaluate_expr(const Expr &e, const InequalitySpec &s, const Env &env,
                    const std::map<std::string, std::size_t> &indices) {
  auto eval = [&](const Expr &x) { return evaluate_expr(x, s, env, indices); };
  auto herm = [&](const Expr &x) {
    const Value v = eval(x);
    if (v.is_scalar || !v.hermitian)
      eval_fail("operand must be a Hermitian matrix", x);
    return v.as_hermitian();
  };
  switch (e.op) {
  case Op::constant:
    return Value::of(e.number);
  case Op::dim:
    return Value::of(env.dim);
  case Op::var: {
    const Binding *b = s.binding(e.name);
    if (b && b->sort == Sort::scalar)
      return Value::of(env.scalar(e.name));
    if (const auto it = env.general_matrices.find(e.name); it != env.general_matrices.end())
      return Value::of_general(it->second);
    return Value::of(env.matrix(e.name));
  }
  case Op::index_var: {
    const auto it = indices.find(e.index);
    if (it == indices.end())
      eval_fail("index '" + e.index + "' is unbound", e);
    const Binding *b = s.binding(e.name);
    if (b && b->sort == Sort::weights) {
      const auto &w = env.weight(e.name);
      if (it->second >= w.size())
        eval_fail("index out of range for '" + e.name + "'", e);
      return Value::of(w[it->second]);
    }
    const auto &l = env.list(e.name);
    if (it->second >= l.size())
      eval_fail("index out of range for '" + e.name + "'", e);
    return Value::of(l[it->second]);
  }
  case Op::sum: {
    std::set<std::size_t> lengths;
    collect_lengths(e.args[0], e.name, env, s, lengths);
    if (lengths.size() != 1)
      throw DimensionMismatch("at " + std::to_string(e.line) + ":" + std::to_string(e.column) +
                              ": sum over '" + e.name + "' indexes lists of different lengths");
    const std::size_t len = *lengths.begin();
    if (len == 0)
      eval_fail("sum over an empty list", e);
    auto inner = indices;
    inner[e.name] = 0;
    Value acc = evaluate_expr(e.args[0], s, env, inner);
    for (std::size_t j = 1; j < len; ++j) {
      inner[e.name] = j;
      acc = add(acc, evaluate_expr(e.args[0], s, env, inner), 1.0, e);
    }
    return acc;
  }
  case Op::add:
  case Op::sub: {
    const Value a = eval(e.args[0]);
    const Value b = eval(e.args[1]);
    return add(a, b, e.op == Op::add ? 1.0 : -1.0, e);
  }
  case Op::neg: {
    Value v = eval(e.args[0]);
    if (v.is_scalar)
      v.scalar = -v.scalar;
    else
      v.matrix = -v.matrix;
    return v;
  }
  case Op::mul:
  case Op::scalar_mul:
  case Op::mat_mul: {
    const Value a = eval(e.args[0]);
    const Value b = eval(e.args[1]);
    if (a.is_scalar && b.is_scalar)
      return Value::of(a.scalar * b.scalar);
    if (a.is_scalar || b.is_scalar) {
      const Value &m = a.is_scalar ? b : a;
      const double c = a.is_scalar ? a.scalar : b.scalar;
      Value v = Value::of_general(Matrix(c * m.matrix));
      v.hermitian = m.hermitian;
      return v;
    }
    same_size(a, b, e);
    return Value::of_general(Matrix(a.matrix * b.matrix));
  }
  case Op::div: {
    Value a = eval(e.args[0]);
    const Value b = eval(e.args[1]);
    if (!b.is_scalar)
      eval_fail("division by a matrix", e);
    if (a.is_scalar)
      a.scalar /= b.scalar;
    else
      a.matrix /= b.scalar;
    return a;
  }
  case Op::power: {
    const Value base = eval(e.args[0]);
    const Value p = eval(e.args[1]);
    if (base.is_scalar)
      return Value::of(std::pow(base.scalar, p.scalar));
    return matrix_power(base, p.scalar, e);
  }
  case Op::hadamard: {
    const Value a = eval(e.args[0]);
    const Value b = eval(e.args[1]);
    same_size(a, b, e);
    if (a.hermitian && b.hermitian)
      return Value::of(hadamard(a.as_hermitian(), b.as_hermitian()));
    return Value::of_general(hadamard(a.matrix, b.matrix));
  }
  case Op::kron: {
    const Value a = eval(e.args[0]);
    const Value b = eval(e.args[1]);
    const Matrix k = kronecker(a.matrix, b.matrix);
    if (a.hermitian && b.hermitian)
      return Value::of(HermitianMatrix::from_hermitian_part(k));
    return Value::of_general(k);
  }
  case Op::geo: {
    const HermitianMatrix a = herm(e.args[0]);
    const Value mu = eval(e.args[1]);
    const HermitianMatrix b = herm(e.args[2]);
    return Value::of(weighted_geometric(a, b, mu.scalar));
  }
  case Op::mean: {
    const HermitianMatrix a = herm(e.args[0]);
    const HermitianMatrix b = herm(e.args[1]);
    return Value::of(apply_mean(env.mean(e.name), a, b));
  }
  case Op::fn_apply: {
    const ScalarFunction f = lookup_function(e.name, env);
    const Value x = eval(e.args[0]);
    if (x.is_scalar)
      return Value::of(f(x.scalar));
    if (!x.hermitian)
      eval_fail("function '" + e.name + "' applied to a non-Hermitian matrix", e);
    return Value::of(apply_function(f, x.as_hermitian()));
  }
  case Op::trace: {
    const Value x = eval(e.args[0]);
    return Value::of(x.hermitian ? x.as_hermitian().trace() : x.matrix.trace().real());
  }
  case Op::det: {
    const Value x = eval(e.args[0]);
    return Value::of(x.hermitian ? trace_det(x.as_hermitian()).det.real()
                                 : trace_det(x.matrix).det.real());
  }
  case Op::sval: {
    const Value x = eval(e.args[0]);
    const int k = integer_index(eval(e.args[1]).scalar, static_cast<int>(x.matrix.rows()),
                                "singular value", e);
    const auto sv = x.hermitian ? singular_values(x.as_hermitian()) : singular_values(x.matrix);
    return Value::of(sv[static_cast<std::size_t>(k - 1)]);
  }
  case Op::eig: {
    const HermitianMatrix x = herm(e.args[0]);
    const int k = integer_index(eval(e.args[1]).scalar, x.dim(), "eigenvalue", e);
    return Value::of(hermitian_eigen(x).values[static_cast<std::size_t>(k - 1)]);
  }
  case Op::state: {
    const StateDescriptor tau = lookup_state(e.name, env);
    const Value x = eval(e.args[0]);
    return Value::of(x.hermitian ? apply_state(tau, x.as_hermitian()) : apply_state(tau, x.matrix));
  }
  }
  eval_fail("unknown operator", e);
}

Margin spec_margin(const InequalitySpec &s, const Env &env) {
  Value l = evaluate_expr(s.lhs, s, env);
  Value r = evaluate_expr(s.rhs, s, env);
  if (s.reversed)
    std::swap(l, r);
  if (s.relation == Relation::scalar_ge)
    return scalar_margin(l.scalar, r.scalar);
  auto as_h = [](const Value &v) {
    return v.hermitian ? v.as_hermitian() : HermitianMatrix(v.matrix);
  };
  return loewner_margin(as_h(l), as_h(r));
}

namespace {

int declared_length(const Binding &b) {
  if (const Constraint *c = b.find("len"))
    return std::stoi(c->args[0]);
  return -1;
}

HermitianMatrix base_matrix(Rng &rng, int n, const Binding &b) {
  if (b.has("herm"))
    return random_hermitian(rng, n);
  HermitianMatrix m = random_psd(rng, n, rng.uniform_int(1, n));
  if (b.has("pd"))
    m += rng.uniform(0.1, 1.0) * HermitianMatrix::identity(n);
  return m;
}

StateDescriptor random_state(Rng &rng, int n) {
  switch (rng.uniform_int(0, 2)) {
  case 0:
    return StateDescriptor::normalized_trace(n);
  case 1:
    return StateDescriptor::vector_state(random_unit_vector(rng, n));
  default:
    return StateDescriptor::hadamard_trace(random_psd(rng, n) + 0.05 * HermitianMatrix::identity(n));
  }
}

[[noreturn]] void header_fail(const std::string &msg, const Binding &b) {
  throw SpecError(msg, b.line, b.column);
}

/// Lower bound of a matrix binding: the X of `ge(X)` or of some `X le(M)`.
const Binding *lower_bound_of(const InequalitySpec &s, const Binding &m) {
  const Binding *lo = nullptr;
  auto set = [&](const Binding *x) {
    if (lo && lo != x)
      header_fail("matrix '" + m.name + "' has more than one lower bound; the generator supports one",
                  m);
    lo = x;
  };
  if (const Constraint *c = m.find("ge"))
    set(s.binding(c->args[0]));
  for (const auto &o : s.bindings)
    if (o.sort == Sort::matrix)
      if (const Constraint *c = o.find("le"); c && c->args[0] == m.name)
        set(&o);
  return lo;
}

void generate_matrix(const InequalitySpec &s, const Binding &b, Rng &rng, int n, Env &env,
                     std::set<std::string> &busy) {
  if (env.matrices.count(b.name))
    return;
  if (!busy.insert(b.name).second)
    header_fail("cyclic ordering constraints around '" + b.name + "'", b);
  HermitianMatrix m = HermitianMatrix::zero(n);
  if (const Binding *lo = lower_bound_of(s, b)) {
    generate_matrix(s, *lo, rng, n, env, busy);
    m = env.matrix(lo->name);
    if (!rng.coin(0.1))
      m += rng.uniform(0.0, 1.0) * random_psd(rng, n, rng.uniform_int(1, n));
  } else {
    m = base_matrix(rng, n, b);
  }
  env.matrices.emplace(b.name, std::move(m));
}

} // namespace

Env generate_from_header(const InequalitySpec &s, Rng &rng, int dim) {
  Env env;
  env.dim = dim;
  const int shared = rng.uniform_int(kMinLength, kMaxLength);
  std::set<std::string> busy;
  for (const auto &b : s.bindings) {
    const int len = declared_length(b) > 0 ? declared_length(b) : shared;
    switch (b.sort) {
    case Sort::list: {
      std::vector<HermitianMatrix> l;
      const bool ordered = b.has("inc") || b.has("dec");
      l.push_back(base_matrix(rng, dim, b));
      for (int k = 1; k < len; ++k) {
        if (!ordered) {
          l.push_back(base_matrix(rng, dim, b));
        } else if (rng.coin(0.1)) {
          l.push_back(l.back());
        } else {
          l.push_back(l.back() + rng.uniform(0.0, 1.0) * random_psd(rng, dim, rng.uniform_int(1, dim)));
        }
      }
      if (b.has("dec"))
        std::reverse(l.begin(), l.end());
      env.lists.emplace(b.name, std::move(l));
      break;
    }
    case Sort::weights: {
      std::vector<double> w(static_cast<std::size_t>(len));
      for (auto &x : w)
        x = rng.uniform(0.1, 2.0);
      env.weights.emplace(b.name, std::move(w));
      break;
    }
    case Sort::matrix:
      generate_matrix(s, b, rng, dim, env, busy);
      break;
    case Sort::scalar: {
      double v;
      if (b.number_value)
        v = *b.number_value;
      else if (b.has("index"))
        v = rng.uniform_int(1, dim);
      else if (const Constraint *c = b.find("in"))
        v = rng.uniform(std::stod(c->args[0]), std::stod(c->args[1]));
      else
        v = rng.uniform(0.0, 1.0);
      env.scalars[b.name] = v;
      break;
    }
    case Sort::function:
      if (!b.text_value)
        header_fail("fn '" + b.name + "' needs a value such as = \"pow:0.5\" to drive the generator", b);
      env.functions.emplace(b.name, make_function(*b.text_value));
      break;
    case Sort::state:
      env.states.emplace(b.name, b.text_value ? parse_state(*b.text_value, dim) : random_state(rng, dim));
      break;
    case Sort::mean:
      if (!b.text_value)
        header_fail("mean '" + b.name + "' needs a value such as = \"geo:0.5\"", b);
      env.means.emplace(b.name, parse_mean(*b.text_value));
      break;
    }
  }
  return env;
}

namespace {

void verify_matrix_kind(const Binding &b, const HermitianMatrix &m, const std::string &what) {
  const double tol = kHypothesisTol * std::max(1.0, m.frobenius());
  const double lmin = lambda_min(m);
  if (b.has("psd") && lmin < -tol)
    throw PreconditionError(what + " is not positive semidefinite (lambda_min = " + number(lmin) + ")");
  if (b.has("pd") && !(lmin > tol))
    throw PreconditionError(what + " is not positive definite (lambda_min = " + number(lmin) + ")");
}

std::vector<double> all_eigenvalues(const Env &env) {
  std::vector<double> pts;
  auto add = [&](const HermitianMatrix &m) {
    const auto v = hermitian_eigen(m).values;
    pts.insert(pts.end(), v.begin(), v.end());
  };
  for (const auto &[_, m] : env.matrices)
    add(m);
  for (const auto &[_, l] : env.lists)
    for (const auto &m : l)
      add(m);
  return pts;
}

} // namespace

void verify_constraints(const InequalitySpec &s, const Env &env) {
  std::optional<std::vector<double>> pts;
  auto eigenvalues = [&]() -> const std::vector<double> & {
    if (!pts)
      pts = all_eigenvalues(env);
    return *pts;
  };
  for (const auto &b : s.bindings) {
    const int len = declared_length(b);
    switch (b.sort) {
    case Sort::list: {
      const auto &l = env.list(b.name);
      if (len > 0 && static_cast<int>(l.size()) != len)
        throw PreconditionError("list '" + b.name + "' has length " + std::to_string(l.size()));
      double scale = 1.0;
      for (const auto &m : l)
        scale = std::max(scale, m.frobenius());
      for (std::size_t k = 0; k < l.size(); ++k) {
        verify_matrix_kind(b, l[k], b.name + "[" + std::to_string(k + 1) + "]");
        if (k + 1 < l.size()) {
          const bool inc = b.has("inc");
          if ((inc || b.has("dec")) &&
              !loewner_geq(inc ? l[k + 1] : l[k], inc ? l[k] : l[k + 1], kHypothesisTol * scale).holds)
            throw PreconditionError("list '" + b.name + "' breaks its ordering at position " +
                                        std::to_string(k + 2),
                                    static_cast<std::ptrdiff_t>(k + 1));
        }
      }
      break;
    }
    case Sort::weights: {
      const auto &w = env.weight(b.name);
      if (len > 0 && static_cast<int>(w.size()) != len)
        throw PreconditionError("weights '" + b.name + "' have length " + std::to_string(w.size()));
      for (std::size_t k = 0; k < w.size(); ++k)
        if (!(w[k] > 0.0))
          throw PreconditionError("weight " + b.name + "[" + std::to_string(k + 1) + "] is not positive",
                                  static_cast<std::ptrdiff_t>(k));
      break;
    }
    case Sort::matrix: {
      const auto &m = env.matrix(b.name);
      verify_matrix_kind(b, m, "matrix '" + b.name + "'");
      for (const char *rel : {"ge", "le"})
        if (const Constraint *c = b.find(rel)) {
          const auto &o = env.matrix(c->args[0]);
          const double tol = kHypothesisTol * std::max({1.0, m.frobenius(), o.frobenius()});
          const bool ge = std::string_view(rel) == "ge";
          if (!loewner_geq(ge ? m : o, ge ? o : m, tol).holds)
            throw PreconditionError(b.name + " " + rel + " " + c->args[0] + " fails");
        }
      break;
    }
    case Sort::scalar: {
      const double v = env.scalar(b.name);
      if (const Constraint *c = b.find("in"))
        if (v < std::stod(c->args[0]) || v > std::stod(c->args[1]))
          throw PreconditionError("scalar '" + b.name + "' = " + number(v) + " leaves its interval");
      if (b.has("index") && (v != std::round(v) || v < 1 || v > env.dim))
        throw PreconditionError("scalar '" + b.name + "' = " + number(v) + " is not an index");
      break;
    }
    case Sort::function: {
      const auto &f = env.function(b.name);
      const auto &fl = f.flags();
      auto flag = [&](const char *name, Tri t) {
        if (b.has(name) && t != Tri::declared_true)
          throw PreconditionError("fn '" + b.name + "' (" + f.name() + ") is not declared " + name);
      };
      flag("opmono", fl.operator_monotone);
      flag("opdec", fl.operator_decreasing);
      flag("inc", fl.monotone_increasing);
      flag("dec", fl.monotone_decreasing);
      if (b.has("nonneg"))
        for (double x : eigenvalues())
          if (f(x) < -1e-12)
            throw PreconditionError("fn '" + b.name + "' is negative at eigenvalue " + number(x));
      if (const Constraint *c = b.find("sync")) {
        const auto &ev = eigenvalues();
        if (!ev.empty()) {
          const auto [lo, hi] = std::minmax_element(ev.begin(), ev.end());
          if (*hi > *lo)
            if (const auto w = check_synchronous(f, env.function(c->args[0]), Interval::closed(*lo, *hi)))
              throw PreconditionError("fn '" + b.name + "' and '" + c->args[0] + "' are not synchronous");
        }
      }
      break;
    }
    case Sort::state:
    case Sort::mean:
      break;
    }
  }
}

} // namespace cheb::spec
