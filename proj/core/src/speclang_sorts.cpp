#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "speclang_internal.hpp"

namespace cheb::spec::detail {

namespace {

const std::set<std::string, std::less<>> kBuiltinFunctions = {"id", "log", "inv", "harm", "frac"};
constexpr std::string_view kBuiltinState = "ntrace";

[[noreturn]] void fail(const std::string &msg, const Expr &at) {
  throw SpecError(msg, at.line, at.column);
}

bool upper_initial(const std::string &s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

/// Headerless mode: sorts from usage.
class Inference {
public:
  explicit Inference(InequalitySpec &s) : s_(s) {}

  void run() {
    walk(s_.lhs);
    walk(s_.rhs);
  }

private:
  void record(const std::string &name, Sort sort, const Expr &at) {
    if (indices_.count(name))
      return;
    if (Binding *b = find(name)) {
      if (b->sort != sort)
        fail("'" + name + "' is used both as " + to_string(b->sort) + " and as " + to_string(sort), at);
      return;
    }
    Binding b;
    b.name = name;
    b.sort = sort;
    b.inferred = true;
    b.line = at.line;
    b.column = at.column;
    s_.bindings.push_back(std::move(b));
  }

  Binding *find(const std::string &name) {
    for (auto &b : s_.bindings)
      if (b.name == name)
        return &b;
    return nullptr;
  }

  void walk(const Expr &e) {
    switch (e.op) {
    case Op::var:
      record(e.name, upper_initial(e.name) ? Sort::matrix : Sort::scalar, e);
      break;
    case Op::index_var:
      record(e.name, upper_initial(e.name) ? Sort::list : Sort::weights, e);
      break;
    case Op::fn_apply:
      if (!kBuiltinFunctions.count(e.name) || find(e.name))
        record(e.name, Sort::function, e);
      break;
    case Op::state:
      if (e.name != kBuiltinState || find(e.name))
        record(e.name, Sort::state, e);
      break;
    case Op::mean:
      record(e.name, Sort::mean, e);
      break;
    case Op::sum:
      indices_.insert(e.name);
      walk(e.args[0]);
      indices_.erase(e.name);
      return;
    default:
      break;
    }
    for (const auto &a : e.args)
      walk(a);
  }

  InequalitySpec &s_;
  std::multiset<std::string> indices_;
};

int parse_int(const std::string &s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    return -1;
  return v;
}

bool parse_double(const std::string &s, double &v) {
  const char *first = s.data();
  const auto [p, ec] = std::from_chars(first, s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

void check_header(const InequalitySpec &s) {
  for (const auto &b : s.bindings) {
    auto bad = [&](const std::string &msg) { throw SpecError(msg, b.line, b.column); };
    for (const auto &c : b.constraints) {
      if ((c.name == "ge" || c.name == "le")) {
        const Binding *o = s.binding(c.args[0]);
        if (!o || o->sort != Sort::matrix)
          bad("constraint " + c.name + "(" + c.args[0] + ") on '" + b.name +
              "' must name a declared matrix");
        if (o->name == b.name)
          bad("'" + b.name + "' cannot be ordered against itself");
      } else if (c.name == "sync") {
        const Binding *o = s.binding(c.args[0]);
        if (!o || o->sort != Sort::function)
          bad("constraint sync(" + c.args[0] + ") on '" + b.name + "' must name a declared fn");
      } else if (c.name == "len") {
        if (parse_int(c.args[0]) < 1)
          bad("len(" + c.args[0] + ") on '" + b.name + "' needs a positive integer");
      } else if (c.name == "in") {
        double lo = 0.0, hi = 0.0;
        if (!parse_double(c.args[0], lo) || !parse_double(c.args[1], hi) || lo > hi)
          bad("in(" + c.args[0] + ", " + c.args[1] + ") on '" + b.name + "' needs numbers lo <= hi");
      }
    }
    if (b.has("inc") && b.has("dec") && b.sort == Sort::list)
      bad("list '" + b.name + "' cannot be both inc and dec");
  }
}

struct SortInfo {
  bool matrix = false;
  int cls = 0;
};

std::string describe(const SortInfo &x) {
  if (!x.matrix)
    return "scalar";
  return x.cls == 1 ? "matrix" : "matrix of size n^" + std::to_string(x.cls);
}

class Checker {
public:
  explicit Checker(const InequalitySpec &s) : s_(s) {}

  SortInfo check(Expr &e) {
    const SortInfo r = visit(e);
    e.is_matrix = r.matrix;
    e.dim_class = r.cls;
    return r;
  }

private:
  const Binding *binding(const std::string &name, const Expr &at) {
    const Binding *b = s_.binding(name);
    if (!b) {
      if (std::count(scope_.begin(), scope_.end(), name))
        fail("index '" + name + "' can only subscript a list, as in A[" + name + "]", at);
      fail("undeclared identifier '" + name + "'", at);
    }
    return b;
  }

  static SortInfo scalar() { return {false, 0}; }
  static SortInfo matrix(int cls = 1) { return {true, cls}; }

  SortInfo need_matrix(Expr &e, const char *ctx) {
    const SortInfo x = check(e);
    if (!x.matrix)
      fail(std::string("sort mismatch: ") + ctx + " needs a matrix operand, found a scalar", e);
    return x;
  }

  void need_scalar(Expr &e, const char *ctx) {
    const SortInfo x = check(e);
    if (x.matrix)
      fail(std::string("sort mismatch: ") + ctx + " needs a scalar, found a " + describe(x), e);
  }

  SortInfo same_class(const SortInfo &a, const SortInfo &b, const Expr &at, const char *ctx) {
    if (a.cls != b.cls)
      fail(std::string("sort mismatch: ") + ctx + " of a " + describe(a) + " and a " + describe(b), at);
    return a;
  }

  SortInfo visit(Expr &e) {
    switch (e.op) {
    case Op::constant:
    case Op::dim:
      return scalar();
    case Op::var: {
      const Binding *b = binding(e.name, e);
      switch (b->sort) {
      case Sort::matrix: return matrix();
      case Sort::scalar: return scalar();
      case Sort::list:
      case Sort::weights:
        fail("'" + e.name + "' is a " + to_string(b->sort) + " and must be indexed, as in " +
                 e.name + "[j]",
             e);
      case Sort::function:
        fail("function '" + e.name + "' must be applied, as in " + e.name + "(X)", e);
      case Sort::state:
        fail("state '" + e.name + "' can only appear as the first argument of state()", e);
      case Sort::mean:
        fail("mean '" + e.name + "' can only appear as mean:" + e.name, e);
      }
      return scalar();
    }
    case Op::index_var: {
      const Binding *b = binding(e.name, e);
      if (!std::count(scope_.begin(), scope_.end(), e.index))
        fail("index '" + e.index + "' is not bound by an enclosing sum", e);
      used_.insert(e.index);
      if (b->sort == Sort::list)
        return matrix();
      if (b->sort == Sort::weights)
        return scalar();
      fail("'" + e.name + "' is a " + to_string(b->sort) + " and cannot be indexed", e);
    }
    case Op::sum: {
      if (s_.binding(e.name))
        fail("sum index '" + e.name + "' shadows a declared name", e);
      if (std::count(scope_.begin(), scope_.end(), e.name))
        fail("sum index '" + e.name + "' is already bound", e);
      scope_.push_back(e.name);
      used_.erase(e.name);
      const SortInfo r = check(e.args[0]);
      scope_.pop_back();
      if (!used_.count(e.name))
        fail("sum over '" + e.name + "' never subscripts a list with it", e);
      used_.erase(e.name);
      return r;
    }
    case Op::add:
    case Op::sub: {
      const SortInfo a = check(e.args[0]);
      const SortInfo b = check(e.args[1]);
      if (a.matrix != b.matrix)
        fail("sort mismatch: cannot " + std::string(e.op == Op::add ? "add" : "subtract") + " a " +
                 describe(a) + " and a " + describe(b),
             e);
      return same_class(a, b, e, e.op == Op::add ? "sum" : "difference");
    }
    case Op::neg:
      return check(e.args[0]);
    case Op::mul:
    case Op::scalar_mul:
    case Op::mat_mul: {
      const SortInfo a = check(e.args[0]);
      const SortInfo b = check(e.args[1]);
      if (a.matrix && b.matrix) {
        e.op = Op::mat_mul;
        return same_class(a, b, e, "matrix product");
      }
      e.op = Op::scalar_mul;
      return a.matrix ? a : b;
    }
    case Op::div: {
      const SortInfo a = check(e.args[0]);
      need_scalar(e.args[1], "division");
      return a;
    }
    case Op::power: {
      const SortInfo a = check(e.args[0]);
      need_scalar(e.args[1], "exponent");
      return a;
    }
    case Op::hadamard: {
      const SortInfo a = need_matrix(e.args[0], "Hadamard product");
      const SortInfo b = need_matrix(e.args[1], "Hadamard product");
      return same_class(a, b, e, "Hadamard product");
    }
    case Op::kron: {
      const SortInfo a = need_matrix(e.args[0], "Kronecker product");
      const SortInfo b = need_matrix(e.args[1], "Kronecker product");
      return matrix(a.cls + b.cls);
    }
    case Op::geo: {
      const SortInfo a = need_matrix(e.args[0], "geometric mean");
      need_scalar(e.args[1], "mean-weight of #[]");
      const SortInfo b = need_matrix(e.args[2], "geometric mean");
      return same_class(a, b, e, "geometric mean");
    }
    case Op::mean: {
      const Binding *m = binding(e.name, e);
      if (m->sort != Sort::mean)
        fail("'" + e.name + "' is a " + to_string(m->sort) + ", not a mean", e);
      const SortInfo a = need_matrix(e.args[0], "operator mean");
      const SortInfo b = need_matrix(e.args[1], "operator mean");
      return same_class(a, b, e, "operator mean");
    }
    case Op::fn_apply: {
      const Binding *b = s_.binding(e.name);
      if (b && b->sort != Sort::function)
        fail("'" + e.name + "' is a " + to_string(b->sort) + " and cannot be applied", e);
      if (!b && !kBuiltinFunctions.count(e.name))
        fail("undeclared function '" + e.name + "'", e);
      return check(e.args[0]);
    }
    case Op::trace:
    case Op::det:
      need_matrix(e.args[0], e.op == Op::trace ? "tr" : "det");
      return scalar();
    case Op::sval:
    case Op::eig:
      need_matrix(e.args[0], e.op == Op::sval ? "sval" : "eig");
      need_scalar(e.args[1], "index");
      return scalar();
    case Op::state: {
      const Binding *b = s_.binding(e.name);
      if (b && b->sort != Sort::state)
        fail("'" + e.name + "' is a " + to_string(b->sort) + ", not a state", e);
      if (!b && e.name != kBuiltinState)
        fail("undeclared state '" + e.name + "'", e);
      const SortInfo x = need_matrix(e.args[0], "state");
      if (x.cls != 1)
        fail("sort mismatch: states act on n x n matrices, found a " + describe(x), e.args[0]);
      return scalar();
    }
    }
    fail("unknown operator", e);
  }

  const InequalitySpec &s_;
  std::vector<std::string> scope_;
  std::set<std::string> used_;
};

} // namespace

void check_sorts(InequalitySpec &s) {
  if (s.bindings.empty())
    Inference(s).run();
  check_header(s);
  Checker c(s);
  const SortInfo l = c.check(s.lhs);
  const SortInfo r = c.check(s.rhs);
  if (l.matrix != r.matrix)
    throw SpecError("mixed sorts: the left side is a " + describe(l) + " but the right side is a " +
                        describe(r),
                    s.lhs.line, s.lhs.column);
  if (l.matrix && l.cls != r.cls)
    throw SpecError("sides have different matrix sizes (" + describe(l) + " vs " + describe(r) + ")",
                    s.lhs.line, s.lhs.column);
  s.relation = l.matrix ? Relation::loewner_ge : Relation::scalar_ge;
}

} // namespace cheb::spec::detail
