#include <charconv>

#include "speclang_internal.hpp"

namespace cheb::spec {

namespace detail {

int precedence(const Expr &e) {
  switch (e.op) {
  case Op::add:
  case Op::sub:
    return 1;
  case Op::mul:
  case Op::scalar_mul:
  case Op::mat_mul:
  case Op::div:
  case Op::hadamard:
  case Op::kron:
  case Op::geo:
  case Op::mean:
    return 2;
  case Op::neg:
    return 3;
  case Op::power:
    return 4;
  case Op::constant:
    return e.number < 0.0 ? 3 : 5;
  default:
    return 5;
  }
}

} // namespace detail

namespace {

std::string number(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string print(const Expr &e);

std::string wrap(const Expr &e, bool parens) {
  return parens ? "(" + print(e) + ")" : print(e);
}

std::string infix(const Expr &e, const std::string &op) {
  const int level = detail::precedence(e);
  return wrap(e.args[0], detail::precedence(e.args[0]) < level) + " " + op + " " +
         wrap(e.args[1], detail::precedence(e.args[1]) <= level);
}

std::string print(const Expr &e) {
  switch (e.op) {
  case Op::constant: return number(e.number);
  case Op::dim: return "dim";
  case Op::var: return e.name;
  case Op::index_var: return e.name + "[" + e.index + "]";
  case Op::add: return infix(e, "+");
  case Op::sub: return infix(e, "-");
  case Op::mul:
  case Op::scalar_mul:
  case Op::mat_mul: return infix(e, "*");
  case Op::div: return infix(e, "/");
  case Op::hadamard: return infix(e, ".o.");
  case Op::kron: return infix(e, ".x.");
  case Op::mean: return infix(e, "mean:" + e.name);
  case Op::geo:
    return wrap(e.args[0], detail::precedence(e.args[0]) < 2) + " #[" + print(e.args[1]) + "] " +
           wrap(e.args[2], detail::precedence(e.args[2]) <= 2);
  case Op::neg: return "-" + wrap(e.args[0], detail::precedence(e.args[0]) < 3);
  case Op::power:
    return wrap(e.args[0], detail::precedence(e.args[0]) < 5) + "^" +
           wrap(e.args[1], detail::precedence(e.args[1]) < 3);
  case Op::fn_apply: return e.name + "(" + print(e.args[0]) + ")";
  case Op::trace: return "tr(" + print(e.args[0]) + ")";
  case Op::det: return "det(" + print(e.args[0]) + ")";
  case Op::sval: return "sval(" + print(e.args[0]) + ", " + print(e.args[1]) + ")";
  case Op::eig: return "eig(" + print(e.args[0]) + ", " + print(e.args[1]) + ")";
  case Op::state: return "state(" + e.name + ", " + print(e.args[0]) + ")";
  case Op::sum: return "sum(" + e.name + ", " + print(e.args[0]) + ")";
  }
  return "?";
}

std::string print(const Binding &b) {
  std::string out = "let " + b.name + " : " + to_string(b.sort);
  for (const auto &c : b.constraints) {
    out += " " + c.name;
    if (!c.args.empty()) {
      out += "(";
      for (std::size_t i = 0; i < c.args.size(); ++i)
        out += (i ? ", " : "") + c.args[i];
      out += ")";
    }
  }
  if (b.text_value)
    out += " = \"" + *b.text_value + "\"";
  if (b.number_value)
    out += " = " + number(*b.number_value);
  return out + ";";
}

} // namespace

std::string format_expr(const Expr &e) { return print(e); }

std::string format_spec(const InequalitySpec &s) {
  std::string out;
  for (const auto &b : s.bindings)
    if (!b.inferred)
      out += print(b) + "\n";
  return out + print(s.lhs) + (s.reversed ? " <= " : " >= ") + print(s.rhs);
}

} // namespace cheb::spec
