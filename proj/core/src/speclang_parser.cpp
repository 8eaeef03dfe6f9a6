#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "speclang_internal.hpp"

namespace cheb::spec {

std::string to_string(Sort s) {
  switch (s) {
  case Sort::list: return "list";
  case Sort::matrix: return "matrix";
  case Sort::weights: return "weights";
  case Sort::scalar: return "scalar";
  case Sort::function: return "fn";
  case Sort::state: return "state";
  case Sort::mean: return "mean";
  }
  return "?";
}

bool Binding::has(std::string_view constraint) const { return find(constraint) != nullptr; }

const Constraint *Binding::find(std::string_view constraint) const {
  for (const auto &c : constraints)
    if (c.name == constraint)
      return &c;
  return nullptr;
}

bool Binding::operator==(const Binding &o) const {
  return name == o.name && sort == o.sort && constraints == o.constraints &&
         text_value == o.text_value && number_value == o.number_value && inferred == o.inferred;
}

bool Expr::operator==(const Expr &o) const {
  return op == o.op && number == o.number && name == o.name && index == o.index && args == o.args;
}

const Binding *InequalitySpec::binding(std::string_view name) const {
  for (const auto &b : bindings)
    if (b.name == name)
      return &b;
  return nullptr;
}

bool InequalitySpec::operator==(const InequalitySpec &o) const {
  return bindings == o.bindings && lhs == o.lhs && rhs == o.rhs && relation == o.relation &&
         reversed == o.reversed;
}

namespace detail {

namespace {

const std::set<std::string, std::less<>> kReserved = {"let", "tr", "det", "sval", "eig",
                                                      "state", "sum", "dim"};

std::optional<Sort> sort_word(std::string_view w) {
  static const std::pair<std::string_view, Sort> words[] = {
      {"list", Sort::list},         {"lists", Sort::list},         {"matrix", Sort::matrix},
      {"matrices", Sort::matrix},   {"weights", Sort::weights},    {"scalar", Sort::scalar},
      {"scalars", Sort::scalar},    {"fn", Sort::function},        {"fns", Sort::function},
      {"function", Sort::function}, {"functions", Sort::function}, {"state", Sort::state},
      {"states", Sort::state},      {"mean", Sort::mean},          {"means", Sort::mean},
  };
  for (const auto &[w2, s] : words)
    if (w == w2)
      return s;
  return std::nullopt;
}

struct ConstraintRule {
  std::string_view name;
  std::size_t arity;
};

std::vector<ConstraintRule> allowed_constraints(Sort s) {
  switch (s) {
  case Sort::list:
    return {{"inc", 0}, {"dec", 0}, {"psd", 0}, {"pd", 0}, {"herm", 0}, {"len", 1}};
  case Sort::matrix:
    return {{"psd", 0}, {"pd", 0}, {"herm", 0}, {"ge", 1}, {"le", 1}};
  case Sort::weights:
    return {{"len", 1}};
  case Sort::scalar:
    return {{"in", 2}, {"index", 0}};
  case Sort::function:
    return {{"opmono", 0}, {"opdec", 0}, {"nonneg", 0}, {"inc", 0}, {"dec", 0}, {"sync", 1}};
  case Sort::state:
  case Sort::mean:
    return {};
  }
  return {};
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  InequalitySpec run() {
    InequalitySpec s;
    bool have_relation = false;
    while (cur().kind != Tok::end) {
      if (cur().kind == Tok::semicolon) {
        next();
        continue;
      }
      if (have_relation)
        fail("expected end of input after the relation, found " + what(cur()), cur());
      if (is_declaration()) {
        declaration(s);
        continue;
      }
      relation(s);
      have_relation = true;
      if (cur().kind != Tok::end && cur().kind != Tok::semicolon)
        stray(cur());
    }
    if (!have_relation)
      fail("missing relation (expected an inequality with >= or <=)", cur());
    return s;
  }

private:
  const Token &cur() const { return t_[i_]; }
  const Token &ahead(std::size_t n = 1) const { return t_[std::min(i_ + n, t_.size() - 1)]; }
  const Token &next() { return t_[i_ < t_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] static void fail(const std::string &msg, const Token &t) {
    throw SpecError(msg, t.line, t.column);
  }

  static std::string what(const Token &t) {
    if (t.kind == Tok::end)
      return "end of input";
    if (t.kind == Tok::ident || t.kind == Tok::number)
      return describe(t.kind) + " '" + t.text + "'";
    return describe(t.kind);
  }

  [[noreturn]] void stray(const Token &t) {
    if (t.kind == Tok::rparen || t.kind == Tok::rbracket)
      fail("unbalanced delimiter " + describe(t.kind), t);
    fail("unexpected " + what(t), t);
  }

  /// Reports EOF inside an open delimiter as an unbalanced delimiter.
  [[noreturn]] void unexpected(const std::string &expected) {
    const Token &t = cur();
    if (t.kind == Tok::end && !open_.empty()) {
      const Token &o = open_.back();
      fail("unbalanced delimiter: " + describe(o.kind) + " opened at " + std::to_string(o.line) +
               ":" + std::to_string(o.column) + " is never closed",
           t);
    }
    if ((t.kind == Tok::rparen || t.kind == Tok::rbracket) && open_.empty())
      fail("unbalanced delimiter " + describe(t.kind), t);
    fail("expected " + expected + ", found " + what(t), t);
  }

  const Token &expect(Tok k) {
    if (cur().kind != k)
      unexpected(describe(k));
    return next();
  }

  void open(Tok k) {
    open_.push_back(cur());
    expect(k);
  }

  void close(Tok k) {
    if (cur().kind != k) {
      if ((cur().kind == Tok::rparen || cur().kind == Tok::rbracket) && !open_.empty())
        fail("unbalanced delimiter: expected " + describe(k) + " to close " +
                 describe(open_.back().kind) + " opened at " + std::to_string(open_.back().line) +
                 ":" + std::to_string(open_.back().column) + ", found " + describe(cur().kind),
             cur());
      unexpected(describe(k));
    }
    next();
    open_.pop_back();
  }

  std::string identifier(const char *role) {
    if (cur().kind != Tok::ident)
      unexpected(role);
    return next().text;
  }

  bool is_declaration() const {
    if (cur().kind != Tok::ident)
      return false;
    if (cur().text == "let")
      return true;
    return sort_word(cur().text) && ahead().kind == Tok::ident;
  }

  void declaration(InequalitySpec &s) {
    const bool let_form = cur().text == "let";
    std::optional<Sort> sort;
    if (!let_form)
      sort = sort_word(cur().text);
    next();
    std::vector<Token> names;
    while (true) {
      if (cur().kind != Tok::ident)
        unexpected("a name to declare");
      names.push_back(next());
      if (cur().kind != Tok::comma)
        break;
      next();
    }
    if (let_form) {
      expect(Tok::colon);
      const Token &w = cur();
      if (w.kind != Tok::ident || !sort_word(w.text))
        fail("expected a sort (list, matrix, weights, scalar, fn, state, mean), found " + what(w), w);
      sort = sort_word(w.text);
      next();
    }
    Binding proto;
    proto.sort = *sort;
    const auto rules = allowed_constraints(*sort);
    while (cur().kind == Tok::ident) {
      const Token at = cur();
      Constraint c{next().text, {}};
      const auto rule = std::find_if(rules.begin(), rules.end(),
                                     [&](const ConstraintRule &r) { return r.name == c.name; });
      if (rule == rules.end())
        fail("unknown constraint '" + c.name + "' for sort " + to_string(*sort), at);
      if (cur().kind == Tok::lparen) {
        open(Tok::lparen);
        while (true) {
          c.args.push_back(constraint_arg());
          if (cur().kind != Tok::comma)
            break;
          next();
        }
        close(Tok::rparen);
      }
      if (c.args.size() != rule->arity)
        fail("constraint '" + c.name + "' takes " + std::to_string(rule->arity) + " argument(s)", at);
      proto.constraints.push_back(std::move(c));
    }
    if (cur().kind == Tok::equals) {
      next();
      if (cur().kind == Tok::string) {
        if (*sort != Sort::function && *sort != Sort::state && *sort != Sort::mean)
          fail("only fn, state and mean bindings take a string value", cur());
        proto.text_value = next().text;
      } else {
        const Token at = cur();
        const bool neg = cur().kind == Tok::minus;
        if (neg)
          next();
        if (cur().kind != Tok::number)
          unexpected("a string or number value");
        if (*sort != Sort::scalar)
          fail("only scalar bindings take a numeric value", at);
        proto.number_value = neg ? -next().number : next().number;
      }
    }
    if (cur().kind != Tok::semicolon && cur().kind != Tok::end)
      unexpected("';' after declaration");
    for (const Token &n : names) {
      if (kReserved.count(n.text) || sort_word(n.text))
        fail("'" + n.text + "' is reserved and cannot be declared", n);
      if (s.binding(n.text))
        fail("'" + n.text + "' is declared twice", n);
      Binding b = proto;
      b.name = n.text;
      b.line = n.line;
      b.column = n.column;
      s.bindings.push_back(std::move(b));
    }
  }

  std::string constraint_arg() {
    if (cur().kind == Tok::ident)
      return next().text;
    std::string sign;
    if (cur().kind == Tok::minus) {
      sign = "-";
      next();
    }
    if (cur().kind != Tok::number)
      unexpected("a constraint argument");
    return sign + next().text;
  }

  void relation(InequalitySpec &s) {
    s.lhs = additive();
    if (cur().kind != Tok::ge && cur().kind != Tok::le) {
      if (cur().kind == Tok::end && !open_.empty())
        unexpected("'>=' or '<='");
      if (cur().kind == Tok::rparen || cur().kind == Tok::rbracket)
        stray(cur());
      unexpected("'>=' or '<='");
    }
    s.reversed = next().kind == Tok::le;
    s.rhs = additive();
  }

  static Expr node(Op op, const Token &at, std::vector<Expr> args = {}) {
    Expr e;
    e.op = op;
    e.line = at.line;
    e.column = at.column;
    e.args = std::move(args);
    return e;
  }

  Expr additive() {
    Expr e = multiplicative();
    while (cur().kind == Tok::plus || cur().kind == Tok::minus) {
      const Token at = next();
      Expr r = multiplicative();
      e = node(at.kind == Tok::plus ? Op::add : Op::sub, at, {std::move(e), std::move(r)});
    }
    return e;
  }

  Expr multiplicative() {
    Expr e = unary();
    while (true) {
      const Token at = cur();
      Op op;
      switch (at.kind) {
      case Tok::star: op = Op::mul; break;
      case Tok::slash: op = Op::div; break;
      case Tok::hadamard: op = Op::hadamard; break;
      case Tok::kron: op = Op::kron; break;
      case Tok::mean_op: op = Op::mean; break;
      case Tok::geo_open: {
        open(Tok::geo_open);
        Expr mu = additive();
        close(Tok::rbracket);
        Expr r = unary();
        e = node(Op::geo, at, {std::move(e), std::move(mu), std::move(r)});
        continue;
      }
      default:
        return e;
      }
      next();
      Expr r = unary();
      e = node(op, at, {std::move(e), std::move(r)});
      if (op == Op::mean)
        e.name = at.text;
    }
  }

  Expr unary() {
    if (cur().kind == Tok::minus) {
      const Token at = next();
      return node(Op::neg, at, {unary()});
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (cur().kind == Tok::caret) {
      const Token at = next();
      return node(Op::power, at, {std::move(base), unary()});
    }
    return base;
  }

  Expr primary() {
    const Token at = cur();
    if (at.kind == Tok::number) {
      next();
      Expr e = node(Op::constant, at);
      e.number = at.number;
      return e;
    }
    if (at.kind == Tok::lparen) {
      open(Tok::lparen);
      Expr e = additive();
      close(Tok::rparen);
      return e;
    }
    if (at.kind != Tok::ident)
      unexpected("an expression");
    next();
    const std::string &id = at.text;
    if (id == "dim")
      return node(Op::dim, at);
    if (id == "tr" || id == "det") {
      open(Tok::lparen);
      Expr e = node(id == "tr" ? Op::trace : Op::det, at, {additive()});
      close(Tok::rparen);
      return e;
    }
    if (id == "sval" || id == "eig") {
      open(Tok::lparen);
      Expr x = additive();
      expect(Tok::comma);
      Expr k = additive();
      close(Tok::rparen);
      return node(id == "sval" ? Op::sval : Op::eig, at, {std::move(x), std::move(k)});
    }
    if (id == "state" || id == "sum") {
      open(Tok::lparen);
      Expr e = node(id == "state" ? Op::state : Op::sum, at);
      e.name = identifier(id == "state" ? "a state name" : "an index name");
      expect(Tok::comma);
      e.args.push_back(additive());
      close(Tok::rparen);
      return e;
    }
    if (id == "let")
      fail("'let' declarations must precede the relation", at);
    if (cur().kind == Tok::lparen) {
      open(Tok::lparen);
      Expr e = node(Op::fn_apply, at, {additive()});
      e.name = id;
      close(Tok::rparen);
      return e;
    }
    if (cur().kind == Tok::lbracket) {
      open(Tok::lbracket);
      Expr e = node(Op::index_var, at);
      e.name = id;
      e.index = identifier("an index name");
      close(Tok::rbracket);
      return e;
    }
    Expr e = node(Op::var, at);
    e.name = id;
    return e;
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  std::vector<Token> open_;
};

} // namespace

} // namespace detail

InequalitySpec parse_spec(std::string_view text) {
  InequalitySpec s = detail::Parser(detail::lex(text)).run();
  detail::check_sorts(s);
  return s;
}

InequalitySpec parse_spec(std::string_view header, std::string_view relation) {
  std::string text(header);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.pop_back();
  if (!text.empty() && text.back() != ';')
    text.push_back(';');
  text.push_back('\n');
  text.append(relation);
  return parse_spec(text);
}

} // namespace cheb::spec
