#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cheb/speclang.hpp"

namespace cheb::spec::detail {

enum class Tok {
  number,
  ident,
  string,
  mean_op, ///< mean:<name>; text holds the name
  lparen,
  rparen,
  lbracket,
  rbracket,
  geo_open, ///< #[
  comma,
  semicolon,
  colon,
  equals,
  plus,
  minus,
  star,
  slash,
  caret,
  hadamard, ///< .o.
  kron,     ///< .x.
  ge,
  le,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

std::string describe(Tok t);

/// Whole-input tokenization; the last token is always Tok::end.
std::vector<Token> lex(std::string_view text);

/// Operator-precedence level of a node for printing; higher binds tighter.
int precedence(const Expr &e);

void check_sorts(InequalitySpec &s);

} // namespace cheb::spec::detail
