#include <cctype>
#include <charconv>

#include "speclang_internal.hpp"

namespace cheb::spec {

SpecError::SpecError(const std::string &what, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line),
      column_(column), detail_(what) {}

namespace detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      scan(t);
      out.push_back(std::move(t));
    }
  }

private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_blank() {
    while (pos_ < s_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < s_.size() && peek() != '\n')
          advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string &msg, const Token &t) const {
    throw SpecError(msg, t.line, t.column);
  }

  void scan(Token &t) {
    const char c = peek();
    if (digit(c))
      return scan_number(t);
    if (ident_start(c))
      return scan_ident(t);
    if (c == '"')
      return scan_string(t);
    if (c == '.') {
      if (peek(2) == '.' && (peek(1) == 'o' || peek(1) == 'x')) {
        t.kind = peek(1) == 'o' ? Tok::hadamard : Tok::kron;
        t.text = std::string(s_.substr(pos_, 3));
        advance(3);
        return;
      }
      std::size_t n = 1;
      while (ident_char(peek(n)))
        ++n;
      if (peek(n) == '.' && n > 1)
        fail("unknown operator '" + std::string(s_.substr(pos_, n + 1)) + "'", t);
      fail("unexpected character '.'", t);
    }
    if (c == '#') {
      if (peek(1) != '[')
        fail("unknown operator '#'; expected '#['", t);
      t.kind = Tok::geo_open;
      t.text = "#[";
      advance(2);
      return;
    }
    if ((c == '>' || c == '<') && peek(1) == '=') {
      t.kind = c == '>' ? Tok::ge : Tok::le;
      t.text = c == '>' ? ">=" : "<=";
      advance(2);
      return;
    }
    struct Single {
      char c;
      Tok kind;
    };
    static constexpr Single singles[] = {
        {'(', Tok::lparen}, {')', Tok::rparen},    {'[', Tok::lbracket}, {']', Tok::rbracket},
        {',', Tok::comma},  {';', Tok::semicolon}, {':', Tok::colon},    {'=', Tok::equals},
        {'+', Tok::plus},   {'-', Tok::minus},     {'*', Tok::star},     {'/', Tok::slash},
        {'^', Tok::caret},
    };
    for (const auto &s : singles)
      if (s.c == c) {
        t.kind = s.kind;
        t.text = std::string(1, c);
        advance();
        return;
      }
    if (c == '>' || c == '<')
      fail(std::string("unknown operator '") + c + "'; only >= and <= relations exist", t);
    if (static_cast<unsigned char>(c) >= 0x80)
      fail("unexpected non-ASCII character", t);
    fail(std::string("unexpected character '") + c + "'", t);
  }

  void scan_number(Token &t) {
    std::size_t n = 0;
    while (digit(peek(n)))
      ++n;
    if (peek(n) == '.' && digit(peek(n + 1))) {
      ++n;
      while (digit(peek(n)))
        ++n;
    }
    if (peek(n) == 'e' || peek(n) == 'E') {
      std::size_t m = n + 1;
      if (peek(m) == '+' || peek(m) == '-')
        ++m;
      if (digit(peek(m))) {
        while (digit(peek(m)))
          ++m;
        n = m;
      }
    }
    if (ident_char(peek(n)))
      fail("malformed number '" + std::string(s_.substr(pos_, n + 1)) + "'", t);
    t.kind = Tok::number;
    t.text = std::string(s_.substr(pos_, n));
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      fail("number out of range '" + t.text + "'", t);
    advance(n);
  }

  void scan_ident(Token &t) {
    std::size_t n = 0;
    while (ident_char(peek(n)))
      ++n;
    t.text = std::string(s_.substr(pos_, n));
    if (t.text == "mean" && peek(n) == ':' && ident_start(peek(n + 1))) {
      std::size_t m = n + 1;
      while (ident_char(peek(m)))
        ++m;
      t.kind = Tok::mean_op;
      t.text = std::string(s_.substr(pos_ + n + 1, m - n - 1));
      advance(m);
      return;
    }
    t.kind = Tok::ident;
    advance(n);
  }

  void scan_string(Token &t) {
    advance();
    std::string v;
    while (true) {
      if (pos_ >= s_.size() || peek() == '\n')
        fail("unterminated string literal", t);
      if (peek() == '"')
        break;
      v.push_back(peek());
      advance();
    }
    advance();
    t.kind = Tok::string;
    t.text = std::move(v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

} // namespace

std::string describe(Tok t) {
  switch (t) {
  case Tok::number: return "number";
  case Tok::ident: return "identifier";
  case Tok::string: return "string";
  case Tok::mean_op: return "mean operator";
  case Tok::lparen: return "'('";
  case Tok::rparen: return "')'";
  case Tok::lbracket: return "'['";
  case Tok::rbracket: return "']'";
  case Tok::geo_open: return "'#['";
  case Tok::comma: return "','";
  case Tok::semicolon: return "';'";
  case Tok::colon: return "':'";
  case Tok::equals: return "'='";
  case Tok::plus: return "'+'";
  case Tok::minus: return "'-'";
  case Tok::star: return "'*'";
  case Tok::slash: return "'/'";
  case Tok::caret: return "'^'";
  case Tok::hadamard: return "'.o.'";
  case Tok::kron: return "'.x.'";
  case Tok::ge: return "'>='";
  case Tok::le: return "'<='";
  case Tok::end: return "end of input";
  }
  return "token";
}

std::vector<Token> lex(std::string_view text) { return Lexer(text).run(); }

} // namespace detail

} // namespace cheb::spec
