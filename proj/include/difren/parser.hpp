#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "difren/algebra.hpp"
#include "difren/errors.hpp"
#include "difren/operators.hpp"

// Grammar (whitespace-insensitive):
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := ('-'|'+') factor | primary ['^' exponent]
//   primary  := number | 'pi' | 'gammaE' | 'ln2' | 'zeta3' | 'r' | 'p'
//             | 'log(r^2*M^2)' | 'log(p^2/M^2)' | 'delta' | 'box' | '(' expr ')'
//   exponent := ['-'] int ['/' int] | '(' ['-'] int ['/' int] ')'
// Rational exponents are accepted only on r and p; other bases take integers.

namespace difren {

namespace parse_detail {

/// One monomial shape of the general term language.
struct Shape {
  Rational rpow;
  int rlog = 0;
  Rational ppow;
  int plog = 0;
  int box = 0;
  bool delta = false;

  friend bool operator<(const Shape& a, const Shape& b) {
    return std::tie(a.rpow, a.rlog, a.ppow, a.plog, a.box, a.delta) <
           std::tie(b.rpow, b.rlog, b.ppow, b.plog, b.box, b.delta);
  }
};

using Expr = std::map<Shape, Coefficient>;

struct Token {
  enum Kind { number, ident, symbol, end } kind;
  std::string text;
  int line;
  int column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += k;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::number, std::string(src.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::ident, std::string(src.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      out.push_back({Token::symbol, std::string(1, c), line, col});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Token::end, "", line, col});
  return out;
}

inline void accumulate(Expr& e, const Shape& s, const Coefficient& c) { detail::accumulate(e, s, c); }

inline Expr constant(const Coefficient& c) {
  Expr e;
  accumulate(e, Shape{}, c);
  return e;
}

inline Expr add(const Expr& a, const Expr& b, int sign = 1) {
  Expr out = a;
  for (const auto& [s, c] : b) accumulate(out, s, sign > 0 ? c : -c);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Expr parse() {
    Expr e = expr();
    if (peek().kind != Token::end) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(msg, t.line, t.column); }
  bool is_symbol(const char* s) const { return peek().kind == Token::symbol && peek().text == s; }
  void expect_symbol(const char* s) {
    if (!is_symbol(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }
  void expect_ident(const char* s) {
    if (peek().kind != Token::ident || peek().text != s) fail(std::string("expected '") + s + "'");
    ++pos_;
  }
  void expect_number(const char* s) {
    if (peek().kind != Token::number || peek().text != s) fail(std::string("expected '") + s + "'");
    ++pos_;
  }

  Expr expr() {
    Expr e = term();
    while (is_symbol("+") || is_symbol("-")) {
      const int sign = take().text == "+" ? 1 : -1;
      e = add(e, term(), sign);
    }
    return e;
  }

  Expr term() {
    Expr e = factor();
    while (is_symbol("*") || is_symbol("/")) {
      const Token& op = take();
      const Token& at = peek();
      Expr rhs = factor();
      e = op.text == "*" ? multiply(e, rhs, at) : multiply(e, invert(rhs, at), at);
    }
    return e;
  }

  Expr factor() {
    if (is_symbol("-")) {
      ++pos_;
      return add(Expr{}, factor(), -1);
    }
    if (is_symbol("+")) {
      ++pos_;
      return factor();
    }
    bool rational_base = false;
    Expr base = primary(rational_base);
    if (!is_symbol("^")) return base;
    ++pos_;
    const Token& exp_tok = peek();
    const Rational e = exponent(rational_base);
    return power(base, e, exp_tok);
  }

  Rational exponent(bool allow_rational) {
    const bool paren = is_symbol("(");
    if (paren) ++pos_;
    int sign = 1;
    if (is_symbol("-")) {
      sign = -1;
      ++pos_;
    } else if (is_symbol("+")) {
      ++pos_;
    }
    if (peek().kind != Token::number) fail("expected an exponent");
    Rational e = sign * Rational(Integer(take().text));
    const bool slash_follows = is_symbol("/") && tokens_[pos_ + 1].kind == Token::number;
    if ((allow_rational || paren) && slash_follows) {
      const Token& slash = take();
      const Integer d(take().text);
      if (d == 0) fail_at(slash, "zero denominator in exponent");
      e /= Rational(d);
    }
    if (paren) expect_symbol(")");
    if (!allow_rational && !is_integer(e)) fail("rational exponents are allowed only on r and p");
    return e;
  }

  Expr primary(bool& rational_base) {
    const Token& t = peek();
    if (t.kind == Token::number) {
      ++pos_;
      return constant(Rational(Integer(t.text)));
    }
    if (is_symbol("(")) {
      ++pos_;
      Expr e = expr();
      expect_symbol(")");
      return e;
    }
    if (t.kind != Token::ident) fail(t.kind == Token::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    ++pos_;
    const std::string& id = t.text;
    if (id == "pi") return constant(Coefficient::pi());
    if (id == "gammaE") return constant(Coefficient::gamma_e());
    if (id == "ln2") return constant(Coefficient::ln2());
    if (id == "zeta3") return constant(Coefficient::zeta3());
    Shape s;
    if (id == "r") {
      rational_base = true;
      s.rpow = 1;
    } else if (id == "p") {
      rational_base = true;
      s.ppow = 1;
    } else if (id == "delta") {
      s.delta = true;
    } else if (id == "box") {
      s.box = 1;
    } else if (id == "log") {
      expect_symbol("(");
      const Token& var = peek();
      if (var.kind == Token::ident && var.text == "r") {
        ++pos_;
        expect_symbol("^"), expect_number("2"), expect_symbol("*"), expect_ident("M"), expect_symbol("^"),
            expect_number("2");
        s.rlog = 1;
      } else if (var.kind == Token::ident && var.text == "p") {
        ++pos_;
        expect_symbol("^"), expect_number("2"), expect_symbol("/"), expect_ident("M"), expect_symbol("^"),
            expect_number("2");
        s.plog = 1;
      } else {
        fail("only log(r^2*M^2) and log(p^2/M^2) are supported");
      }
      expect_symbol(")");
    } else {
      fail_at(t, "unknown symbol '" + id + "'");
    }
    Expr e;
    accumulate(e, s, 1);
    return e;
  }

  Expr multiply(const Expr& a, const Expr& b, const Token& at) const {
    Expr out;
    for (const auto& [sa, ca] : a)
      for (const auto& [sb, cb] : b) {
        if (sa.delta && sb.delta) fail_at(at, "undefined product of distributions");
        Shape s{sa.rpow + sb.rpow, sa.rlog + sb.rlog, sa.ppow + sb.ppow, sa.plog + sb.plog, sa.box + sb.box,
                sa.delta || sb.delta};
        if (s.delta && (s.rpow != 0 || s.rlog != 0))
          fail_at(at, "undefined product of distributions");
        accumulate(out, s, ca * cb);
      }
    return out;
  }

  Expr invert(const Expr& e, const Token& at) const {
    if (e.size() != 1) fail_at(at, "division by a non-monomial expression");
    const auto& [s, c] = *e.begin();
    if (s.rlog || s.plog || s.box || s.delta) fail_at(at, "division by a logarithm or distribution");
    Coefficient inv;
    try {
      inv = c.inverse();
    } catch (const DomainError& err) {
      fail_at(at, err.what());
    }
    Shape out;
    out.rpow = -s.rpow;
    out.ppow = -s.ppow;
    Expr r;
    accumulate(r, out, inv);
    return r;
  }

  Expr power(const Expr& base, const Rational& e, const Token& at) const {
    if (is_integer(e) && e >= 0) {
      Expr out = constant(1);
      for (long long i = 0; i < to_int(e); ++i) out = multiply(out, base, at);
      return out;
    }
    if (base.size() != 1) fail_at(at, "negative or fractional power of a sum");
    const auto& [s, c] = *base.begin();
    if (s.rlog || s.plog || s.box || s.delta) fail_at(at, "negative or fractional power of a logarithm or distribution");
    Coefficient coeff;
    if (is_integer(e)) {
      try {
        coeff = c.pow(static_cast<int>(to_int(e)));
      } catch (const DomainError& err) {
        fail_at(at, err.what());
      }
    } else {
      if (c != Coefficient(1)) fail_at(at, "fractional power of a coefficient");
      coeff = 1;
    }
    Shape out;
    out.rpow = s.rpow * e;
    out.ppow = s.ppow * e;
    Expr r;
    accumulate(r, out, coeff);
    return r;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

[[noreturn]] inline void context_error(const std::string& msg) { throw ParseError(msg, 1, 1); }

}  // namespace parse_detail

inline PositionFunction parse_position(std::string_view text, int dim) {
  const auto e = parse_detail::Parser(text).parse();
  PositionFunction f(dim);
  for (const auto& [s, c] : e) {
    if (s.ppow != 0 || s.plog != 0) parse_detail::context_error("momentum symbol in a position-space expression");
    if (s.delta) {
      f.add_local(c, s.box);
    } else {
      if (s.box) parse_detail::context_error("'box' in a function needs 'delta' (write box*delta)");
      f.add_radial(c, s.rpow, s.rlog);
    }
  }
  return f;
}

inline MomentumFunction parse_momentum(std::string_view text, int dim) {
  const auto e = parse_detail::Parser(text).parse();
  MomentumFunction F(dim);
  for (const auto& [s, c] : e) {
    if (s.rpow != 0 || s.rlog != 0 || s.delta || s.box)
      parse_detail::context_error("position symbol in a momentum-space expression");
    F.add_term(c, s.ppow, s.plog);
  }
  return F;
}

inline DiffOperator parse_operator(std::string_view text) {
  const auto e = parse_detail::Parser(text).parse();
  DiffOperator L;
  for (const auto& [s, c] : e) {
    if (s.rpow != 0 || s.rlog != 0 || s.ppow != 0 || s.plog != 0 || s.delta)
      parse_detail::context_error("an operator may only contain box and constants");
    L.add(c, s.box);
  }
  return L;
}

}  // namespace difren
