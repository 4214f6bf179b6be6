#include "pain2/parse.hpp"

#include <cctype>
#include <sstream>

namespace pain2 {

parse_error::parse_error(const std::string& msg, size_t off)
    : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"),
      offset(off) {}

namespace {

enum class Tok { Num, Sym, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Lexer {
  const std::string& s;
  size_t pos = 0;
  Tok tok = Tok::End;
  size_t tok_pos = 0;
  Rat num;
  std::string sym;

  explicit Lexer(const std::string& text) : s(text) { advance(); }

  void advance() {
    while (pos < s.size() && std::isspace(uchar(pos))) pos++;
    tok_pos = pos;
    if (pos >= s.size()) {
      tok = Tok::End;
      return;
    }
    char c = s[pos];
    if (std::isdigit(uchar(pos))) {
      num = Rat(mpz_class(lex_digits()));
      tok = Tok::Num;
      return;
    }
    if (std::isalpha(uchar(pos))) {
      size_t start = pos;
      while (pos < s.size() && (std::isalnum(uchar(pos)) || s[pos] == '_')) pos++;
      sym = s.substr(start, pos - start);
      tok = Tok::Sym;
      return;
    }
    pos++;
    switch (c) {
      case '+': tok = Tok::Plus; return;
      case '-': tok = Tok::Minus; return;
      case '*': tok = Tok::Star; return;
      case '/': tok = Tok::Slash; return;
      case '^': tok = Tok::Caret; return;
      case '(': tok = Tok::LParen; return;
      case ')': tok = Tok::RParen; return;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", tok_pos);
  }

 private:
  unsigned char uchar(size_t i) const { return (unsigned char)s[i]; }

  // Numbers are plain unsigned integers. Rational literals like "2/3" reach
  // the same value through the division rule in term(), which keeps "p2^2/2"
  // meaning (p2^2)/2: an exponent consumes only the integer after '^'.
  std::string lex_digits() {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(uchar(pos))) pos++;
    return s.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(const std::string& text) : lex(text) {}

  RatFn run() {
    RatFn v = expr();
    if (lex.tok != Tok::End) throw parse_error("trailing input", lex.tok_pos);
    return v;
  }

  RatFn expr() {
    RatFn v = term();
    while (lex.tok == Tok::Plus || lex.tok == Tok::Minus) {
      bool plus = lex.tok == Tok::Plus;
      lex.advance();
      RatFn r = term();
      v = plus ? v + r : v - r;
    }
    return v;
  }

  RatFn term() {
    RatFn v = factor();
    while (lex.tok == Tok::Star || lex.tok == Tok::Slash) {
      bool mul = lex.tok == Tok::Star;
      size_t at = lex.tok_pos;
      lex.advance();
      RatFn r = factor();
      if (!mul && r.is_zero()) throw parse_error("division by zero", at);
      v = mul ? v * r : v / r;
    }
    return v;
  }

  RatFn factor() {
    RatFn v = base();
    if (lex.tok == Tok::Caret) {
      lex.advance();
      if (lex.tok != Tok::Num || lex.num.get_den() != 1 || lex.num < 0)
        throw parse_error("exponent must be an unsigned integer", lex.tok_pos);
      unsigned long e = lex.num.get_num().get_ui();
      lex.advance();
      v = pow(v, int(e));
    }
    return v;
  }

  RatFn base() {
    switch (lex.tok) {
      case Tok::Num: {
        RatFn v(lex.num);
        lex.advance();
        return v;
      }
      case Tok::Minus: {
        // signed rational literal; the grammar has no general unary minus
        size_t at = lex.tok_pos;
        lex.advance();
        if (lex.tok != Tok::Num)
          throw parse_error("'-' must be followed by a number here", at);
        RatFn v(Rat(-lex.num));
        lex.advance();
        return v;
      }
      case Tok::Sym: {
        int v = var_index(lex.sym);
        if (v < 0) throw parse_error("unknown symbol '" + lex.sym + "'", lex.tok_pos);
        lex.advance();
        return RatFn::variable(v);
      }
      case Tok::LParen: {
        size_t at = lex.tok_pos;
        lex.advance();
        RatFn v = expr();
        if (lex.tok != Tok::RParen) throw parse_error("unclosed '('", at);
        lex.advance();
        return v;
      }
      default:
        throw parse_error("expected a number, symbol or '('", lex.tok_pos);
    }
  }
};

std::string rat_text(const Rat& c) { return c.get_str(); }

void append_monomial(std::ostringstream& out, const Expo& e, bool lead_star) {
  bool first = !lead_star;
  for (int i = 0; i < NVARS; i++) {
    if (e[i] == 0) continue;
    if (!first) out << "*";
    first = false;
    out << var_name(i);
    if (e[i] > 1) out << "^" << int(e[i]);
  }
}

}  // namespace

RatFn parse_expr(const std::string& text) { return Parser(text).run(); }

std::string print_poly(const MPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  // leading term first
  for (auto it = p.t.rbegin(); it != p.t.rend(); ++it) {
    const Expo& e = it->first;
    const Rat& c = it->second;
    bool constant_term = total_degree(e) == 0;
    if (first) {
      if (constant_term) {
        out << rat_text(c);
      } else if (c == 1) {
        append_monomial(out, e, false);
      } else {
        // includes c == -1: the grammar cannot express a bare leading minus
        out << rat_text(c);
        append_monomial(out, e, true);
      }
      first = false;
      continue;
    }
    Rat ac = abs(c);
    out << (c < 0 ? " - " : " + ");
    if (constant_term) {
      out << rat_text(ac);
    } else if (ac == 1) {
      append_monomial(out, e, false);
    } else {
      out << rat_text(ac);
      append_monomial(out, e, true);
    }
  }
  return out.str();
}

std::string print_expr(const RatFn& f) {
  if (f.is_polynomial()) return print_poly(f.num);
  std::string n = print_poly(f.num);
  if (f.num.t.size() > 1) n = "(" + n + ")";
  // the denominator is monic; it can stay bare only when it is a power of a
  // single variable, otherwise '/' would bind to just its first factor
  bool bare = false;
  if (f.den.is_monomial()) {
    const auto& [e, c] = f.den.leading();
    int nz = 0;
    for (int i = 0; i < NVARS; i++) nz += e[i] > 0;
    bare = (nz == 1 && c == 1);
  }
  std::string d = print_poly(f.den);
  if (!bare) d = "(" + d + ")";
  return n + "/" + d;
}

}  // namespace pain2
