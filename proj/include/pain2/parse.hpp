// Expression front-end. Grammar:
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := base ('^' uint)?
//   base     := rational | symbol | '(' expr ')'
//   rational := int ('/' uint)?
// Implicit multiplication is rejected. Symbols must be registered.
// A rational literal is realized through the division rule (same value), so
// an exponent binds only to the integer right after '^': p^2/2 is (p^2)/2.
// print_expr emits a canonical (order-deterministic) form and
// parse_expr(print_expr(f)) == f holds exactly.
#pragma once

#include <string>

#include "pain2/algebra.hpp"

namespace pain2 {

struct parse_error : std::runtime_error {
  size_t offset;  // byte offset into the input
  parse_error(const std::string& msg, size_t off);
};

RatFn parse_expr(const std::string& text);

std::string print_poly(const MPoly& p);
std::string print_expr(const RatFn& f);

}  // namespace pain2
