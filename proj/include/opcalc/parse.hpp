#pragma once

// Text form of the expression family.  Grammar:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-'? factor
//   factor := base ('^' integer)?
//   base   := number | 'i' | 'x' | '(' expr ')' | func '(' expr ')'
//   func   := sin | cos | exp | log | theta | gauss | delta
//
// Function arguments must be affine in x (checked after parsing); gauss(s)
// takes a positive real constant width and denotes exp(-x^2 / (2 s)).
// Violations raise ParseError with a character position.

#include <string>

#include "opcalc/expr.hpp"

namespace opcalc {

Expression parse_expression(const std::string& text);

}  // namespace opcalc
