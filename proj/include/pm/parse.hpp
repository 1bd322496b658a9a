#pragma once

#include <string>

#include "pm/omega.hpp"

namespace pm {

// Parses the expression grammar
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | base ('^' integer)?
//   base   := 'z' | 'w' | number | '(' expr ')'
//   number := integer ('/' integer)? | decimal, each optionally suffixed
//             with 'i'; a bare 'i' is the imaginary unit
//
// into a class element. Division requires the divisor to be a unit of the
// class (monomial times (1-zw)-power); otherwise UnrepresentableDenominator.
// Malformed input raises SyntaxError with the offending position.
OmegaFunction parse_expression(const std::string& text);

}  // namespace pm
