#pragma once

#include <string>

#include "kron/named.hpp"

namespace kron {

// Evaluates a generator expression against a set of named elements.
//
// Grammar (whitespace is ignored everywhere):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor
//           | 'eps' '^' int              exact scalar eps^k
//           | int                        integer scalar
//           | name arguments             named element
//           | '(' expr ')'
//   name   := theta | theta_div | gamma | mu | rho | phi | ptilde | eta
//           | schur
//
// Arguments are written adjacently ("mu1"), space-separated ("mu 1"), or
// parenthesized ("mu(1)").  theta_div takes two integers "theta_div(0,2)";
// schur takes a weakly decreasing partition "schur(2,1)"; every other name
// takes one integer.  Scalars multiply via '*': "eps^-2 * theta1 * gamma0".
//
// Throws std::invalid_argument naming the offending position on malformed
// input; index errors from the named-element constructors propagate as-is.
HallElem parse_element(const std::string& src, NamedElements& el);

}  // namespace kron
