#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wck/weyl.hpp"

namespace wck {

struct OpExpr {
  enum class Kind { Constant, Generator, Sum, Product, Power, Negation };

  Kind kind = Kind::Constant;
  cplx value = 0.0;        // Constant
  std::string gen;         // Generator: x, y, Dx, Dy, xi, eta
  int exponent = 0;        // Power
  std::size_t offset = 0;  // byte offset of the node in the source
  std::vector<OpExpr> children;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*' factor) | ('/' number) | <factor starting with '('>)*
//   factor := atom ('^' uint)* | '-' factor
//   atom   := number | 'i' | gen | '(' expr ')'
// Both generator families are accepted here; lower() and parse_poly2() reject
// the wrong one.
OpExpr parse_op(std::string_view text);

WeylOp lower(const OpExpr& expr);
Poly2 lower_poly(const OpExpr& expr);

WeylOp parse_weyl(std::string_view text);
Poly2 parse_poly2(std::string_view text);

// Canonical text that parse_weyl / parse_poly2 read back to the same value.
std::string format_op(const WeylOp& op);
std::string format_poly(const Poly2& p);
std::string format_symbol(const Poly4& a);
std::string format_number(double v);

std::string to_sexpr(const OpExpr& e);

}  // namespace wck
