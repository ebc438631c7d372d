#include <doctest.h>

#include <random>
#include <string>

#include "wck/dsl.hpp"
#include "wck/error.hpp"

using namespace wck;

namespace {

const cplx I(0.0, 1.0);
const WeylOp M1 = WeylOp::M1(), M2 = WeylOp::M2(), D1 = WeylOp::D1(), D2 = WeylOp::D2();

ParseError::Code code_of(const char* text, bool poly = false) {
  try {
    if (poly)
      parse_poly2(text);
    else
      parse_weyl(text);
  } catch (const ParseError& e) {
    return e.code();
  }
  FAIL("no error for " << text);
  return ParseError::Code::Syntax;
}

std::size_t offset_of(const char* text) {
  try {
    parse_weyl(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return std::size_t(-1);
}

std::string random_expr(std::mt19937_64& rng, int depth) {
  static const char* atoms[] = {"x", "y", "Dx", "Dy", "2", "1/2", "i", "3.5"};
  std::uniform_int_distribution<int> pick(0, 7), kind(0, 4);
  if (depth == 0) return atoms[pick(rng)];
  switch (kind(rng)) {
    case 0:
      return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 1:
      return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
    case 2:
      return "(" + random_expr(rng, depth - 1) + ")*(" + random_expr(rng, depth - 1) + ")";
    case 3:
      return "(" + random_expr(rng, depth - 1) + ")^2";
    default:
      return "-" + random_expr(rng, depth - 1);
  }
}

}  // namespace

TEST_CASE("parse_op shapes") {
  CHECK(to_sexpr(parse_op("x^2 + Dx^2")) == "sum(power(gen x,2),power(gen Dx,2))");
  CHECK(to_sexpr(parse_op("Dx*x")) == "product(gen Dx,gen x)");
  CHECK_NOTHROW(parse_op("(x - Dy + Dx^3)^2 + (y + Dy^2)^2"));
  CHECK(to_sexpr(parse_op("-x^2")) == "neg(power(gen x,2))");
  CHECK(to_sexpr(parse_op("x^2^3")) == "power(gen x,8)");
}

TEST_CASE("lower") {
  CHECK(parse_weyl("Dx*x") == M1 * D1 - I * WeylOp::identity());
  CHECK(parse_weyl("x*Dx") == M1 * D1);
  CHECK(parse_weyl("(x - Dy)^2") == M1.pow(2) - 2.0 * M1 * D2 + D2.pow(2));
  CHECK(parse_weyl("(x - Dy + Dx^3)^2 + (y + Dy^2)^2") ==
        (M1 - D2 + D1.pow(3)).pow(2) + (M2 + D2.pow(2)).pow(2));
  CHECK(parse_weyl("(x+1)(y+1)") == (M1 + WeylOp::identity()) * (M2 + WeylOp::identity()));
  CHECK(parse_weyl("2*i*x") == 2.0 * I * M1);
  CHECK(parse_weyl("x/4") == 0.25 * M1);
  CHECK(parse_weyl("1/4*x") == 0.25 * M1);
}

TEST_CASE("parse_poly2") {
  CHECK(parse_poly2("xi*eta/2") == Poly2::monomial(1, 1, 0.5));
  CHECK(parse_poly2("0").is_zero());
  Poly2 q = parse_poly2("xi^2+1");
  CHECK(q == Poly2::monomial(2, 0, 1.0) + Poly2::constant(1.0));
  CHECK(q.is_real());
}

TEST_CASE("error kinds and offsets") {
  CHECK(code_of("x^(-1)") == ParseError::Code::BadExponent);
  CHECK(code_of("x^-1") == ParseError::Code::BadExponent);
  CHECK(code_of("x^0.5") == ParseError::Code::BadExponent);
  CHECK(code_of("z") == ParseError::Code::UnknownIdentifier);
  CHECK(code_of("dx") == ParseError::Code::UnknownIdentifier);
  CHECK(code_of("2i") == ParseError::Code::Syntax);
  CHECK(code_of("x +") == ParseError::Code::Syntax);
  CHECK(code_of("(x") == ParseError::Code::Syntax);
  CHECK(code_of("x/0") == ParseError::Code::Syntax);
  CHECK(code_of("x/y") == ParseError::Code::Syntax);
  CHECK(code_of("x $ y") == ParseError::Code::Syntax);
  CHECK(code_of("") == ParseError::Code::Syntax);
  CHECK(code_of("xi") == ParseError::Code::WrongMode);
  CHECK(code_of("x + eta", true) == ParseError::Code::WrongMode);
  CHECK(offset_of("x + z") == 4);
  CHECK(offset_of("2i") == 1);
  CHECK(offset_of("x^(-1)") == 2);
  CHECK(offset_of("x + eta") == 4);
}

TEST_CASE("pretty print round trip is a fixed point") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    WeylOp op = parse_weyl(random_expr(rng, 3));
    std::string s1 = format_op(op);
    WeylOp back = parse_weyl(s1);
    CHECK(back == op);
    CHECK(format_op(back) == s1);
  }
  WeylOp odd = cplx(1.0 / 3.0, -0.1) * M1 * D2 - cplx(0.0, 1e-20) * D1 + 123456.789 * M2;
  CHECK(parse_weyl(format_op(odd)) == odd);
  Poly2 p = parse_poly2("xi^2/3 - eta*xi*i + 7");
  CHECK(parse_poly2(format_poly(p)) == p);
  CHECK(format_op(WeylOp()) == "0");
}

TEST_CASE("lowering respects source order of products") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 100; ++t) {
    std::string a = random_expr(rng, 2), b = random_expr(rng, 2);
    CHECK(parse_weyl("(" + a + ")*(" + b + ")") == normal_mul(parse_weyl(a), parse_weyl(b)));
  }
}
