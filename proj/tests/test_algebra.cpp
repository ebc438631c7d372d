#include <doctest.h>

#include <random>

#include "oracles/rewrite.hpp"
#include "wck/dsl.hpp"
#include "wck/error.hpp"
#include "wck/weyl.hpp"

using namespace wck;

namespace {

const cplx I(0.0, 1.0);
const WeylOp M1 = WeylOp::M1(), M2 = WeylOp::M2(), D1 = WeylOp::D1(), D2 = WeylOp::D2();
const WeylOp Id = WeylOp::identity();

WeylOp random_op(std::mt19937_64& rng, int max_deg = 6, int max_terms = 8) {
  std::uniform_int_distribution<int> nt(1, max_terms), coef(-8, 8), part(0, 1);
  WeylOp r;
  int n = nt(rng);
  for (int t = 0; t < n; ++t) {
    std::array<int, 4> k{0, 0, 0, 0};
    int d = std::uniform_int_distribution<int>(0, max_deg)(rng);
    for (int s = 0; s < d; ++s) k[std::uniform_int_distribution<int>(0, 3)(rng)]++;
    r.add_term(k, cplx(coef(rng) / 4.0, part(rng) ? coef(rng) / 2.0 : 0.0));
  }
  return r;
}

WeylOp random_constant_coefficient(std::mt19937_64& rng) {
  WeylOp r;
  std::uniform_int_distribution<int> e(0, 3), coef(-4, 4);
  for (int t = 0; t < 4; ++t) r.add_term({0, 0, e(rng), e(rng)}, coef(rng) / 2.0);
  return r;
}

}  // namespace

TEST_CASE("product examples") {
  CHECK(D1 * M1 == M1 * D1 - I * Id);
  CHECK((D1 + D2) * (M2 - M1) == (M2 - M1) * (D1 + D2));
  CHECK(D1.pow(2) * M1 == M1 * D1.pow(2) - 2.0 * I * D1);
}

TEST_CASE("product matches single-step rewriting on all monomial pairs up to degree 4") {
  int mismatches = 0;
  for (int a = 0; a < 625; ++a) {
    std::array<int, 4> ka{a % 5, a / 5 % 5, a / 25 % 5, a / 125};
    WeylOp A = WeylOp::monomial(ka);
    for (int b = 0; b < 625; ++b) {
      std::array<int, 4> kb{b % 5, b / 5 % 5, b / 25 % 5, b / 125};
      WeylOp got = normal_mul(A, WeylOp::monomial(kb));
      if (got.terms() != oracle::product(ka, kb)) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("commutation relation [D1, M1] = -i in both variables") {
  CHECK(D1 * M1 - M1 * D1 == -I * Id);
  CHECK(D2 * M2 - M2 * D2 == -I * Id);
  for (auto [a, b] : {std::pair{M1, M2}, {D1, D2}, {M1, D2}, {M2, D1}}) CHECK(a * b == b * a);
}

TEST_CASE("Dx + Dy and y - x commute for all powers") {
  for (int h = 0; h <= 4; ++h)
    for (int k = 0; k <= 4; ++k)
      CHECK((D1 + D2).pow(h) * (M2 - M1).pow(k) == (M2 - M1).pow(k) * (D1 + D2).pow(h));
}

TEST_CASE("associativity and distributivity on random triples") {
  std::mt19937_64 rng(12345);
  for (int t = 0; t < 60; ++t) {
    WeylOp a = random_op(rng), b = random_op(rng), c = random_op(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) * c == a * c + b * c);
  }
}

TEST_CASE("terms never store zero coefficients") {
  WeylOp a = M1 + D1;
  a -= M1;
  CHECK(a == D1);
  CHECK(a.terms().size() == 1);
  WeylOp z = D1 * M1 - M1 * D1 + I * Id;
  CHECK(z.is_zero());
}

TEST_CASE("substitute_ordered") {
  CHECK(substitute_ordered(M1 * D1, M1, M2, D1, D2) == M1 * D1);
  CHECK(wig_pushforward(D1) == D1 + D2);
  CHECK(wig_pushforward(M1 * D1) == 0.5 * (M2 + M1) * (D1 + D2));
  // ordering: x1^m x2^n y1^h y2^k
  WeylOp B = D1 * M1;  // = M1 D1 - i
  CHECK(substitute_ordered(B, D2, M1, M2, D1) == D2 * M2 - I * Id);
}

TEST_CASE("wig_pushforward generators") {
  CHECK(wig_pushforward(M1) == 0.5 * (M1 + M2));
  CHECK(wig_pushforward(M2) == 0.5 * (D1 - D2));
  CHECK(wig_pushforward(D2) == M2 - M1);
}

TEST_CASE("wig_pushforward is multiplicative on constant-coefficient operators") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    WeylOp p = random_constant_coefficient(rng), q = random_constant_coefficient(rng);
    CHECK(wig_pushforward(p * q) == wig_pushforward(p) * wig_pushforward(q));
  }
}

TEST_CASE("bar_transform") {
  KernelSpec k0{Poly2(), Poly2::constant(1.0)};
  CHECK(bar_transform(M1, k0) == 0.5 * (M1 + M2));
  Poly2 P = parse_poly2("xi^2*eta - 3*eta^2 + xi/2");
  KernelSpec k = make_kernel(P, Poly2::constant(1.0));
  WeylOp X = D1 + D2, Y = M2 - M1;
  CHECK(bar_transform(M1, k) == 0.5 * (M2 + M1) + eval_at(P.derivative(0), X, Y));
  CHECK(bar_transform(M2, k) == 0.5 * (D1 - D2) + eval_at(P.derivative(1), X, Y));
  CHECK(bar_transform(D1, k) == X);
  CHECK(bar_transform(D2, k) == Y);
}

TEST_CASE("tilde_transform") {
  KernelSpec k0{Poly2(), Poly2::constant(1.0)};
  KernelSpec kh = make_kernel(parse_poly2("xi*eta/2"), Poly2::constant(1.0));
  WeylOp ho = M1.pow(2) + D1.pow(2);
  CHECK(tilde_transform(ho, k0) == (M1 - 0.5 * D2).pow(2) + (M2 + 0.5 * D1).pow(2));
  CHECK(tilde_transform(D1, k0) == 0.5 * D1 + M2);
  CHECK(tilde_transform(M1, kh) == M1 - D2);
  CHECK(tilde_transform(ho, kh) == (M1 - D2).pow(2) + M2.pow(2));
}

TEST_CASE("bar and tilde are linear in B") {
  std::mt19937_64 rng(99);
  KernelSpec k = make_kernel(parse_poly2("xi^2 - eta^2 + xi*eta/2"), Poly2::constant(1.0));
  for (int t = 0; t < 20; ++t) {
    WeylOp a = random_op(rng, 4, 5), b = random_op(rng, 4, 5);
    CHECK(bar_transform(a + 2.0 * b, k) == bar_transform(a, k) + 2.0 * bar_transform(b, k));
    CHECK(tilde_transform(a + 2.0 * b, k) == tilde_transform(a, k) + 2.0 * tilde_transform(b, k));
  }
}

TEST_CASE("bar and tilde are multiplicative") {
  std::mt19937_64 rng(5);
  KernelSpec k = make_kernel(parse_poly2("xi*eta/2 + eta^2"), Poly2::constant(1.0));
  for (int t = 0; t < 20; ++t) {
    WeylOp a = random_op(rng, 3, 4), b = random_op(rng, 3, 4);
    CHECK(max_coeff_diff(tilde_transform(a * b, k), tilde_transform(a, k) * tilde_transform(b, k)) <
          1e-9);
    CHECK(max_coeff_diff(bar_transform(a * b, k), bar_transform(a, k) * bar_transform(b, k)) < 1e-9);
  }
}

TEST_CASE("a_of_q") {
  CHECK(a_of_q(Poly2::constant(1.0)) == Id);
  CHECK(a_of_q(Poly2::var(0)) == D1 + D2);
  CHECK(a_of_q(parse_poly2("xi*eta + 1")) == (D1 + D2) * (M2 - M1) + Id);
  CHECK(a_of_q(parse_poly2("xi*eta + 1")) ==
        M2 * D1 + M2 * D2 - M1 * D1 - M1 * D2 + Id);
}

TEST_CASE("tilde of A is the constant-coefficient factor q(D1, D2)") {
  KernelSpec k = make_kernel(parse_poly2("xi^2 - eta^2"), Poly2::constant(1.0));
  Poly2 q = parse_poly2("xi^2 + eta^2 + 1 + xi*eta");
  CHECK(tilde_transform(a_of_q(q), k) == eval_at(q, D1, D2));
}

TEST_CASE("symbol_of") {
  WeylOp L = (D1 - 0.5 * M2).pow(2) + (D2 + 0.5 * M1).pow(2);
  Poly4 a = symbol_of(L);
  CHECK(a.terms().size() == 6);
  CHECK(a.terms().at({0, 2, 0, 0}) == cplx(0.25));
  CHECK(a.terms().at({0, 1, 1, 0}) == cplx(-1.0));
  CHECK(a.terms().at({1, 0, 0, 1}) == cplx(1.0));
  CHECK(a({0.0, 2.0, 1.0, 0.0}) == cplx(0.0));
  CHECK(symbol_of(Id).terms().at({0, 0, 0, 0}) == cplx(1.0));
  CHECK(symbol_of(M1 * D1).terms().size() == 1);
  CHECK(symbol_of(M1 * D1).terms().count({1, 0, 1, 0}) == 1);
}

TEST_CASE("kernel validation") {
  CHECK_NOTHROW(make_kernel(Poly2(), parse_poly2("xi^2 + 1")));
  CHECK_NOTHROW(make_kernel(Poly2(), parse_poly2("xi^2 + eta^2 + 1")));
  CHECK_NOTHROW(make_kernel(Poly2(), parse_poly2("xi + i")));
  CHECK_THROWS_AS(make_kernel(Poly2(), parse_poly2("xi")), KernelError);
  CHECK_THROWS_AS(make_kernel(Poly2(), parse_poly2("xi^2 + eta^2 - 4")), KernelError);
  CHECK_THROWS_AS(make_kernel(Poly2(), parse_poly2("(xi - 300)*(eta + 2) + i*(xi - 300)")),
                  KernelError);
  CHECK_THROWS_AS(make_kernel(parse_poly2("i*xi"), Poly2::constant(1.0)), KernelError);
  CHECK_THROWS_AS(make_kernel(Poly2(), Poly2()), KernelError);
}
