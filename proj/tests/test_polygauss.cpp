#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "wck/dsl.hpp"
#include "wck/error.hpp"
#include "wck/polygauss.hpp"

using namespace wck;

namespace {

const cplx I(0.0, 1.0);

// Brute-force 2-D quadrature of a complex integrand on [-R, R]^2.
template <class F>
cplx quad2(F f, double R) {
  using boost::math::quadrature::gauss_kronrod;
  auto inner = [&](double x, bool im) {
    return gauss_kronrod<double, 61>::integrate(
        [&](double y) { return im ? f(x, y).imag() : f(x, y).real(); }, -R, R, 12, 1e-13);
  };
  double re = gauss_kronrod<double, 61>::integrate([&](double x) { return inner(x, false); }, -R,
                                                   R, 12, 1e-13);
  double im = gauss_kronrod<double, 61>::integrate([&](double x) { return inner(x, true); }, -R,
                                                   R, 12, 1e-13);
  return {re, im};
}

PolyGauss sample_function() {
  Quadratic q;
  q.A = {{{1.3, cplx(0.2, 0.1)}, {cplx(0.2, 0.1), cplx(0.8, -0.4)}}};
  q.b = {cplx(0.1, 0.5), cplx(-0.2, 0.0)};
  q.c = cplx(0.05, 0.3);
  return PolyGauss(parse_poly2("xi^2 - 2*i*xi*eta + 0.5 + eta"), q);
}

}  // namespace

TEST_CASE("positive definiteness is enforced") {
  Quadratic q;
  q.A = {{{1.0, 2.0}, {2.0, 1.0}}};
  CHECK_THROWS_AS(PolyGauss(Poly2::constant(1.0), q), DomainError);
  q.A = {{{cplx(1.0, 5.0), 0.0}, {0.0, cplx(1e-14, 3.0)}}};
  CHECK_THROWS_AS(PolyGauss(Poly2::constant(1.0), q), DomainError);
}

TEST_CASE("coordinate multiplication and derivatives") {
  PolyGauss g = PolyGauss::gaussian();
  CHECK(multiply_coordinate(g, 0).poly() == Poly2::var(0));
  CHECK(derivative(g, 0).poly() == I * Poly2::var(0));
  WeylOp ho = WeylOp::M1().pow(2) + WeylOp::D1().pow(2);
  CHECK(apply_op_exact(ho, g).poly() == Poly2::constant(1.0));
  // D = -i d/dx checked against a central difference on a general function
  PolyGauss f = sample_function();
  PolyGauss d = derivative(f, 1);
  double h = 1e-5, x = 0.3, y = -0.7;
  cplx fd = -I * (f(x, y + h) - f(x, y - h)) / (2 * h);
  CHECK(std::abs(d(x, y) - fd) < 1e-8);
}

TEST_CASE("apply_op_exact follows normal order") {
  PolyGauss f = sample_function();
  WeylOp B = WeylOp::D1() * WeylOp::M1();  // = x Dx - i
  PolyGauss lhs = apply_op_exact(B, f);
  PolyGauss rhs = derivative(multiply_coordinate(f, 0), 0);
  CHECK(l2_distance(lhs, rhs) < 1e-13 * l2_norm(rhs));
}

TEST_CASE("Fourier transform matches quadrature") {
  PolyGauss f = sample_function();
  PolyGauss F = fourier_exact(f);
  for (auto [s1, s2] : {std::pair{0.0, 0.0}, {0.7, -1.1}, {-2.0, 0.4}}) {
    cplx ref = quad2([&](double x, double y) { return std::exp(-I * (s1 * x + s2 * y)) * f(x, y); },
                     12.0);
    CHECK(std::abs(F(s1, s2) - ref) < 1e-9);
  }
  PolyGauss back = inverse_fourier_exact(F);
  CHECK(l2_distance(back, f) < 1e-12 * l2_norm(f));
}

TEST_CASE("closed-form Gaussian transform") {
  PolyGauss F = fourier_exact(PolyGauss::gaussian());
  for (double s : {0.0, 0.5, 2.0})
    CHECK(std::abs(F(s, -s) - 2.0 * M_PI * std::exp(-s * s)) < 1e-14);
}

TEST_CASE("change of variables") {
  PolyGauss f = sample_function();
  PolyGauss g = change_variables(f, {{{1.0, 0.5}, {1.0, -0.5}}});
  for (auto [u, t] : {std::pair{0.2, 0.3}, {-1.0, 2.0}})
    CHECK(std::abs(g(u, t) - f(u + t / 2, u - t / 2)) < 1e-14);
}

TEST_CASE("phase multiplication") {
  PolyGauss f = sample_function();
  Poly2 P = parse_poly2("xi^2/2 - xi*eta + 3*eta^2 + xi - 2 + eta");
  PolyGauss g = multiply_phase(f, P);
  for (auto [x, y] : {std::pair{0.2, 0.3}, {-1.0, 2.0}})
    CHECK(std::abs(g(x, y) - std::exp(-I * P(x, y)) * f(x, y)) < 1e-13);
  CHECK_THROWS_AS(multiply_phase(f, parse_poly2("xi^3")), DomainError);
}

TEST_CASE("norms and distances") {
  PolyGauss g = PolyGauss::gaussian();
  CHECK(l2_norm(g) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  PolyGauss f = sample_function();
  double ref = std::sqrt(quad2([&](double x, double y) { return cplx(std::norm(f(x, y))); }, 12.0)
                             .real());
  CHECK(l2_norm(f) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(l2_distance(f, f) == 0.0);
  PolyGauss h = multiply_phase(f, parse_poly2("xi*eta"));
  cplx ip = quad2([&](double x, double y) { return f(x, y) * std::conj(h(x, y)); }, 12.0);
  CHECK(std::abs(inner(f, h) - ip) < 1e-9);
}
