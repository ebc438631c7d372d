#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "wck/cohen.hpp"
#include "wck/dsl.hpp"
#include "wck/error.hpp"
#include "wck/gallery.hpp"
#include "wck/verify.hpp"

using namespace wck;

namespace {

double bracket(const std::array<double, 4>& z) {
  return std::sqrt(1.0 + z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]);
}

Poly4 twisted_symbol() { return symbol_of(twisted_laplacian()); }

// (1/4 pi) int_1^inf e^{-r^2 u / 4} / sqrt(u^2 - 1) du
double green_u_form(double r) {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [r](double s) {
    double u = 1.0 + s;
    return std::exp(-0.25 * r * r * u) / std::sqrt(s * (u + 1.0));
  };
  return es.integrate(f, 0.0, std::numeric_limits<double>::infinity()) / (4.0 * M_PI);
}

}  // namespace

TEST_CASE("hypo_check finds the twisted zero on every shell") {
  for (double mp : {0.0, 1.0, 2.0}) {
    HypoParams p;
    p.m_prime = mp;
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      p.seed = seed;
      HypoVerdict v = hypo_check(twisted_symbol(), p);
      REQUIRE(v.witness_found);
      for (const ShellResult& s : v.shells) CHECK(s.witness);
      CHECK(std::abs(twisted_symbol()(v.witness)) < 1e-9 * std::pow(bracket(v.witness), mp));
      CHECK(v.verdict.find("violated") != std::string::npos);
      // (xi - y/2)^2 + (eta + x/2)^2 = 0
      const auto& w = v.witness;
      CHECK(std::abs(w[2] - 0.5 * w[1]) < 1e-6);
      CHECK(std::abs(w[3] + 0.5 * w[0]) < 1e-6);
    }
  }
}

TEST_CASE("hypo_check on elliptic symbols") {
  Poly4 a = symbol_of(parse_weyl("x^2 + y^2 + Dx^2 + Dy^2"));
  HypoParams p;
  p.m_prime = 2.0;
  p.radii = {1.5, 2, 4, 8, 16};
  HypoVerdict v = hypo_check(a, p);
  CHECK_FALSE(v.witness_found);
  for (const ShellResult& s : v.shells) {
    CHECK(s.c >= 0.5);
    CHECK(s.c == doctest::Approx(s.radius * s.radius / (1 + s.radius * s.radius)).epsilon(1e-9));
  }
  CHECK(v.verdict.find("one-sided") != std::string::npos);

  Poly4 b = symbol_of(twisted_laplacian() + WeylOp::identity());
  p.m_prime = 0.0;
  HypoVerdict vb = hypo_check(b, p);
  CHECK_FALSE(vb.witness_found);
  for (const ShellResult& s : vb.shells) CHECK(s.c >= 1.0 - 1e-12);
}

TEST_CASE("hypo_check derivative ratios") {
  Poly4 a = symbol_of(parse_weyl("x^2 + y^2 + Dx^2 + Dy^2"));
  HypoParams p;
  p.m_prime = 2.0;
  p.derivative_order = 2;
  p.radii = {2, 8, 32};
  HypoVerdict v = hypo_check(a, p);
  // |d a| <z> / |a| and |d^2 a| <z>^2 / |a| stay bounded for this symbol.
  for (const ShellResult& s : v.shells) {
    REQUIRE(s.derivative_C.has_value());
    CHECK(*s.derivative_C < 5.0);
    CHECK(s.derivative_skipped == 0);
  }
}

TEST_CASE("hypo_check parameter validation") {
  Poly4 a = twisted_symbol();
  HypoParams p;
  p.rho = 0.0;
  CHECK_THROWS_AS(hypo_check(a, p), DomainError);
  p = {};
  p.radii = {4, 2};
  CHECK_THROWS_AS(hypo_check(a, p), DomainError);
  p = {};
  p.B = 3.0;
  CHECK_THROWS_AS(hypo_check(a, p), DomainError);
}

TEST_CASE("twisted_green oracles") {
  CHECK_THROWS_AS(twisted_green(0.0), DomainError);
  CHECK_THROWS_AS(twisted_green(-1.0), DomainError);
  for (int k = 1; k <= 50; ++k) {
    double r = 0.1 * k;
    double g = twisted_green(r);
    CHECK(std::abs(g - green_u_form(r)) <= 1e-10);
    CHECK(std::abs(g - boost::math::cyl_bessel_k(0, 0.25 * r * r) / (4 * M_PI)) <= 1e-12);
    if (k > 1) CHECK(g < twisted_green(r - 0.1));
  }
}

TEST_CASE("twisted_green_moment") {
  // d/dR int_0^R g r dr = g(R) R
  for (double R : {0.05, 0.3, 1.0, 3.0}) {
    double h = 1e-4;
    double d = (twisted_green_moment(R + h) - twisted_green_moment(R - h)) / (2 * h);
    CHECK(d == doctest::Approx(twisted_green(R) * R).epsilon(1e-7));
  }
  CHECK(twisted_green_moment(0.0) == 0.0);
  // int_{R^2} g = int_0^inf K0 = pi / 2.
  CHECK(2 * M_PI * twisted_green_moment(60.0) == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("green bound fit") {
  GreenBound b = fit_green_bound();
  CHECK(b.violations == 0);
  CHECK(b.C > 0.0);
  CHECK(b.argmax > 0.05);
  CHECK(b.argmax < 6.0);
  for (int k = 0; k <= 200; ++k) {
    double r = 0.05 + k * (5.95 / 200);
    CHECK(twisted_green(r) <= b.C * std::pow(r, -2.0) * std::exp(-0.1 * r * r) * (1 + 1e-12));
  }
}

TEST_CASE("twisted_solve residual and convergence") {
  SolveReport r64 = twisted_solve_gaussian(64, 8.0);
  SolveReport r128 = twisted_solve_gaussian(128, 8.0);
  MESSAGE("residual N=64: " << r64.residual << ", N=128: " << r128.residual);
  CHECK(r64.residual <= 1e-2);
  CHECK(r128.residual < r64.residual);
  CHECK(r64.center_rule == "square-cell integral");
  CHECK(r64.center_weight > r64.disc_weight);
}

TEST_CASE("twisted_solve decay is stable in L") {
  SolveReport a = twisted_solve_gaussian(64, 8.0);
  SolveReport b = twisted_solve_gaussian(128, 12.0);
  MESSAGE("decay sup L=8: " << a.decay_sup << ", L=12: " << b.decay_sup);
  CHECK(std::isfinite(a.decay_sup));
  CHECK(b.decay_sup == doctest::Approx(a.decay_sup).epsilon(1e-2));
}

TEST_CASE("twisted_solve linearity and guards") {
  auto f1 = Grid2::sample(32, 6.0, [](double x, double y) { return std::exp(-(x * x + y * y)); });
  auto f2 = Grid2::sample(32, 6.0, [](double x, double y) {
    return cplx(x, y * y) * std::exp(-(x * x + 2 * y * y) / 2);
  });
  Grid2 s = twisted_solve(f1 + f2).u;
  Grid2 t = twisted_solve(f1).u + twisted_solve(f2).u;
  CHECK(sup_abs(s - t) <= 1e-12);
  CHECK_THROWS_AS(twisted_solve(Grid2(256, 8.0)), DomainError);
  CHECK_THROWS_AS(twisted_solve(wig(f1)), DomainError);
}

TEST_CASE("catalog entries reproduce their forms") {
  auto cat = catalog();
  CHECK(cat.size() == 7);
  for (const NamedExample& e : cat) {
    INFO(e.name);
    CHECK(tilde_reproduces(e));
    CHECK(dsl_round_trips(e));
    CHECK(max_coeff_diff(tilde_transform(e.base, e.kernel), e.form) == 0.0);
  }
}

TEST_CASE("catalog examples") {
  const WeylOp M1 = WeylOp::M1(), M2 = WeylOp::M2(), D1 = WeylOp::D1(), D2 = WeylOp::D2();
  NamedExample ho3 = make_example("HO3");
  CHECK(ho3.form == (M1 - D2) * (M1 - D2) + M2 * M2);
  CHECK(ho3.kernel.P == Poly2::monomial(1, 1, 0.5));

  NamedExample ho1 = make_example("HO1");
  CHECK(ho1.form == tilde_transform(parse_weyl("x^2+Dx^2"), make_kernel(Poly2(), Poly2::constant(1))));

  ExampleArgs a;
  a.Q = "Dx^3";
  a.R = "Dy^2";
  NamedExample h3 = make_example("HO3", a);
  CHECK(h3.form == parse_weyl("(x - Dy + Dx^3)^2 + (y + Dy^2)^2"));
  CHECK(tilde_reproduces(h3));
  NamedExample h2 = make_example("HO2", a);
  CHECK(h2.form == parse_weyl("(x - Dy/2 + Dx^3)^2 + (y + Dx/2 + Dy^2)^2"));
  CHECK(tilde_reproduces(h2));

  ExampleArgs e1;
  e1.b = "x^3 - 2*x + 5";
  e1.P = "xi^2 - eta/4";
  NamedExample ex1 = make_example("ex1", e1);
  CHECK(ex1.form == parse_weyl("(x + Dx^2 - Dy/4)^3 - 2*(x + Dx^2 - Dy/4) + 5"));
  CHECK(tilde_reproduces(ex1));
  CHECK_FALSE(ex1.condition_holds);  // x^3 - 2x + 5 has a real root
  CHECK(make_example("ex1").condition_holds);

  NamedExample airy = make_example("airy");
  CHECK(airy.condition_holds);
  CHECK(airy.form == parse_weyl("Dx/2 + y + i*(x - Dy/2)"));
  ExampleArgs a3;
  a3.alpha = cplx(0.5, -1.0);
  a3.m = 3;
  a3.P = "xi*eta/2";
  NamedExample airy3 = make_example("airy", a3);
  CHECK_FALSE(airy3.condition_holds);
  CHECK(tilde_reproduces(airy3));
  a3.m = 0;
  CHECK_THROWS_AS(make_example("airy", a3), DomainError);

  CHECK(make_example("twisted").form == parse_weyl("(Dx - y/2)^2 + (Dy + x/2)^2"));
  CHECK(make_example("harmonic2d").form == parse_weyl("x^2 + y^2 + Dx^2 + Dy^2"));
}

TEST_CASE("catalog parameter validation") {
  ExampleArgs a;
  a.Q = "Dy";
  CHECK_THROWS_AS(make_example("HO2", a), DomainError);
  a.Q = "i*Dx";
  CHECK_THROWS_AS(make_example("HO3", a), DomainError);
  a.Q = "Dx^";
  CHECK_THROWS_AS(make_example("HO3", a), ParseError);
  ExampleArgs b;
  b.P = "i*xi";
  CHECK_THROWS_AS(make_example("HO1", b), KernelError);
  CHECK_THROWS_AS(make_example("nope"), DomainError);
  b = {};
  b.b = "x*Dx";
  CHECK_THROWS_AS(make_example("ex1", b), DomainError);
}
