#include <doctest.h>

#include <cmath>

#include "wck/cohen.hpp"
#include "wck/dsl.hpp"
#include "wck/error.hpp"
#include "wck/verify.hpp"

using namespace wck;

namespace {

const cplx I(0.0, 1.0);

cplx gauss(double x, double y) { return std::exp(-(x * x + y * y) / 2.0); }

KernelSpec kernel(const char* P, const char* q = "1") {
  return make_kernel(parse_poly2(P), parse_poly2(q));
}

}  // namespace

TEST_CASE("sigma_hat_on_grid") {
  Grid2 layout(16, M_PI);  // integer frequencies
  Grid2 s0 = sigma_hat_on_grid(kernel("0"), layout);
  for (const cplx& z : s0.values()) CHECK(z == cplx(1.0));
  Grid2 s1 = sigma_hat_on_grid(kernel("xi^2 - eta^3 + xi*eta/2"), layout);
  for (const cplx& z : s1.values()) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-15);
  Grid2 s2 = sigma_hat_on_grid(kernel("xi*eta/2"), layout);
  CHECK(std::abs(s2(2, 3) - std::exp(-3.0 * I)) < 1e-15);
}

TEST_CASE("cohen_q basics") {
  Grid2 w = Grid2::sample(128, 10.0, gauss);
  Grid2 W = wig(w);
  CHECK(cohen_q(w, kernel("0")).values() == W.values());
  Grid2 Q = cohen_q(w, kernel("xi*eta/2 + xi^3"));
  CHECK(std::abs(l2_norm(Q) - l2_norm(W)) <= 1e-10);
  Grid2 SQ = spectrum(Q), SW = spectrum(W);
  double m = sup_abs(SW), err = 0.0;
  for (std::size_t i = 0; i < SQ.values().size(); ++i)
    err = std::max(err, std::abs(std::abs(SQ.values()[i]) - std::abs(SW.values()[i])));
  CHECK(err <= 1e-12 * m);
}

TEST_CASE("cohen_q_inverse round trips") {
  Grid2 w = Grid2::sample(256, 12.0, gauss);
  auto k3 = kernel("xi^2 + eta^3");
  CHECK(rel_l2_diff(cohen_q_inverse(cohen_q(w, k3), k3), w) <= 1e-9);
  auto kq = kernel("0", "xi^2 + 1");
  CHECK(rel_l2_diff(cohen_q_inverse(cohen_q(w, kq), kq), w) <= 1e-9);
  Grid2 W = wig(w);
  CHECK(cohen_q_inverse(W, kernel("0")).values() == wig_inverse(W).values());
  KernelSpec bad{Poly2(), Poly2::var(0)};
  CHECK_THROWS_AS(cohen_q_inverse(W, bad), KernelError);
}

TEST_CASE("apply_op on the grid") {
  Grid2 g = Grid2::sample(256, 12.0, gauss);
  Grid2 xg = Grid2::sample(256, 12.0, [](double x, double y) { return x * gauss(x, y); });
  CHECK(sup_diff(apply_op(WeylOp::M1(), g), xg, 1e9) <= 1e-15);
  Grid2 ixg = Grid2::sample(256, 12.0, [](double x, double y) { return I * x * gauss(x, y); });
  CHECK(sup_diff(apply_op(WeylOp::D1(), g), ixg, 10.0) <= 1e-10);
  WeylOp ho = WeylOp::M1().pow(2) + WeylOp::D1().pow(2);
  CHECK(rel_l2_diff(apply_op(ho, g), g) <= 1e-9);
  CHECK(apply_op(WeylOp::identity(), g).values() == g.values());
}

TEST_CASE("wig_exact") {
  PolyGauss W = wig_exact(PolyGauss::gaussian());
  for (auto [x, y] : {std::pair{0.0, 0.0}, {0.5, -1.0}, {2.0, 1.5}})
    CHECK(std::abs(W(x, y) - 2.0 * std::sqrt(M_PI) * std::exp(-x * x - y * y)) < 1e-14);
  PolyGauss xg = PolyGauss::gaussian().with_poly(Poly2::var(0));
  PolyGauss Wx = wig_exact(xg);
  CHECK(Wx.poly().degree() <= 1);
  Grid2 grid = wig(xg.sample(256, 12.0));
  CHECK(sup_diff(Wx.sample_like(grid), grid, 6.0) <= 1e-8);
  PolyGauss yg = PolyGauss::gaussian().with_poly(Poly2::var(1));
  PolyGauss sum = wig_exact(xg + 2.0 * yg);
  PolyGauss parts = wig_exact(xg) + 2.0 * wig_exact(yg);
  CHECK(l2_distance(sum, parts) <= 1e-14 * l2_norm(parts));
}

TEST_CASE("cohen_q_exact") {
  PolyGauss g = PolyGauss::gaussian();
  CHECK(l2_distance(cohen_q_exact(g, kernel("0")), wig_exact(g)) <= 1e-14);
  auto kh = kernel("xi*eta/2");
  Grid2 grid = cohen_q(g.sample(256, 12.0), kh);
  CHECK(sup_diff(cohen_q_exact(g, kh).sample_like(grid), grid, 6.0) <= 1e-8);
  try {
    cohen_q_exact(g, kernel("xi^3"));
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()) == "degree of P exceeds 2");
  }
}

TEST_CASE("exact and grid backends agree at N=256, L=12") {
  const double box = 6.0;
  for (const auto& fn : standard_functions()) {
    Grid2 w = fn.f.sample(256, 12.0);
    Grid2 W = wig(w);
    CHECK(sup_diff(wig_exact(fn.f).sample_like(W), W, box) <= 1e-8);
    for (const auto& op : standard_operators()) {
      Grid2 a = apply_op(op.op, w);
      CHECK(sup_diff(apply_op_exact(op.op, fn.f).sample_like(a), a, box) <= 1e-8);
    }
    for (const char* P : {"0", "xi*eta/2"}) {
      for (const char* q : {"1", "xi^2 + eta^2 + 1"}) {
        auto k = kernel(P, q);
        Grid2 Q = cohen_q(w, k);
        CHECK(sup_diff(cohen_q_exact(fn.f, k).sample_like(Q), Q, box) <= 1e-8);
      }
    }
  }
}

TEST_CASE("verify_identity examples") {
  Grid2 w = Grid2::sample(256, 12.0, gauss);
  WeylOp P = WeylOp::D1().pow(2) * WeylOp::D2();
  CHECK(verify_identity("wig-lemma21", P, kernel("0"), w).rel_residual <= 1e-8);
  WeylOp ho = WeylOp::M1().pow(2) + WeylOp::D1().pow(2);
  CHECK(verify_identity("tilde-thm35", ho, kernel("0"), w).rel_residual <= 1e-8);
  IdentityReport r = verify_identity("bar-thm34", WeylOp::identity(), kernel("0"), w);
  CHECK(r.abs_residual == 0.0);
  CHECK(r.rel_residual == 0.0);
  IdentityReport e =
      verify_identity("bar-thm34", WeylOp::identity(), kernel("0"), PolyGauss::gaussian());
  CHECK(e.abs_residual == 0.0);
  CHECK_THROWS_AS(verify_identity("wig-lemma21", WeylOp::M1(), kernel("0"), w), DomainError);
  CHECK_THROWS_AS(verify_identity("nope", WeylOp::M1(), kernel("0"), w), DomainError);
}

TEST_CASE("all identities hold on the exact backend over the standard matrix") {
  double worst = 0.0;
  for (const char* name : {"wig-prop22", "bar-thm34", "tilde-thm35", "sigma1-thm310"})
    for (const auto& op : standard_operators())
      for (const auto& P : standard_phases())
        for (const auto& q : standard_factors())
          for (const auto& fn : standard_functions()) {
            auto k = make_kernel(P.poly, q.poly);
            worst = std::max(worst, verify_identity(name, op.op, k, fn.f).rel_residual);
          }
  CHECK(worst <= 1e-10);
}
