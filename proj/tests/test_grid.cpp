#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "wck/cohen.hpp"
#include "wck/error.hpp"
#include "wck/grid.hpp"

using namespace wck;

namespace {

cplx gauss(double x, double y) { return std::exp(-(x * x + y * y) / 2.0); }

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid2(6, 1.0), DomainError);
  CHECK_THROWS_AS(Grid2(12, 1.0), DomainError);
  CHECK_THROWS_AS(Grid2(16, 0.0), DomainError);
  Grid2 g(16, 2.0);
  CHECK(g.axis(0).step == doctest::Approx(0.25));
  CHECK(g.axis(0).coord(0) == -2.0);
  CHECK_THROWS_AS(Grid2::sample(8, 1.0, [](double, double) { return cplx(NAN); }), DomainError);
}

TEST_CASE("DFT round trip") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Grid2 g(64, 3.0);
  for (cplx& z : g.values()) z = cplx(nd(rng), nd(rng));
  Grid2 back = from_spectrum(spectrum(g));
  double err = 0.0;
  for (std::size_t i = 0; i < g.values().size(); ++i)
    err = std::max(err, std::abs(back.values()[i] - g.values()[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("wig of a Gaussian matches the closed form") {
  Grid2 w = Grid2::sample(256, 12.0, gauss);
  Grid2 W = wig(w);
  CHECK(W.kind() == GridKind::WignerOutput);
  CHECK(W.axis(1).step == doctest::Approx(M_PI / 24.0));
  double err = 0.0;
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) {
      double x = W.axis(0).coord(i), y = W.axis(1).coord(j);
      err = std::max(err, std::abs(W(i, j) - 2.0 * std::sqrt(M_PI) * std::exp(-x * x - y * y)));
    }
  CHECK(err <= 1e-10);
}

TEST_CASE("wig is linear") {
  Grid2 a = Grid2::sample(64, 8.0, gauss);
  Grid2 b = Grid2::sample(64, 8.0, [](double x, double y) { return x * y * gauss(x, y); });
  const cplx s(0.5, -2.0), t(3.0, 0.25);
  Grid2 lhs = wig(s * a + t * b), rhs = s * wig(a) + t * wig(b);
  CHECK(sup_diff(lhs, rhs, 1e9) <= 1e-14 * std::max(1.0, sup_abs(rhs)));
}

TEST_CASE("wig_inverse round trips") {
  Grid2 g = Grid2::sample(256, 12.0, gauss);
  CHECK(rel_l2_diff(wig_inverse(wig(g)), g) <= 1e-12);
  Grid2 h = Grid2::sample(256, 12.0, [](double x, double y) { return x * gauss(x, y); });
  CHECK(rel_l2_diff(wig_inverse(wig(h)), h) <= 1e-10);
  Grid2 k = Grid2::sample(128, 10.0, [](double x, double y) {
    return cplx(x * x - y, x * y) * std::exp(-(x * x + 2 * y * y) / 3.0 + cplx(0, 0.3) * x);
  });
  CHECK(rel_l2_diff(wig_inverse(wig(k)), k) <= 1e-10);
  Grid2 W = wig(k);
  CHECK(rel_l2_diff(wig(wig_inverse(W)), W) <= 1e-10);
  Grid2 zero = wig(Grid2(32, 4.0));
  CHECK(sup_abs(wig_inverse(zero)) == 0.0);
  CHECK_THROWS_AS(wig_inverse(g), DomainError);
}

TEST_CASE("binary and CSV formats") {
  Grid2 g = Grid2::sample(16, 2.5, [](double x, double y) { return cplx(x, y * y); });
  std::string path = "test_grid_roundtrip.wgk";
  save_grid(path, g);
  Grid2 back = load_grid(path);
  CHECK(back.N() == 16);
  CHECK(back.L() == 2.5);
  CHECK(back.values() == g.values());
  std::FILE* f = std::fopen(path.c_str(), "rb");
  char magic[5] = {0};
  CHECK(std::fread(magic, 1, 4, f) == 4);
  unsigned char nb[4];
  CHECK(std::fread(nb, 1, 4, f) == 4);
  std::fclose(f);
  CHECK(std::string(magic) == "WGK1");
  CHECK(nb[0] == 16);
  CHECK(nb[1] == 0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_grid("does-not-exist.wgk"), IoError);

  std::ostringstream os;
  write_csv(os, g);
  std::string s = os.str();
  CHECK(s.rfind("x,y,re,im\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 16 * 16 + 1);
}
