#pragma once

#include <array>

#include "wck/grid.hpp"
#include "wck/weyl.hpp"

namespace wck {

// Exponent data of exp(-1/2 v^T A v + b^T v + c), A complex symmetric.
struct Quadratic {
  std::array<std::array<cplx, 2>, 2> A{{{1.0, 0.0}, {0.0, 1.0}}};
  std::array<cplx, 2> b{0.0, 0.0};
  cplx c = 0.0;

  cplx operator()(double x, double y) const;
  bool operator==(const Quadratic& o) const { return A == o.A && b == o.b && c == o.c; }
};

double quadratic_distance(const Quadratic& a, const Quadratic& b);

// p(v) * exp(quadratic), with Re A positive definite.
class PolyGauss {
 public:
  PolyGauss(Poly2 p, Quadratic q);
  static PolyGauss gaussian();

  const Poly2& poly() const { return p_; }
  const Quadratic& quad() const { return q_; }

  cplx operator()(double x, double y) const;
  Grid2 sample(int N, double L) const;
  Grid2 sample_like(const Grid2& layout) const;

  PolyGauss with_poly(Poly2 p) const { return PolyGauss(std::move(p), q_); }

 private:
  Poly2 p_;
  Quadratic q_;
};

// Requires (numerically) identical exponents.
PolyGauss operator+(const PolyGauss& f, const PolyGauss& g);
PolyGauss operator-(const PolyGauss& f, const PolyGauss& g);
PolyGauss operator*(cplx s, const PolyGauss& f);

PolyGauss multiply_coordinate(const PolyGauss& f, int axis);
// D = -i d/dv_axis.
PolyGauss derivative(const PolyGauss& f, int axis);
PolyGauss apply_op_exact(const WeylOp& B, const PolyGauss& f);

// g(u) = f(T u) for a real invertible T.
PolyGauss change_variables(const PolyGauss& f, const std::array<std::array<double, 2>, 2>& T);

// sign +1: int e^{-i s t} f dt; sign -1: (1/2pi) int e^{+i s t} f dt.
PolyGauss partial_fourier(const PolyGauss& f, int axis, int sign);
PolyGauss fourier_exact(const PolyGauss& f);
PolyGauss inverse_fourier_exact(const PolyGauss& f);

// Multiplies by exp(-i P) for deg P <= 2.
PolyGauss multiply_phase(const PolyGauss& f, const Poly2& P);

cplx integrate(const PolyGauss& f);
double l2_norm(const PolyGauss& f);
cplx inner(const PolyGauss& f, const PolyGauss& g);
double l2_distance(const PolyGauss& f, const PolyGauss& g);

}  // namespace wck
