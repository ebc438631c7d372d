#include "wck/polygauss.hpp"

#include <cmath>
#include <vector>

#include "wck/error.hpp"

namespace wck {

namespace {

constexpr double kPdTol = 1e-12;

double binom(int n, int k) {
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * double(n - k + t) / double(t);
  return r;
}

double double_factorial_odd(int j) {  // (j-1)!! for even j
  double r = 1.0;
  for (int t = j - 1; t > 1; t -= 2) r *= t;
  return r;
}

Quadratic swap_axes(const Quadratic& q) {
  Quadratic r;
  r.A = {{{q.A[1][1], q.A[1][0]}, {q.A[0][1], q.A[0][0]}}};
  r.b = {q.b[1], q.b[0]};
  r.c = q.c;
  return r;
}

PolyGauss swapped(const PolyGauss& f) {
  return PolyGauss(f.poly().swapped(), swap_axes(f.quad()));
}

// Exponent shared by |f|^2-type products f * conj(g).
Quadratic conj_product(const Quadratic& f, const Quadratic& g) {
  Quadratic r;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) r.A[a][b] = f.A[a][b] + std::conj(g.A[a][b]);
    r.b[a] = f.b[a] + std::conj(g.b[a]);
  }
  r.c = f.c + std::conj(g.c);
  return r;
}

}  // namespace

cplx Quadratic::operator()(double x, double y) const {
  return -0.5 * (A[0][0] * x * x + 2.0 * A[0][1] * x * y + A[1][1] * y * y) + b[0] * x +
         b[1] * y + c;
}

double quadratic_distance(const Quadratic& a, const Quadratic& b) {
  double d = std::abs(a.c - b.c);
  for (int i = 0; i < 2; ++i) {
    d = std::max(d, std::abs(a.b[i] - b.b[i]));
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a.A[i][j] - b.A[i][j]));
  }
  return d;
}

PolyGauss::PolyGauss(Poly2 p, Quadratic q) : p_(std::move(p)), q_(q) {
  q_.A[1][0] = q_.A[0][1];
  double a00 = q_.A[0][0].real(), a01 = q_.A[0][1].real(), a11 = q_.A[1][1].real();
  if (!(a00 > kPdTol) || !(a00 * a11 - a01 * a01 > kPdTol))
    throw DomainError("degenerate Gaussian: real part of A is not positive definite");
}

PolyGauss PolyGauss::gaussian() { return PolyGauss(Poly2::constant(1.0), Quadratic{}); }

cplx PolyGauss::operator()(double x, double y) const {
  if (p_.is_zero()) return 0.0;
  return p_(x, y) * std::exp(q_(x, y));
}

Grid2 PolyGauss::sample(int N, double L) const {
  return sample_like(Grid2(N, L));
}

Grid2 PolyGauss::sample_like(const Grid2& layout) const {
  Grid2 g = layout.zeros_like();
  for (int i = 0; i < g.N(); ++i)
    for (int j = 0; j < g.N(); ++j)
      g(i, j) = (*this)(g.axis(0).coord(i), g.axis(1).coord(j));
  return g;
}

PolyGauss operator+(const PolyGauss& f, const PolyGauss& g) {
  double scale = 1.0 + std::abs(f.quad().A[0][0]) + std::abs(f.quad().A[1][1]);
  if (quadratic_distance(f.quad(), g.quad()) > 1e-13 * scale)
    throw DomainError("PolyGauss sum requires a common exponent");
  return f.with_poly(f.poly() + g.poly());
}

PolyGauss operator-(const PolyGauss& f, const PolyGauss& g) { return f + (-1.0) * g; }

PolyGauss operator*(cplx s, const PolyGauss& f) { return f.with_poly(f.poly() * s); }

PolyGauss multiply_coordinate(const PolyGauss& f, int axis) {
  return f.with_poly(f.poly() * Poly2::var(axis));
}

PolyGauss derivative(const PolyGauss& f, int axis) {
  const auto& q = f.quad();
  Poly2 dq = Poly2::constant(q.b[axis]) - q.A[axis][0] * Poly2::var(0) -
             q.A[axis][1] * Poly2::var(1);
  Poly2 d = f.poly().derivative(axis) + f.poly() * dq;
  return f.with_poly(d * cplx(0.0, -1.0));
}

PolyGauss apply_op_exact(const WeylOp& B, const PolyGauss& f) {
  Poly2 acc;
  for (const auto& [k, c] : B.terms()) {
    PolyGauss g = f;
    for (int t = 0; t < k[3]; ++t) g = derivative(g, 1);
    for (int t = 0; t < k[2]; ++t) g = derivative(g, 0);
    acc += c * (g.poly() * Poly2::monomial(k[0], k[1], 1.0));
  }
  return f.with_poly(acc);
}

PolyGauss change_variables(const PolyGauss& f, const std::array<std::array<double, 2>, 2>& T) {
  Poly2 v1 = T[0][0] * Poly2::var(0) + T[0][1] * Poly2::var(1);
  Poly2 v2 = T[1][0] * Poly2::var(0) + T[1][1] * Poly2::var(1);
  const auto& A = f.quad().A;
  Quadratic r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += T[k][i] * A[k][l] * T[l][j];
      r.A[i][j] = s;
    }
    r.b[i] = T[0][i] * f.quad().b[0] + T[1][i] * f.quad().b[1];
  }
  r.c = f.quad().c;
  return PolyGauss(f.poly().compose(v1, v2), r);
}

// Integrates out v2 = t against e^{-i sign s t}; the new second variable is s.
// With beta = b1 - a01 u - i sign s, completing the square gives
// sqrt(2 pi / a11) exp(beta^2 / (2 a11)) times Gaussian moments
// m_k(mu) = sum_{j even} C(k,j) mu^{k-j} a11^{-j/2} (j-1)!!, mu = beta / a11.
PolyGauss partial_fourier(const PolyGauss& f, int axis, int sign) {
  if (axis == 0) return swapped(partial_fourier(swapped(f), 1, sign));
  const auto& q = f.quad();
  const cplx a00 = q.A[0][0], a01 = q.A[0][1], a11 = q.A[1][1];
  const cplx b0 = q.b[0], b1 = q.b[1];
  const cplx is(0.0, double(sign));
  if (!(a11.real() > 0.0)) throw DomainError("degenerate Gaussian in transform direction");

  const cplx inva = 1.0 / a11;
  Poly2 mu = (Poly2::constant(b1) - a01 * Poly2::var(0) - is * Poly2::var(1)) * inva;

  const int K = std::max(0, f.poly().degree_in(1));
  std::vector<Poly2> mup{Poly2::constant(1.0)};
  for (int t = 1; t <= K; ++t) mup.push_back(mup.back() * mu);
  std::vector<Poly2> pk(K + 1);
  for (const auto& [k, c] : f.poly().terms()) pk[k[1]].add_term(k[0], 0, c);

  Poly2 out;
  for (int k = 0; k <= K; ++k) {
    if (pk[k].is_zero()) continue;
    Poly2 m;
    cplx ap = 1.0;
    for (int j = 0; j <= k; j += 2) {
      m += (binom(k, j) * double_factorial_odd(j) * ap) * mup[k - j];
      ap *= inva;
    }
    out += pk[k] * m;
  }
  cplx pref = std::sqrt(2.0 * M_PI * inva);
  if (sign < 0) pref /= 2.0 * M_PI;
  out *= pref;

  Quadratic r;
  r.A[0][0] = a00 - a01 * a01 * inva;
  r.A[0][1] = r.A[1][0] = -is * a01 * inva;
  r.A[1][1] = inva;
  r.b[0] = b0 - a01 * b1 * inva;
  r.b[1] = -is * b1 * inva;
  r.c = q.c + b1 * b1 * 0.5 * inva;
  return PolyGauss(out, r);
}

PolyGauss fourier_exact(const PolyGauss& f) {
  return partial_fourier(partial_fourier(f, 1, +1), 0, +1);
}

PolyGauss inverse_fourier_exact(const PolyGauss& f) {
  return partial_fourier(partial_fourier(f, 1, -1), 0, -1);
}

PolyGauss multiply_phase(const PolyGauss& f, const Poly2& P) {
  if (P.degree() > 2) throw DomainError("degree of P exceeds 2");
  const cplx mi(0.0, -1.0);
  Quadratic r = f.quad();
  r.A[0][0] -= 2.0 * mi * P.coeff(2, 0);
  r.A[0][1] -= mi * P.coeff(1, 1);
  r.A[1][0] = r.A[0][1];
  r.A[1][1] -= 2.0 * mi * P.coeff(0, 2);
  r.b[0] += mi * P.coeff(1, 0);
  r.b[1] += mi * P.coeff(0, 1);
  r.c += mi * P.coeff(0, 0);
  return PolyGauss(f.poly(), r);
}

cplx integrate(const PolyGauss& f) { return fourier_exact(f)(0.0, 0.0); }

cplx inner(const PolyGauss& f, const PolyGauss& g) {
  return integrate(PolyGauss(f.poly() * g.poly().conj(), conj_product(f.quad(), g.quad())));
}

double l2_norm(const PolyGauss& f) {
  if (f.poly().is_zero()) return 0.0;
  return std::sqrt(std::max(0.0, inner(f, f).real()));
}

double l2_distance(const PolyGauss& f, const PolyGauss& g) {
  double scale = 1.0 + std::abs(f.quad().A[0][0]) + std::abs(f.quad().A[1][1]);
  if (quadratic_distance(f.quad(), g.quad()) <= 1e-13 * scale)
    return l2_norm(f.with_poly(f.poly() - g.poly()));
  double s = inner(f, f).real() + inner(g, g).real() - 2.0 * inner(f, g).real();
  return std::sqrt(std::max(0.0, s));
}

}  // namespace wck
