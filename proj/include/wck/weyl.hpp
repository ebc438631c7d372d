#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>

namespace wck {

using cplx = std::complex<double>;

// Commutative polynomial in two indeterminates. Used for kernel data P, q
// (indeterminates xi, eta) and for the polynomial part of PolyGauss.
class Poly2 {
 public:
  using Key = std::array<int, 2>;

  Poly2() = default;
  static Poly2 constant(cplx c);
  static Poly2 var(int axis);
  static Poly2 monomial(int i, int j, cplx c);

  const std::map<Key, cplx>& terms() const { return terms_; }
  void add_term(int i, int j, cplx c);
  cplx coeff(int i, int j) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_real() const;
  int degree() const;
  int degree_in(int axis) const;

  cplx operator()(cplx a, cplx b) const;
  Poly2 derivative(int axis) const;
  Poly2 conj() const;
  Poly2 swapped() const;
  // Replace (v1, v2) by the given polynomials.
  Poly2 compose(const Poly2& v1, const Poly2& v2) const;

  Poly2& operator+=(const Poly2& o);
  Poly2& operator-=(const Poly2& o);
  Poly2& operator*=(cplx s);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(Poly2 a, cplx s) { return a *= s; }
  friend Poly2 operator*(cplx s, Poly2 a) { return a *= s; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b);
  friend Poly2 operator-(const Poly2& a) { return a * cplx(-1.0); }
  bool operator==(const Poly2& o) const { return terms_ == o.terms_; }

  Poly2 pow(int n) const;

 private:
  std::map<Key, cplx> terms_;
};

// Commutative polynomial in (x, y, xi, eta): the symbol of a WeylOp.
class Poly4 {
 public:
  using Key = std::array<int, 4>;

  const std::map<Key, cplx>& terms() const { return terms_; }
  void add_term(const Key& k, cplx c);
  int degree() const;
  cplx operator()(const std::array<double, 4>& p) const;
  Poly4 derivative(int axis) const;
  bool operator==(const Poly4& o) const { return terms_ == o.terms_; }

 private:
  std::map<Key, cplx> terms_;
};

// Normal-ordered element of the Weyl algebra: sum of c * M1^m M2^n D1^h D2^k.
class WeylOp {
 public:
  using Key = std::array<int, 4>;

  WeylOp() = default;
  static WeylOp identity() { return constant(1.0); }
  static WeylOp constant(cplx c);
  static WeylOp monomial(const Key& k, cplx c = 1.0);
  static WeylOp M1() { return monomial({1, 0, 0, 0}); }
  static WeylOp M2() { return monomial({0, 1, 0, 0}); }
  static WeylOp D1() { return monomial({0, 0, 1, 0}); }
  static WeylOp D2() { return monomial({0, 0, 0, 1}); }

  const std::map<Key, cplx>& terms() const { return terms_; }
  void add_term(const Key& k, cplx c);
  cplx coeff(const Key& k) const;
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  WeylOp& operator+=(const WeylOp& o);
  WeylOp& operator-=(const WeylOp& o);
  WeylOp& operator*=(cplx s);
  friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
  friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
  friend WeylOp operator*(WeylOp a, cplx s) { return a *= s; }
  friend WeylOp operator*(cplx s, WeylOp a) { return a *= s; }
  friend WeylOp operator-(const WeylOp& a) { return a * cplx(-1.0); }
  friend WeylOp operator*(const WeylOp& a, const WeylOp& b);
  bool operator==(const WeylOp& o) const { return terms_ == o.terms_; }

  WeylOp pow(int n) const;

 private:
  std::map<Key, cplx> terms_;
};

WeylOp normal_mul(const WeylOp& a, const WeylOp& b);

// Largest coefficient difference; 0 means exact equality.
double max_coeff_diff(const WeylOp& a, const WeylOp& b);

struct KernelSpec {
  Poly2 P;
  Poly2 q = Poly2::constant(1.0);

  Poly2 P1() const { return P.derivative(0); }
  Poly2 P2() const { return P.derivative(1); }
};

struct ZeroProbe {
  double min_abs;
  double xi;
  double eta;
};

// Searches for the smallest |q| on an expanding box with local refinement.
ZeroProbe probe_zero(const Poly2& q);

// Throws KernelError if P is not real or q has a zero on R^2.
KernelSpec make_kernel(const Poly2& P, const Poly2& q);

// Evaluates a commutative polynomial at a pair of commuting operators.
WeylOp eval_at(const Poly2& p, const WeylOp& X, const WeylOp& Y);

WeylOp substitute_ordered(const WeylOp& B, const WeylOp& x1, const WeylOp& x2,
                          const WeylOp& y1, const WeylOp& y2);
WeylOp wig_pushforward(const WeylOp& B);
WeylOp bar_transform(const WeylOp& B, const KernelSpec& ker);
WeylOp tilde_transform(const WeylOp& B, const KernelSpec& ker);
WeylOp a_of_q(const Poly2& q);
Poly4 symbol_of(const WeylOp& B);

}  // namespace wck
