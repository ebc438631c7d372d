#include "wck/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wck/error.hpp"

namespace wck {

namespace {

// m!/(m-j)!
double falling(int m, int j) {
  double r = 1.0;
  for (int t = 0; t < j; ++t) r *= double(m - t);
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * double(n - k + t) / double(t);
  return r;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int t = 0; t < n; ++t) r *= z;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Poly2

Poly2 Poly2::constant(cplx c) {
  Poly2 p;
  p.add_term(0, 0, c);
  return p;
}

Poly2 Poly2::var(int axis) {
  return axis == 0 ? monomial(1, 0, 1.0) : monomial(0, 1, 1.0);
}

Poly2 Poly2::monomial(int i, int j, cplx c) {
  Poly2 p;
  p.add_term(i, j, c);
  return p;
}

void Poly2::add_term(int i, int j, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, fresh] = terms_.try_emplace(Key{i, j}, c);
  if (!fresh) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx Poly2::coeff(int i, int j) const {
  auto it = terms_.find(Key{i, j});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

bool Poly2::is_real() const {
  for (const auto& [k, c] : terms_)
    if (c.imag() != 0.0) return false;
  return true;
}

int Poly2::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k[0] + k[1]);
  return d;
}

int Poly2::degree_in(int axis) const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k[axis]);
  return d;
}

cplx Poly2::operator()(cplx a, cplx b) const {
  cplx s = 0.0;
  for (const auto& [k, c] : terms_) s += c * ipow(a, k[0]) * ipow(b, k[1]);
  return s;
}

Poly2 Poly2::derivative(int axis) const {
  Poly2 r;
  for (const auto& [k, c] : terms_) {
    if (k[axis] == 0) continue;
    Key e = k;
    e[axis] -= 1;
    r.add_term(e[0], e[1], c * double(k[axis]));
  }
  return r;
}

Poly2 Poly2::conj() const {
  Poly2 r;
  for (const auto& [k, c] : terms_) r.add_term(k[0], k[1], std::conj(c));
  return r;
}

Poly2 Poly2::swapped() const {
  Poly2 r;
  for (const auto& [k, c] : terms_) r.add_term(k[1], k[0], c);
  return r;
}

Poly2 Poly2::compose(const Poly2& v1, const Poly2& v2) const {
  std::vector<Poly2> p1{constant(1.0)}, p2{constant(1.0)};
  for (int t = 1; t <= degree_in(0); ++t) p1.push_back(p1.back() * v1);
  for (int t = 1; t <= degree_in(1); ++t) p2.push_back(p2.back() * v2);
  Poly2 r;
  for (const auto& [k, c] : terms_) r += c * (p1[k[0]] * p2[k[1]]);
  return r;
}

Poly2& Poly2::operator+=(const Poly2& o) {
  for (const auto& [k, c] : o.terms_) add_term(k[0], k[1], c);
  return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
  for (const auto& [k, c] : o.terms_) add_term(k[0], k[1], -c);
  return *this;
}

Poly2& Poly2::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (it->second == cplx(0.0))
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  Poly2 r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_)
      r.add_term(ka[0] + kb[0], ka[1] + kb[1], ca * cb);
  return r;
}

Poly2 Poly2::pow(int n) const {
  Poly2 r = constant(1.0);
  for (int t = 0; t < n; ++t) r = r * *this;
  return r;
}

// ---------------------------------------------------------------- Poly4

void Poly4::add_term(const Key& k, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, fresh] = terms_.try_emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

int Poly4::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k[0] + k[1] + k[2] + k[3]);
  return d;
}

cplx Poly4::operator()(const std::array<double, 4>& p) const {
  cplx s = 0.0;
  for (const auto& [k, c] : terms_) {
    double m = 1.0;
    for (int a = 0; a < 4; ++a)
      for (int t = 0; t < k[a]; ++t) m *= p[a];
    s += c * m;
  }
  return s;
}

Poly4 Poly4::derivative(int axis) const {
  Poly4 r;
  for (const auto& [k, c] : terms_) {
    if (k[axis] == 0) continue;
    Key e = k;
    e[axis] -= 1;
    r.add_term(e, c * double(k[axis]));
  }
  return r;
}

// ---------------------------------------------------------------- WeylOp

WeylOp WeylOp::constant(cplx c) { return monomial({0, 0, 0, 0}, c); }

WeylOp WeylOp::monomial(const Key& k, cplx c) {
  WeylOp r;
  r.add_term(k, c);
  return r;
}

void WeylOp::add_term(const Key& k, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, fresh] = terms_.try_emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx WeylOp::coeff(const Key& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int WeylOp::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k[0] + k[1] + k[2] + k[3]);
  return d;
}

WeylOp& WeylOp::operator+=(const WeylOp& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

WeylOp& WeylOp::operator-=(const WeylOp& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

WeylOp& WeylOp::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (it->second == cplx(0.0))
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

// D^c x^m = sum_j C(c,j) m!/(m-j)! (-i)^j x^(m-j) D^(c-j), independently in
// each variable; D1 commutes with M2 and D2 with M1.
WeylOp operator*(const WeylOp& a, const WeylOp& b) {
  WeylOp r;
  const cplx mi(0.0, -1.0);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      const int c1 = ka[2], m1 = kb[0];
      const int c2 = ka[3], m2 = kb[1];
      for (int j = 0; j <= std::min(c1, m1); ++j) {
        cplx f1 = binom(c1, j) * falling(m1, j) * ipow(mi, j);
        for (int l = 0; l <= std::min(c2, m2); ++l) {
          cplx f2 = binom(c2, l) * falling(m2, l) * ipow(mi, l);
          WeylOp::Key k{ka[0] + m1 - j, ka[1] + m2 - l, c1 - j + kb[2],
                        c2 - l + kb[3]};
          r.add_term(k, ca * cb * f1 * f2);
        }
      }
    }
  }
  return r;
}

WeylOp WeylOp::pow(int n) const {
  WeylOp r = identity();
  for (int t = 0; t < n; ++t) r = r * *this;
  return r;
}

WeylOp normal_mul(const WeylOp& a, const WeylOp& b) { return a * b; }

double max_coeff_diff(const WeylOp& a, const WeylOp& b) {
  WeylOp d = a - b;
  double m = 0.0;
  for (const auto& [k, c] : d.terms()) m = std::max(m, std::abs(c));
  return m;
}

// ---------------------------------------------------------------- kernels

namespace {

double monomial_scale(const Poly2& q, double a, double b) {
  double s = 0.0;
  for (const auto& [k, c] : q.terms())
    s += std::abs(c) * std::pow(std::max(1.0, std::abs(a)), k[0]) *
         std::pow(std::max(1.0, std::abs(b)), k[1]);
  return s;
}

// Levenberg-Marquardt on (Re q, Im q) = 0 from a starting point.
ZeroProbe refine(const Poly2& q, const Poly2& qa, const Poly2& qb, double a,
                 double b) {
  double f = std::abs(q(a, b));
  double mu = 1e-3;
  for (int it = 0; it < 200 && f > 0.0; ++it) {
    cplx v = q(a, b), da = qa(a, b), db = qb(a, b);
    double j00 = da.real(), j01 = db.real(), j10 = da.imag(), j11 = db.imag();
    double g0 = j00 * v.real() + j10 * v.imag();
    double g1 = j01 * v.real() + j11 * v.imag();
    double h00 = j00 * j00 + j10 * j10, h01 = j00 * j01 + j10 * j11;
    double h11 = j01 * j01 + j11 * j11;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      double damp = mu * std::max(1.0, std::max(h00, h11));
      double a00 = h00 + damp, a11 = h11 + damp;
      double det = a00 * a11 - h01 * h01;
      if (det == 0.0) break;
      double sa = -(a11 * g0 - h01 * g1) / det;
      double sb = -(-h01 * g0 + a00 * g1) / det;
      double fn = std::abs(q(a + sa, b + sb));
      if (fn < f) {
        a += sa;
        b += sb;
        f = fn;
        mu = std::max(mu * 0.3, 1e-15);
        improved = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  return {f, a, b};
}

}  // namespace

ZeroProbe probe_zero(const Poly2& q) {
  if (q.is_zero()) return {0.0, 0.0, 0.0};
  Poly2 qa = q.derivative(0), qb = q.derivative(1);
  struct Cand {
    double rel;
    double a, b;
  };
  std::vector<Cand> cands;
  const int n = 61;
  for (double R : {1.0, 4.0, 16.0, 64.0, 256.0, 1024.0}) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double a = -R + 2.0 * R * i / (n - 1);
        double b = -R + 2.0 * R * j / (n - 1);
        double v = std::abs(q(a, b));
        cands.push_back({v / monomial_scale(q, a, b), a, b});
      }
    }
  }
  std::partial_sort(cands.begin(), cands.begin() + 12, cands.end(),
                    [](const Cand& x, const Cand& y) { return x.rel < y.rel; });
  ZeroProbe best{std::abs(q(cands[0].a, cands[0].b)), cands[0].a, cands[0].b};
  double best_rel = cands[0].rel;
  for (int c = 0; c < 12; ++c) {
    ZeroProbe z = refine(q, qa, qb, cands[c].a, cands[c].b);
    double rel = z.min_abs / monomial_scale(q, z.xi, z.eta);
    if (rel < best_rel) {
      best_rel = rel;
      best = z;
    }
  }
  return best;
}

KernelSpec make_kernel(const Poly2& P, const Poly2& q) {
  if (!P.is_real()) throw KernelError("phase P must have real coefficients");
  if (q.is_zero()) throw KernelError("factor q is identically zero");
  if (q.degree() > 0) {
    ZeroProbe z = probe_zero(q);
    if (z.min_abs <= 1e-12 * monomial_scale(q, z.xi, z.eta))
      throw KernelError("factor q vanishes near (xi, eta) = (" +
                        std::to_string(z.xi) + ", " + std::to_string(z.eta) +
                        ")");
  }
  return KernelSpec{P, q};
}

// ---------------------------------------------------------------- transforms

WeylOp eval_at(const Poly2& p, const WeylOp& X, const WeylOp& Y) {
  std::vector<WeylOp> xp{WeylOp::identity()}, yp{WeylOp::identity()};
  for (int t = 1; t <= p.degree_in(0); ++t) xp.push_back(xp.back() * X);
  for (int t = 1; t <= p.degree_in(1); ++t) yp.push_back(yp.back() * Y);
  WeylOp r;
  for (const auto& [k, c] : p.terms()) r += c * (xp[k[0]] * yp[k[1]]);
  return r;
}

WeylOp substitute_ordered(const WeylOp& B, const WeylOp& x1, const WeylOp& x2,
                          const WeylOp& y1, const WeylOp& y2) {
  std::array<const WeylOp*, 4> g{&x1, &x2, &y1, &y2};
  std::array<std::vector<WeylOp>, 4> pw;
  for (int a = 0; a < 4; ++a) pw[a].push_back(WeylOp::identity());
  for (const auto& [k, c] : B.terms())
    for (int a = 0; a < 4; ++a)
      while (int(pw[a].size()) <= k[a]) pw[a].push_back(pw[a].back() * *g[a]);
  WeylOp r;
  for (const auto& [k, c] : B.terms())
    r += c * (pw[0][k[0]] * pw[1][k[1]] * pw[2][k[2]] * pw[3][k[3]]);
  return r;
}

WeylOp wig_pushforward(const WeylOp& B) {
  const WeylOp M1 = WeylOp::M1(), M2 = WeylOp::M2();
  const WeylOp D1 = WeylOp::D1(), D2 = WeylOp::D2();
  return substitute_ordered(B, 0.5 * (M1 + M2), 0.5 * (D1 - D2), D1 + D2,
                            M2 - M1);
}

WeylOp bar_transform(const WeylOp& B, const KernelSpec& ker) {
  const WeylOp M1 = WeylOp::M1(), M2 = WeylOp::M2();
  const WeylOp D1 = WeylOp::D1(), D2 = WeylOp::D2();
  const WeylOp X = D1 + D2, Y = M2 - M1;
  return substitute_ordered(B, 0.5 * (M1 + M2) + eval_at(ker.P1(), X, Y),
                            0.5 * (D1 - D2) + eval_at(ker.P2(), X, Y), X, Y);
}

WeylOp tilde_transform(const WeylOp& B, const KernelSpec& ker) {
  const WeylOp M1 = WeylOp::M1(), M2 = WeylOp::M2();
  const WeylOp D1 = WeylOp::D1(), D2 = WeylOp::D2();
  const WeylOp p1 = eval_at(ker.P1(), D1, D2);
  const WeylOp p2 = eval_at(ker.P2(), D1, D2);
  return substitute_ordered(B, M1 - 0.5 * D2 - p1, M1 + 0.5 * D2 - p1,
                            0.5 * D1 + M2 - p2, 0.5 * D1 - M2 + p2);
}

WeylOp a_of_q(const Poly2& q) {
  return eval_at(q, WeylOp::D1() + WeylOp::D2(), WeylOp::M2() - WeylOp::M1());
}

Poly4 symbol_of(const WeylOp& B) {
  Poly4 r;
  for (const auto& [k, c] : B.terms()) r.add_term(k, c);
  return r;
}

}  // namespace wck
