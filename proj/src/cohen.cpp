#include "wck/cohen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "fft.hpp"
#include "wck/error.hpp"

namespace wck {

namespace {

// pw[k][i] = t(i)^k for k <= deg.
std::vector<std::vector<double>> power_table(int deg, int N, const std::function<double(int)>& t) {
  std::vector<std::vector<double>> pw(deg + 1, std::vector<double>(N, 1.0));
  for (int k = 1; k <= deg; ++k)
    for (int i = 0; i < N; ++i) pw[k][i] = pw[k - 1][i] * t(i);
  return pw;
}

// Centered DFT along axis 1 of every row: input/output index c <-> c - N/2.
void centered_rows(std::vector<cplx>& v, int N, int sign) {
  const int h = N / 2;
  std::vector<cplx> row(N);
  for (int i = 0; i < N; ++i) {
    cplx* r = v.data() + std::size_t(i) * N;
    for (int c = 0; c < N; ++c) row[(c + h) % N] = r[c];
    std::copy(row.begin(), row.end(), r);
  }
  fft::transform_axis(v.data(), N, 1, sign);
  for (int i = 0; i < N; ++i) {
    cplx* r = v.data() + std::size_t(i) * N;
    for (int c = 0; c < N; ++c) row[c] = r[(c + h) % N];
    std::copy(row.begin(), row.end(), r);
  }
}

// Band-limited shift g(i + 1/2, k + 1/2) of a periodic N x N array.
std::vector<cplx> half_shift(std::vector<cplx> g, int N) {
  fft::transform2(g.data(), N, -1);
  std::vector<cplx> ph(N);
  for (int a = 0; a < N; ++a) {
    if (a == N / 2) {
      ph[a] = 0.0;
      continue;
    }
    int w = a < N / 2 ? a : a - N;
    ph[a] = std::polar(1.0, M_PI * w / N);
  }
  const double inv = 1.0 / (double(N) * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) g[std::size_t(a) * N + b] *= ph[a] * ph[b] * inv;
  fft::transform2(g.data(), N, +1);
  return g;
}

}  // namespace

Grid2 wig(const Grid2& w) {
  if (w.kind() != GridKind::Spatial) throw DomainError("wig expects a spatial grid");
  const int N = w.N(), h = N / 2;
  const double dx = w.axis(0).step;
  Grid2 out = w.zeros_like();
  auto& v = out.values();
  for (int i = 0; i < N; ++i) {
    for (int c = 0; c < N; ++c) {
      int k = c - h, p = i + k, q = i - k;
      if (p >= 0 && p < N && q >= 0 && q < N) v[std::size_t(i) * N + c] = w(p, q);
    }
  }
  centered_rows(v, N, -1);
  for (cplx& z : v) z *= 2.0 * dx;
  const double dy = M_PI / (2.0 * w.L());
  out.set_layout(GridKind::WignerOutput, w.axis(0), Axis{-h * dy, dy});
  return out;
}

// Inverse DFT in y recovers w at index pairs (i+k, i-k), i.e. all points with
// p + q even. The remaining points sit at half-integer (i, k) and are filled by
// a band-limited half-sample shift of g(i, k) = w(i+k, i-k).
Grid2 wig_inverse(const Grid2& v) {
  if (v.kind() != GridKind::WignerOutput) throw DomainError("wig_inverse expects wig output metadata");
  const int N = v.N(), h = N / 2;
  const double dx = 2.0 * v.L() / N;
  if (std::abs(v.axis(1).step - M_PI / (2.0 * v.L())) > 1e-15 * v.axis(1).step ||
      std::abs(v.axis(0).step - dx) > 1e-15 * dx)
    throw DomainError("wig output metadata mismatch");
  std::vector<cplx> g = v.values();
  centered_rows(g, N, +1);
  const double scale = 1.0 / (2.0 * dx * N);
  for (cplx& z : g) z *= scale;

  Grid2 w(N, v.L());
  for (int i = 0; i < N; ++i) {
    for (int c = 0; c < N; ++c) {
      int k = c - h, p = i + k, q = i - k;
      if (p >= 0 && p < N && q >= 0 && q < N) w(p, q) = g[std::size_t(i) * N + c];
    }
  }
  std::vector<cplx> s = half_shift(g, N);
  // (p, q) = (i + k + 1, i - k) with the shifted sample at (i + 1/2, k + 1/2)
  for (int i = 0; i < N; ++i) {
    for (int c = 0; c < N; ++c) {
      int k = c - h, p = i + k + 1, q = i - k;
      if (p >= 0 && p < N && q >= 0 && q < N) w(p, q) = s[std::size_t(i) * N + c];
    }
  }
  return w;
}

namespace {

struct SigmaEntry {
  std::map<Poly2::Key, cplx> P, q;
  int N;
  double s0, s1;
  Grid2 values;
};

// Suites apply the same kernel on the same layout many times in a row.
std::vector<SigmaEntry>& sigma_cache() {
  thread_local std::vector<SigmaEntry> cache;
  return cache;
}

Grid2 sigma_hat_uncached(const KernelSpec& ker, const Grid2& layout);

}  // namespace

Grid2 sigma_hat_on_grid(const KernelSpec& ker, const Grid2& layout) {
  const int N = layout.N();
  const double s0 = layout.axis(0).step, s1 = layout.axis(1).step;
  auto& cache = sigma_cache();
  for (const SigmaEntry& e : cache)
    if (e.N == N && e.s0 == s0 && e.s1 == s1 && e.P == ker.P.terms() && e.q == ker.q.terms()) {
      Grid2 s = layout.zeros_like();
      s.values() = e.values.values();
      return s;
    }
  Grid2 s = sigma_hat_uncached(ker, layout);
  if (cache.size() >= 2) cache.erase(cache.begin());
  cache.push_back({ker.P.terms(), ker.q.terms(), N, s0, s1, s});
  return s;
}

namespace {

Grid2 sigma_hat_uncached(const KernelSpec& ker, const Grid2& layout) {
  const int N = layout.N();
  const int d0 = std::max(ker.P.degree_in(0), ker.q.degree_in(0));
  const int d1 = std::max(ker.P.degree_in(1), ker.q.degree_in(1));
  const auto xp = power_table(d0, N, [&](int a) { return dft_frequency(a, N, layout.axis(0).step); });
  const auto yp = power_table(d1, N, [&](int b) { return dft_frequency(b, N, layout.axis(1).step); });
  std::vector<double> P(N);
  std::vector<cplx> q(N);
  Grid2 s = layout.zeros_like();
  for (int a = 0; a < N; ++a) {
    std::fill(P.begin(), P.end(), 0.0);
    std::fill(q.begin(), q.end(), cplx(0.0));
    for (const auto& [k, c] : ker.P.terms()) {
      const double ca = c.real() * xp[k[0]][a];
      for (int b = 0; b < N; ++b) P[b] += ca * yp[k[1]][b];
    }
    for (const auto& [k, c] : ker.q.terms()) {
      const cplx ca = c * xp[k[0]][a];
      for (int b = 0; b < N; ++b) q[b] += ca * yp[k[1]][b];
    }
    cplx* r = &s(a, 0);
    for (int b = 0; b < N; ++b) r[b] = q[b] * std::polar(1.0, -P[b]);
  }
  return s;
}

}  // namespace

namespace {
bool trivial(const KernelSpec& ker) {
  return ker.P.is_zero() && ker.q == Poly2::constant(1.0);
}
}  // namespace

Grid2 cohen_q(const Grid2& w, const KernelSpec& ker) {
  Grid2 W = wig(w);
  if (trivial(ker)) return W;
  Grid2 F = spectrum(W);
  Grid2 S = sigma_hat_on_grid(ker, W);
  for (std::size_t i = 0; i < F.values().size(); ++i) F.values()[i] *= S.values()[i];
  return from_spectrum(F);
}

Grid2 cohen_q_inverse(const Grid2& v, const KernelSpec& ker) {
  if (trivial(ker)) return wig_inverse(v);
  Grid2 F = spectrum(v);
  Grid2 S = sigma_hat_on_grid(ker, v);
  for (std::size_t i = 0; i < F.values().size(); ++i) {
    if (std::abs(S.values()[i]) < 1e-13) throw KernelError("kernel vanishes numerically");
    F.values()[i] /= S.values()[i];
  }
  return wig_inverse(from_spectrum(F));
}

Grid2 apply_op(const WeylOp& B, const Grid2& w) {
  const int N = w.N();
  std::map<std::pair<int, int>, std::vector<std::pair<std::array<int, 2>, cplx>>> groups;
  int deg[4] = {0, 0, 0, 0};
  for (const auto& [k, c] : B.terms()) {
    groups[{k[2], k[3]}].push_back({{k[0], k[1]}, c});
    for (int v = 0; v < 4; ++v) deg[v] = std::max(deg[v], k[v]);
  }
  const auto xp = power_table(deg[0], N, [&](int i) { return w.axis(0).coord(i); });
  const auto yp = power_table(deg[1], N, [&](int j) { return w.axis(1).coord(j); });
  const auto fp = power_table(deg[2], N, [&](int a) { return dft_frequency(a, N, w.axis(0).step); });
  const auto gp = power_table(deg[3], N, [&](int b) { return dft_frequency(b, N, w.axis(1).step); });

  Grid2 out = w.zeros_like();
  Grid2 F(8, 1.0);
  bool have_spectrum = false;
  std::vector<cplx> row(N);
  for (const auto& [hk, terms] : groups) {
    Grid2 d = w;
    if (hk.first > 0 || hk.second > 0) {
      if (!have_spectrum) {
        F = spectrum(w);
        have_spectrum = true;
      }
      d = F;
      const std::vector<double>& eta = gp[hk.second];
      for (int a = 0; a < N; ++a) {
        const double xi = fp[hk.first][a];
        cplx* r = &d(a, 0);
        for (int b = 0; b < N; ++b) r[b] *= xi * eta[b];
      }
      d = from_spectrum(d);
    }
    for (int i = 0; i < N; ++i) {
      std::fill(row.begin(), row.end(), cplx(0.0));
      for (const auto& [mn, c] : terms) {
        const cplx cx = c * xp[mn[0]][i];
        const std::vector<double>& y = yp[mn[1]];
        for (int j = 0; j < N; ++j) row[j] += cx * y[j];
      }
      const cplx* src = &d(i, 0);
      cplx* dst = &out(i, 0);
      for (int j = 0; j < N; ++j) dst[j] += row[j] * src[j];
    }
  }
  return out;
}

PolyGauss wig_exact(const PolyGauss& f) {
  PolyGauss g = change_variables(f, {{{1.0, 0.5}, {1.0, -0.5}}});
  return partial_fourier(g, 1, +1);
}

PolyGauss cohen_q_exact(const PolyGauss& f, const KernelSpec& ker) {
  if (ker.P.degree() > 2) throw DomainError("degree of P exceeds 2");
  PolyGauss F = fourier_exact(wig_exact(f));
  F = F.with_poly(F.poly() * ker.q);
  F = multiply_phase(F, ker.P);
  return inverse_fourier_exact(F);
}

}  // namespace wck
