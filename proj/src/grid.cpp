#include "wck/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "fft.hpp"
#include "wck/error.hpp"

namespace wck {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T)))
    throw IoError("grid file truncated");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

Grid2::Grid2(int N, double L) : N_(N), L_(L) {
  if (N < 8 || !power_of_two(N))
    throw DomainError("grid size N must be a power of two >= 8");
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("grid half-width L must be positive");
  const double d = 2.0 * L / N;
  axes_[0] = axes_[1] = Axis{-L, d};
  v_.assign(std::size_t(N) * N, cplx(0.0));
}

Grid2 Grid2::sample(int N, double L, const std::function<cplx(double, double)>& f) {
  Grid2 g(N, L);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g(i, j) = f(g.axes_[0].coord(i), g.axes_[1].coord(j));
  g.check_finite();
  return g;
}

void Grid2::set_layout(GridKind kind, const Axis& a0, const Axis& a1) {
  kind_ = kind;
  axes_[0] = a0;
  axes_[1] = a1;
}

Grid2 Grid2::zeros_like() const {
  Grid2 g(N_, L_);
  g.set_layout(kind_, axes_[0], axes_[1]);
  return g;
}

bool Grid2::same_layout(const Grid2& o) const {
  return N_ == o.N_ && L_ == o.L_ && kind_ == o.kind_ &&
         axes_[0].start == o.axes_[0].start && axes_[0].step == o.axes_[0].step &&
         axes_[1].start == o.axes_[1].start && axes_[1].step == o.axes_[1].step;
}

void Grid2::check_finite() const {
  for (const cplx& z : v_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw DomainError("grid contains non-finite values");
}

Grid2 operator+(const Grid2& a, const Grid2& b) {
  if (!a.same_layout(b)) throw DomainError("grid layout mismatch");
  Grid2 r = a;
  for (std::size_t i = 0; i < r.values().size(); ++i) r.values()[i] += b.values()[i];
  return r;
}

Grid2 operator-(const Grid2& a, const Grid2& b) {
  if (!a.same_layout(b)) throw DomainError("grid layout mismatch");
  Grid2 r = a;
  for (std::size_t i = 0; i < r.values().size(); ++i) r.values()[i] -= b.values()[i];
  return r;
}

Grid2 operator*(cplx s, const Grid2& a) {
  Grid2 r = a;
  for (cplx& z : r.values()) z *= s;
  return r;
}

double l2_norm(const Grid2& g) {
  double s = 0.0;
  for (const cplx& z : g.values()) s += std::norm(z);
  return std::sqrt(s * std::abs(g.axis(0).step * g.axis(1).step));
}

double rel_l2_diff(const Grid2& a, const Grid2& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    num += std::norm(a.values()[i] - b.values()[i]);
    den += std::norm(b.values()[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

double sup_diff(const Grid2& a, const Grid2& b, double box) {
  double m = 0.0;
  for (int i = 0; i < a.N(); ++i) {
    if (std::abs(a.axis(0).coord(i)) > box) continue;
    for (int j = 0; j < a.N(); ++j) {
      if (std::abs(a.axis(1).coord(j)) > box) continue;
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
    }
  }
  return m;
}

double sup_abs(const Grid2& g) {
  double m = 0.0;
  for (const cplx& z : g.values()) m = std::max(m, std::abs(z));
  return m;
}

Grid2 spectrum(const Grid2& g) {
  Grid2 s = g;
  fft::transform2(s.values().data(), s.N(), -1);
  return s;
}

Grid2 from_spectrum(const Grid2& s) {
  Grid2 g = s;
  fft::transform2(g.values().data(), g.N(), +1);
  const double inv = 1.0 / (double(g.N()) * g.N());
  for (cplx& z : g.values()) z *= inv;
  return g;
}

double dft_frequency(int a, int N, double step) {
  int w = a < N / 2 ? a : a - N;
  return 2.0 * M_PI * w / (N * step);
}

void save_grid(const std::string& path, const Grid2& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write("WGK1", 4);
  put_le<std::uint32_t>(os, std::uint32_t(g.N()));
  put_le<double>(os, g.L());
  for (const cplx& z : g.values()) {
    put_le<double>(os, z.real());
    put_le<double>(os, z.imag());
  }
  if (!os) throw IoError("write failed for " + path);
}

Grid2 load_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "WGK1", 4) != 0)
    throw IoError("bad grid file magic in " + path);
  auto N = get_le<std::uint32_t>(is);
  double L = get_le<double>(is);
  if (N > 4096) throw IoError("grid file N too large");
  Grid2 g(int(N), L);
  for (cplx& z : g.values()) {
    double re = get_le<double>(is);
    double im = get_le<double>(is);
    z = cplx(re, im);
  }
  g.check_finite();
  return g;
}

void write_csv(std::ostream& os, const Grid2& g) {
  os << "x,y,re,im\n" << std::setprecision(17);
  for (int i = 0; i < g.N(); ++i)
    for (int j = 0; j < g.N(); ++j)
      os << g.axis(0).coord(i) << ',' << g.axis(1).coord(j) << ',' << g(i, j).real()
         << ',' << g(i, j).imag() << '\n';
}

}  // namespace wck
