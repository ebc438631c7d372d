#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wck/weyl.hpp"

namespace wck {

enum class GridKind { Spatial, WignerOutput };

struct Axis {
  double start = 0.0;
  double step = 1.0;
  double coord(int i) const { return start + i * step; }
};

// N x N complex samples, row index = first coordinate. A spatial grid covers
// [-L, L) on both axes with spacing 2L/N.
class Grid2 {
 public:
  Grid2(int N, double L);

  static Grid2 sample(int N, double L, const std::function<cplx(double, double)>& f);

  int N() const { return N_; }
  double L() const { return L_; }
  GridKind kind() const { return kind_; }
  const Axis& axis(int a) const { return axes_[a]; }
  void set_layout(GridKind kind, const Axis& a0, const Axis& a1);

  cplx& operator()(int i, int j) { return v_[std::size_t(i) * N_ + j]; }
  const cplx& operator()(int i, int j) const { return v_[std::size_t(i) * N_ + j]; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  // Zero grid with the same layout.
  Grid2 zeros_like() const;
  bool same_layout(const Grid2& o) const;
  // Throws DomainError on NaN/Inf.
  void check_finite() const;

 private:
  int N_;
  double L_;
  GridKind kind_ = GridKind::Spatial;
  Axis axes_[2];
  std::vector<cplx> v_;
};

Grid2 operator+(const Grid2& a, const Grid2& b);
Grid2 operator-(const Grid2& a, const Grid2& b);
Grid2 operator*(cplx s, const Grid2& a);

// Discrete L2 norm including the cell area.
double l2_norm(const Grid2& g);
// ||a - b|| / ||b||, with 0/0 reported as 0.
double rel_l2_diff(const Grid2& a, const Grid2& b);
// max |a - b| over samples with |x|, |y| <= box.
double sup_diff(const Grid2& a, const Grid2& b, double box);
double sup_abs(const Grid2& g);

// Unnormalized forward DFT (kernel e^{-2 pi i k n / N}) in standard index
// order, and its inverse including the 1/N^2 factor. Layout is preserved.
Grid2 spectrum(const Grid2& g);
Grid2 from_spectrum(const Grid2& s);
// Angular frequency of DFT index a on an axis with the given step.
double dft_frequency(int a, int N, double step);

// Binary: "WGK1", u32 N, f64 L, N^2 (f64 re, f64 im), little-endian.
void save_grid(const std::string& path, const Grid2& g);
Grid2 load_grid(const std::string& path);
void write_csv(std::ostream& os, const Grid2& g);

}  // namespace wck
