#pragma once

#include "wck/grid.hpp"
#include "wck/polygauss.hpp"
#include "wck/weyl.hpp"

namespace wck {

// Wig[w](x, y) = int e^{-i t y} w(x + t/2, x - t/2) dt on the grid: t-step 2*dx,
// output y_j = pi j / (2L), j = -N/2 .. N/2-1.
Grid2 wig(const Grid2& w);
Grid2 wig_inverse(const Grid2& v);

// q * exp(-iP) on the DFT frequency lattice of the grid (standard order).
Grid2 sigma_hat_on_grid(const KernelSpec& ker, const Grid2& layout);

Grid2 cohen_q(const Grid2& w, const KernelSpec& ker);
Grid2 cohen_q_inverse(const Grid2& v, const KernelSpec& ker);

Grid2 apply_op(const WeylOp& B, const Grid2& w);

PolyGauss wig_exact(const PolyGauss& f);
PolyGauss cohen_q_exact(const PolyGauss& f, const KernelSpec& ker);

}  // namespace wck
