#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wck/grid.hpp"
#include "wck/polygauss.hpp"
#include "wck/weyl.hpp"

namespace wck {

enum class Backend { Grid, Exact };

struct IdentityReport {
  std::string name;
  std::string backend;
  int N = 0;
  double L = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  std::string op;
  std::string P;
  std::string q;
  std::string w;
};

nlohmann::json to_json(const IdentityReport& r);

// name in {wig-lemma21, wig-prop22, bar-thm34, tilde-thm35, sigma1-thm310}.
// For the wig-* names B plays the role of the pushed-forward operator and the
// kernel is ignored. For q != 1 the bar and tilde identities are checked in
// the form that carries the factor A = q(D1+D2, M2-M1):
//   bar:   B Q1[w]  = Q[(Bbar A) w]
//   tilde: Q1[B w]  = q(D1, D2) Btilde Q[w]
IdentityReport verify_identity(const std::string& name, const WeylOp& B, const KernelSpec& ker,
                               const Grid2& w);
IdentityReport verify_identity(const std::string& name, const WeylOp& B, const KernelSpec& ker,
                               const PolyGauss& w);

struct NamedOp {
  std::string label;
  WeylOp op;
};
struct NamedPoly {
  std::string label;
  Poly2 poly;
};
struct NamedFunction {
  std::string label;
  PolyGauss f;
};

std::vector<NamedOp> standard_operators();
std::vector<NamedPoly> standard_phases();
std::vector<NamedPoly> standard_factors();
std::vector<NamedFunction> standard_functions();
WeylOp twisted_laplacian();

struct SuiteConfig {
  std::string suite = "all";  // wigner | cohen | sigma1 | all
  int N = 256;
  double L = 12.0;
  double tol = 1e-6;
  double grid_warn = 1e-3;
  bool use_grid = true;
  bool use_exact = true;
  // Empty means the standard lists.
  std::vector<NamedPoly> phases;
  std::vector<NamedPoly> factors;
  std::vector<NamedOp> operators;
  unsigned long long seed = 0;
};

struct SuiteResult {
  std::vector<IdentityReport> reports;
  nlohmann::json json;
  bool breach = false;
};

// Exact residuals gate the result when the exact backend runs; grid residuals
// gate only when the grid backend runs alone.
SuiteResult run_suite(const SuiteConfig& cfg);

}  // namespace wck
