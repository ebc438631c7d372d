#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wck/grid.hpp"
#include "wck/weyl.hpp"

namespace wck {

// Lower bound |a(z)| >= c <z>^m' probed on spheres |z| = r in R^4, with
// <z> = (1 + |z|^2)^{1/2} and z = (x, y, xi, eta).
struct HypoParams {
  double m_prime = 0.0;
  double rho = 1.0;
  double B = 1.0;
  std::vector<double> radii{1, 2, 4, 8, 16, 32};
  int random_directions = 2000;  // on top of the fixed lattice directions
  int derivative_order = 0;      // 0 disables the derivative-ratio check
  std::uint64_t seed = 0;
};

inline constexpr double kWitnessThreshold = 1e-12;

struct ShellResult {
  double radius = 0.0;
  double c = 0.0;  // min over the shell of |a| / <z>^m'
  std::array<double, 4> argmin{};
  double abs_a = 0.0;
  bool witness = false;
  // max of |d^g a| <z>^{rho |g|} / |a| over samples, 1 <= |g| <= order.
  std::optional<double> derivative_C;
  int derivative_skipped = 0;  // samples with |a| too small for the ratio
};

struct HypoVerdict {
  std::string symbol;
  HypoParams params;
  std::vector<ShellResult> shells;
  bool witness_found = false;
  std::array<double, 4> witness{};
  double witness_abs = 0.0;
  double witness_radius = 0.0;
  double R = 0.0;
  std::string verdict;
};

// Throws DomainError for invalid params.
HypoVerdict hypo_check(const Poly4& a, const HypoParams& params = {});
nlohmann::json to_json(const HypoVerdict& v);

// g(r) = (1/4 pi) int_0^inf exp(-r^2 cosh(t) / 4) dt. Throws DomainError for r <= 0.
double twisted_green(double r);
// int_0^R g(r) r dr.
double twisted_green_moment(double R);

struct GreenBound {
  double c = 0.1;
  double s = 2.0;
  double r_min = 0.05;
  double r_max = 6.0;
  double C = 0.0;  // max of g(r) r^s e^{c r^2}
  double argmax = 0.0;
  int samples = 0;
  int violations = 0;
};

// Fits C in g(r) <= C r^{-s} e^{-c r^2} on [r_min, r_max] and recounts
// violations on an independent sample grid.
GreenBound fit_green_bound(double c = 0.1, double s = 2.0, double r_min = 0.05,
                           double r_max = 6.0, int samples = 2000);
nlohmann::json to_json(const GreenBound& b);

inline constexpr int kMaxSolveN = 128;

struct TwistedSolution {
  Grid2 u;
  std::string center_rule;
  double center_weight = 0.0;  // weight of the w = 0 lattice point
  double disc_weight = 0.0;    // int_{|w| < h/2} g, for comparison
};

// u(z) = sum_w h^2 g(|w|) e^{i (z2 w1 - z1 w2) / 2} f(z - w) over lattice
// offsets w, with the w = 0 cell integrated exactly over the square.
// Throws DomainError for N > kMaxSolveN or a non-spatial grid.
TwistedSolution twisted_solve(const Grid2& f);

struct SolveReport {
  int N = 0;
  double L = 0.0;
  double residual = 0.0;  // ||L u - f||_2 / ||f||_2
  double decay_sup = 0.0; // sup_z (1 + |z|)^{1/2} |u(z)|
  std::string center_rule;
  double center_weight = 0.0;
  double disc_weight = 0.0;
};

// Solves for f = exp(-(x^2 + y^2) / 2) and measures the residual with the
// spectral twisted Laplacian.
SolveReport twisted_solve_gaussian(int N, double L);
nlohmann::json to_json(const SolveReport& r);

struct ExampleArgs {
  std::string b = "x^2 + 1";
  std::string P = "0";
  std::string Q = "0";
  std::string R = "0";
  cplx alpha{0.0, 1.0};
  int m = 1;
};

struct NamedExample {
  std::string name;
  nlohmann::json params;
  WeylOp base;
  KernelSpec kernel;
  WeylOp form;
  std::string notes;
  std::string condition;  // empty when the entry carries none
  bool condition_holds = true;
};

// Names: ex1, HO1, HO2, HO3, twisted, harmonic2d, airy. Throws DomainError for
// an unknown name or invalid parameters, ParseError for bad text.
NamedExample make_example(const std::string& name, const ExampleArgs& args = {});
std::vector<std::string> catalog_names();
std::vector<NamedExample> catalog();

// tilde_transform(base, kernel) == form.
bool tilde_reproduces(const NamedExample& e);
// parse_weyl(format_op(form)) == form.
bool dsl_round_trips(const NamedExample& e);

nlohmann::json to_json(const NamedExample& e);

}  // namespace wck
