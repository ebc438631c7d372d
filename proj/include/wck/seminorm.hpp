#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wck/grid.hpp"
#include "wck/polygauss.hpp"
#include "wck/weights.hpp"

namespace wck {

// One partial supremum. domain "x": sup over x of |x^beta D^alpha u|;
// domain "xi": the same quantity for the Fourier transform, i.e.
// |D^alpha u^| (beta = 0) or |xi^beta u^| (alpha = 0), computed as
// |F[x^alpha u]| and |F[D^beta u]|. Systems 1-3 include e^{lambda omega(|.|)}
// inside the supremum; systems 4-6 multiply by the e^{-lambda phi*} factors.
struct SeminormEntry {
  std::array<int, 2> alpha{0, 0};
  std::array<int, 2> beta{0, 0};
  std::string domain = "x";
  std::string part;
  double value = 0.0;
};

struct SeminormReport {
  int system = 6;
  std::string weight;
  std::string input;
  std::string backend;  // exact | grid
  double lambda = 1.0;
  double mu = 1.0;
  int K = 0;
  std::vector<SeminormEntry> entries;
  // running_max[k]: max over entries of level <= k (level |alpha + beta|).
  std::vector<double> running_max;
  double box = 0.0;  // largest half-width used
  bool box_converged = true;
  bool ladder_stable = true;
  std::string verdict;  // "stabilized" | "growing"
  std::string warning;
};

nlohmann::json to_json(const SeminormReport& r);
// Columns: domain,part,alpha1,alpha2,beta1,beta2,value.
void write_csv(std::ostream& os, const SeminormReport& r);

inline constexpr int kMaxOrderExact = 40;
inline constexpr int kMaxOrderGrid = 8;

// system in 1..6. Throws DomainError for K above the backend cap, a bad
// system number, or lambda, mu <= 0.
SeminormReport seminorm(const PolyGauss& u, const WeightFunction& wf, int system, double lambda,
                        double mu, int K, const std::string& label = "polygauss");
SeminormReport seminorm(const Grid2& u, const WeightFunction& wf, int system, double lambda,
                        double mu, int K, const std::string& label = "grid");

// Test inputs: "gaussian", "xgaussian" (exact) and "decoy", 1/(1+x^2+y^2)
// sampled with N = 128, L = 16.
PolyGauss seminorm_gaussian();
PolyGauss seminorm_xgaussian();
Grid2 seminorm_decoy();

}  // namespace wck
