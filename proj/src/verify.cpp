#include "wck/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wck/cohen.hpp"
#include "wck/dsl.hpp"
#include "wck/error.hpp"
#include "wck/parallel.hpp"

namespace wck {

using nlohmann::json;

namespace {

bool constant_coefficient(const WeylOp& B) {
  for (const auto& [k, c] : B.terms())
    if (k[0] != 0 || k[1] != 0) return false;
  return true;
}


const char* kNames[] = {"wig-lemma21", "wig-prop22", "bar-thm34", "tilde-thm35",
                        "sigma1-thm310"};

void check_name(const std::string& name) {
  for (const char* n : kNames)
    if (name == n) return;
  throw DomainError("unknown identity name '" + name + "'");
}

// Both sides have the form post * T[pre w] with T = Wig, Q1 = Q^(sigma1) or
// Q0 = Q^(sigma) (q = 1).
struct Plan {
  WeylOp lhs_pre, lhs_post, rhs_pre, rhs_post;
  int lhs_T, rhs_T;  // 0 = Wig, 1 = Q1, 2 = Q0
};

Plan make_plan(const std::string& name, const WeylOp& B, const KernelSpec& ker) {
  check_name(name);
  const WeylOp I = WeylOp::identity();
  KernelSpec k0{ker.P, Poly2::constant(1.0)};
  if (name == "wig-lemma21" || name == "wig-prop22") {
    if (name == "wig-lemma21" && !constant_coefficient(B))
      throw DomainError("wig-lemma21 needs a constant-coefficient operator P(D1, D2)");
    return {I, B, wig_pushforward(B), I, 0, 0};
  }
  if (name == "bar-thm34")
    return {I, B, normal_mul(bar_transform(B, k0), a_of_q(ker.q)), I, 1, 2};
  if (name == "tilde-thm35")
    return {B, I, I, normal_mul(eval_at(ker.q, WeylOp::D1(), WeylOp::D2()), tilde_transform(B, k0)),
            1, 2};
  return {B, I, I, tilde_transform(normal_mul(a_of_q(ker.q), B), k0), 1, 2};
}

IdentityReport base_report(const std::string& name, const WeylOp& B, const KernelSpec& ker) {
  IdentityReport r;
  r.name = name;
  r.op = format_op(B);
  r.P = format_poly(ker.P);
  r.q = format_poly(ker.q);
  return r;
}

}  // namespace

json to_json(const IdentityReport& r) {
  json j = {{"identity", r.name},     {"backend", r.backend},
            {"abs_residual", r.abs_residual}, {"rel_residual", r.rel_residual},
            {"op", r.op},             {"P", r.P},
            {"q", r.q},               {"w", r.w}};
  if (r.backend == "grid") {
    j["N"] = r.N;
    j["L"] = r.L;
  }
  return j;
}

IdentityReport verify_identity(const std::string& name, const WeylOp& B, const KernelSpec& ker,
                               const Grid2& w) {
  Plan p = make_plan(name, B, ker);
  KernelSpec k0{ker.P, Poly2::constant(1.0)};
  auto T = [&](int t, const Grid2& g) {
    if (t == 0) return wig(g);
    return cohen_q(g, t == 1 ? ker : k0);
  };
  Grid2 lhs = apply_op(p.lhs_post, T(p.lhs_T, apply_op(p.lhs_pre, w)));
  Grid2 rhs = apply_op(p.rhs_post, T(p.rhs_T, apply_op(p.rhs_pre, w)));
  IdentityReport r = base_report(name, B, ker);
  r.backend = "grid";
  r.N = w.N();
  r.L = w.L();
  r.abs_residual = l2_norm(lhs - rhs);
  double den = l2_norm(rhs);
  r.rel_residual = den == 0.0 ? (r.abs_residual == 0.0 ? 0.0 : INFINITY) : r.abs_residual / den;
  return r;
}

IdentityReport verify_identity(const std::string& name, const WeylOp& B, const KernelSpec& ker,
                               const PolyGauss& w) {
  Plan p = make_plan(name, B, ker);
  KernelSpec k0{ker.P, Poly2::constant(1.0)};
  auto T = [&](int t, const PolyGauss& g) {
    if (t == 0) return wig_exact(g);
    return cohen_q_exact(g, t == 1 ? ker : k0);
  };
  PolyGauss lhs = apply_op_exact(p.lhs_post, T(p.lhs_T, apply_op_exact(p.lhs_pre, w)));
  PolyGauss rhs = apply_op_exact(p.rhs_post, T(p.rhs_T, apply_op_exact(p.rhs_pre, w)));
  IdentityReport r = base_report(name, B, ker);
  r.backend = "exact";
  r.abs_residual = l2_distance(lhs, rhs);
  double den = l2_norm(rhs);
  r.rel_residual = den == 0.0 ? (r.abs_residual == 0.0 ? 0.0 : INFINITY) : r.abs_residual / den;
  return r;
}

WeylOp twisted_laplacian() {
  WeylOp a = WeylOp::D1() - 0.5 * WeylOp::M2();
  WeylOp b = WeylOp::D2() + 0.5 * WeylOp::M1();
  return a * a + b * b;
}

std::vector<NamedOp> standard_operators() {
  return {{"x", WeylOp::M1()},
          {"Dx", WeylOp::D1()},
          {"x*Dx", WeylOp::M1() * WeylOp::D1()},
          {"x^2 + Dx^2", WeylOp::M1().pow(2) + WeylOp::D1().pow(2)},
          {"(Dx - y/2)^2 + (Dy + x/2)^2", twisted_laplacian()}};
}

std::vector<NamedPoly> standard_phases() {
  return {{"0", Poly2()},
          {"xi*eta/2", parse_poly2("xi*eta/2")},
          {"xi^2 - eta^2", parse_poly2("xi^2 - eta^2")}};
}

std::vector<NamedPoly> standard_factors() {
  return {{"1", Poly2::constant(1.0)}, {"xi^2 + eta^2 + 1", parse_poly2("xi^2 + eta^2 + 1")}};
}

std::vector<NamedFunction> standard_functions() {
  PolyGauss g = PolyGauss::gaussian();
  return {{"exp(-(x^2+y^2)/2)", g},
          {"x*exp(-(x^2+y^2)/2)", g.with_poly(Poly2::var(0))},
          {"(x^2+y)*exp(-(x^2+y^2)/2)", g.with_poly(parse_poly2("xi^2 + eta"))}};
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  struct Case {
    std::string name;
    NamedOp op;
    NamedPoly P, q;
    NamedFunction w;
  };
  const std::string& s = cfg.suite;
  if (s != "wigner" && s != "cohen" && s != "sigma1" && s != "all")
    throw DomainError("unknown suite '" + s + "'");
  auto phases = cfg.phases.empty() ? standard_phases() : cfg.phases;
  auto factors = cfg.factors.empty() ? standard_factors() : cfg.factors;
  auto ops = cfg.operators.empty() ? standard_operators() : cfg.operators;
  auto fns = standard_functions();
  const NamedPoly zero{"0", Poly2()}, one{"1", Poly2::constant(1.0)};

  std::vector<Case> cases;
  if (s == "wigner" || s == "all") {
    std::vector<NamedOp> cc{{"Dx", WeylOp::D1()},
                            {"Dy", WeylOp::D2()},
                            {"Dx^2*Dy", WeylOp::D1().pow(2) * WeylOp::D2()}};
    for (const auto& op : cc)
      for (const auto& w : fns) cases.push_back({"wig-lemma21", op, zero, one, w});
    for (const auto& op : ops)
      for (const auto& w : fns) cases.push_back({"wig-prop22", op, zero, one, w});
  }
  if (s == "cohen" || s == "all") {
    std::vector<NamedOp> rows{{"1", WeylOp::identity()}};
    if (cfg.operators.empty()) rows.insert(rows.end(), ops.begin(), ops.end());
    else rows = ops;
    for (const char* name : {"bar-thm34", "tilde-thm35"})
      for (const auto& op : rows)
        for (const auto& P : phases)
          for (const auto& q : factors)
            for (const auto& w : fns) cases.push_back({name, op, P, q, w});
  }
  if (s == "sigma1" || s == "all") {
    std::vector<NamedPoly> qs;
    for (const auto& q : factors)
      if (!(cfg.factors.empty() && q.label == "1")) qs.push_back(q);
    for (const auto& op : ops)
      for (const auto& P : phases)
        for (const auto& q : qs)
          for (const auto& w : fns) cases.push_back({"sigma1-thm310", op, P, q, w});
  }

  std::map<std::pair<std::string, std::string>, KernelSpec> built;
  std::vector<KernelSpec> kernels(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto key = std::make_pair(cases[i].P.label, cases[i].q.label);
    auto it = built.find(key);
    if (it == built.end()) it = built.emplace(key, make_kernel(cases[i].P.poly, cases[i].q.poly)).first;
    kernels[i] = it->second;
  }

  const int nb = int(cfg.use_exact) + int(cfg.use_grid);
  std::vector<IdentityReport> out(cases.size() * nb);
  parallel_for(cases.size(), [&](std::size_t i) {
    const Case& c = cases[i];
    int slot = 0;
    if (cfg.use_exact) {
      IdentityReport r = verify_identity(c.name, c.op.op, kernels[i], c.w.f);
      r.w = c.w.label;
      out[i * nb + slot++] = r;
    }
    if (cfg.use_grid) {
      IdentityReport r = verify_identity(c.name, c.op.op, kernels[i], c.w.f.sample(cfg.N, cfg.L));
      r.w = c.w.label;
      out[i * nb + slot++] = r;
    }
  });

  SuiteResult res;
  json list = json::array();
  double worst_exact = 0.0, worst_grid = 0.0;
  const IdentityReport* worst_gate = nullptr;
  int warnings = 0;
  for (const auto& r : out) {
    json j = to_json(r);
    bool gating = r.backend == "exact" || !cfg.use_exact;
    bool ok = r.rel_residual <= cfg.tol;
    j["within_tolerance"] = ok;
    if (r.backend == "grid" && r.rel_residual > cfg.grid_warn) {
      j["warning"] = "grid-resolution";
      ++warnings;
    }
    list.push_back(j);
    if (r.backend == "exact") worst_exact = std::max(worst_exact, r.rel_residual);
    else worst_grid = std::max(worst_grid, r.rel_residual);
    if (gating) {
      if (!ok) res.breach = true;
      if (!worst_gate || !(r.rel_residual <= worst_gate->rel_residual)) worst_gate = &r;
    }
  }
  json backends = json::array();
  if (cfg.use_grid) backends.push_back("grid");
  if (cfg.use_exact) backends.push_back("exact");
  json summary = {{"cases", cases.size()},
                  {"reports", out.size()},
                  {"gating_backend", cfg.use_exact ? "exact" : "grid"},
                  {"pass", !res.breach},
                  {"grid_resolution_warnings", warnings}};
  if (cfg.use_exact) summary["max_rel_residual_exact"] = worst_exact;
  if (cfg.use_grid) summary["max_rel_residual_grid"] = worst_grid;
  if (worst_gate) {
    json wj = to_json(*worst_gate);
    summary["worst_case"] = wj;
  }
  res.json = {{"config",
               {{"suite", cfg.suite},
                {"N", cfg.N},
                {"L", cfg.L},
                {"tol", cfg.tol},
                {"grid_warn", cfg.grid_warn},
                {"backends", backends},
                {"seed", cfg.seed}}},
              {"summary", summary},
              {"reports", list}};
  res.reports = std::move(out);
  return res;
}

}  // namespace wck
