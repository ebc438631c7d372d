#include "wck/wck.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wck/cohen.hpp"
#include "wck/dsl.hpp"
#include "wck/error.hpp"
#include "wck/gallery.hpp"
#include "wck/grid.hpp"
#include "wck/seminorm.hpp"
#include "wck/serialize.hpp"
#include "wck/verify.hpp"
#include "wck/weights.hpp"
#include "wck/weyl.hpp"

using nlohmann::json;

struct wck_op {
  wck::WeylOp v;
};
struct wck_kernel {
  wck::KernelSpec v;
  std::string P, q;
};
struct wck_grid {
  wck::Grid2 v;
};
struct wck_weight {
  wck::WeightFunction v;
};

namespace {

thread_local std::string last_error;

class ArgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
wck_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return WCK_OK;
  } catch (const ArgError& e) {
    last_error = e.what();
    return WCK_ERR_ARG;
  } catch (const wck::Error& e) {
    last_error = e.what();
    switch (e.kind()) {
      case wck::ErrorKind::Parse: return WCK_ERR_PARSE;
      case wck::ErrorKind::Kernel: return WCK_ERR_KERNEL;
      case wck::ErrorKind::Domain: return WCK_ERR_DOMAIN;
      case wck::ErrorKind::Io: return WCK_ERR_IO;
    }
    return WCK_ERR_INTERNAL;
  } catch (const json::exception& e) {
    last_error = std::string("bad JSON argument: ") + e.what();
    return WCK_ERR_ARG;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WCK_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return WCK_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw ArgError(std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

json parse_config(const char* text) {
  if (!text || !*text) return json::object();
  json j = json::parse(text);
  if (!j.is_object()) throw ArgError("configuration must be a JSON object");
  return j;
}

wck::cplx parse_alpha(const json& a) {
  if (a.is_array()) return {a.at(0).get<double>(), a.at(1).get<double>()};
  if (a.is_number()) return a.get<double>();
  wck::WeylOp op = wck::parse_weyl(a.get<std::string>());
  for (const auto& [k, c] : op.terms())
    if (k != wck::WeylOp::Key{0, 0, 0, 0}) throw wck::DomainError("alpha must be a constant");
  return op.coeff({0, 0, 0, 0});
}

wck::ExampleArgs example_args(const char* text) {
  json j = parse_config(text);
  wck::ExampleArgs a;
  if (j.contains("b")) a.b = j["b"].get<std::string>();
  if (j.contains("P")) a.P = j["P"].get<std::string>();
  if (j.contains("Q")) a.Q = j["Q"].get<std::string>();
  if (j.contains("R")) a.R = j["R"].get<std::string>();
  if (j.contains("alpha")) a.alpha = parse_alpha(j["alpha"]);
  if (j.contains("m")) a.m = j["m"].get<int>();
  return a;
}

}  // namespace

extern "C" {

const char* wck_version(void) { return "1.0.0"; }

const char* wck_last_error(void) { return last_error.c_str(); }

void wck_string_free(char* s) { std::free(s); }

wck_status wck_op_parse(const char* text, wck_op** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new wck_op{wck::parse_weyl(text)};
  });
}

wck_status wck_op_from_json(const char* text, wck_op** out) {
  return guard([&] {
    need(text, "json");
    need(out, "out");
    *out = new wck_op{wck::weyl_from_json(json::parse(text))};
  });
}

void wck_op_free(wck_op* op) { delete op; }

wck_status wck_op_format(const wck_op* op, char** out) {
  return guard([&] {
    need(op, "op");
    need(out, "out");
    *out = dup(wck::format_op(op->v));
  });
}

wck_status wck_op_to_json(const wck_op* op, char** out) {
  return guard([&] {
    need(op, "op");
    need(out, "out");
    *out = dup(wck::to_json(op->v).dump());
  });
}

wck_status wck_op_symbol(const wck_op* op, char** out) {
  return guard([&] {
    need(op, "op");
    need(out, "out");
    *out = dup(wck::format_symbol(wck::symbol_of(op->v)));
  });
}

wck_status wck_op_mul(const wck_op* a, const wck_op* b, wck_op** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new wck_op{a->v * b->v};
  });
}

wck_status wck_op_add(const wck_op* a, const wck_op* b, wck_op** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new wck_op{a->v + b->v};
  });
}

wck_status wck_op_equal(const wck_op* a, const wck_op* b, int* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = a->v == b->v;
  });
}

wck_status wck_kernel_create(const char* P, const char* q, wck_kernel** out) {
  return guard([&] {
    need(out, "out");
    std::string ps = P ? P : "0", qs = q ? q : "1";
    wck::KernelSpec k = wck::make_kernel(wck::parse_poly2(ps), wck::parse_poly2(qs));
    *out = new wck_kernel{k, ps, qs};
  });
}

void wck_kernel_free(wck_kernel* k) { delete k; }

wck_status wck_transform(const wck_op* op, const wck_kernel* k, const char* which, wck_op** out) {
  return guard([&] {
    need(op, "op");
    need(which, "which");
    need(out, "out");
    std::string w = which;
    if (w == "pushforward") {
      *out = new wck_op{wck::wig_pushforward(op->v)};
      return;
    }
    need(k, "kernel");
    if (w == "bar") *out = new wck_op{wck::bar_transform(op->v, k->v)};
    else if (w == "tilde") *out = new wck_op{wck::tilde_transform(op->v, k->v)};
    else throw ArgError("which must be bar, tilde or pushforward");
  });
}

wck_status wck_grid_create(int N, double L, const double* values, wck_grid** out) {
  return guard([&] {
    need(out, "out");
    wck::Grid2 g(N, L);
    if (values)
      for (std::size_t k = 0; k < g.values().size(); ++k)
        g.values()[k] = {values[2 * k], values[2 * k + 1]};
    g.check_finite();
    *out = new wck_grid{std::move(g)};
  });
}

wck_status wck_grid_gaussian(int N, double L, wck_grid** out) {
  return guard([&] {
    need(out, "out");
    *out = new wck_grid{
        wck::Grid2::sample(N, L, [](double x, double y) { return std::exp(-(x * x + y * y) / 2); })};
  });
}

void wck_grid_free(wck_grid* g) { delete g; }

wck_status wck_grid_size(const wck_grid* g, int* N, double* L) {
  return guard([&] {
    need(g, "grid");
    if (N) *N = g->v.N();
    if (L) *L = g->v.L();
  });
}

wck_status wck_grid_values(const wck_grid* g, double* buf, size_t len) {
  return guard([&] {
    need(g, "grid");
    need(buf, "buf");
    const auto& v = g->v.values();
    if (len < 2 * v.size()) throw ArgError("buffer too small");
    for (std::size_t k = 0; k < v.size(); ++k) {
      buf[2 * k] = v[k].real();
      buf[2 * k + 1] = v[k].imag();
    }
  });
}

wck_status wck_grid_load(const char* path, wck_grid** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new wck_grid{wck::load_grid(path)};
  });
}

wck_status wck_grid_save(const wck_grid* g, const char* path) {
  return guard([&] {
    need(g, "grid");
    need(path, "path");
    wck::save_grid(path, g->v);
  });
}

wck_status wck_wig(const wck_grid* w, wck_grid** out) {
  return guard([&] {
    need(w, "grid");
    need(out, "out");
    *out = new wck_grid{wck::wig(w->v)};
  });
}

wck_status wck_cohen_q(const wck_grid* w, const wck_kernel* k, wck_grid** out) {
  return guard([&] {
    need(w, "grid");
    need(k, "kernel");
    need(out, "out");
    *out = new wck_grid{wck::cohen_q(w->v, k->v)};
  });
}

wck_status wck_apply_op(const wck_op* op, const wck_grid* w, wck_grid** out) {
  return guard([&] {
    need(op, "op");
    need(w, "grid");
    need(out, "out");
    *out = new wck_grid{wck::apply_op(op->v, w->v)};
  });
}

wck_status wck_verify(const char* config_json, char** report_json, int* breach) {
  return guard([&] {
    need(report_json, "report_json");
    json j = parse_config(config_json);
    wck::SuiteConfig cfg;
    cfg.suite = j.value("suite", cfg.suite);
    cfg.N = j.value("N", cfg.N);
    cfg.L = j.value("L", cfg.L);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.seed = j.value("seed", cfg.seed);
    std::string backend = j.value("backend", std::string("both"));
    if (backend == "grid") cfg.use_exact = false;
    else if (backend == "exact") cfg.use_grid = false;
    else if (backend != "both") throw ArgError("backend must be grid, exact or both");
    if (cfg.use_grid && (cfg.N < 8 || cfg.N > 1024 || (cfg.N & (cfg.N - 1))))
      throw wck::DomainError("N must be a power of two in [8, 1024]");
    if (!(cfg.L > 0)) throw wck::DomainError("L must be positive");
    if (!(cfg.tol > 0)) throw wck::DomainError("tol must be positive");
    if (j.contains("P")) {
      std::string t = j["P"].get<std::string>();
      cfg.phases = {{t, wck::parse_poly2(t)}};
    }
    if (j.contains("q")) {
      std::string t = j["q"].get<std::string>();
      cfg.factors = {{t, wck::parse_poly2(t)}};
    }
    if (j.contains("op")) {
      std::string t = j["op"].get<std::string>();
      cfg.operators = {{t, wck::parse_weyl(t)}};
    }
    wck::SuiteResult r = wck::run_suite(cfg);
    if (breach) *breach = r.breach;
    *report_json = dup(r.json.dump(2));
  });
}

wck_status wck_weight_create(const char* id, wck_weight** out) {
  return guard([&] {
    need(id, "id");
    need(out, "out");
    *out = new wck_weight{wck::WeightFunction::from_id(id)};
  });
}

void wck_weight_free(wck_weight* w) { delete w; }

wck_status wck_weight_conjugate(const wck_weight* w, double s, double* out) {
  return guard([&] {
    need(w, "weight");
    need(out, "out");
    *out = wck::young_conjugate(w->v, s);
  });
}

wck_status wck_weight_conjugate_table(const wck_weight* w, const double* s, size_t n, char** out) {
  return guard([&] {
    need(w, "weight");
    need(out, "out");
    if (n > 0) need(s, "s");
    auto num = [](double v) { return std::isinf(v) ? json("inf") : json(v); };
    json rows = json::array();
    for (size_t k = 0; k < n; ++k) {
      json row = {{"s", s[k]}, {"value", num(wck::young_conjugate(w->v, s[k]))}};
      if (auto cf = w->v.conjugate_closed_form(s[k])) row["closed_form"] = num(*cf);
      rows.push_back(row);
    }
    *out = dup(json({{"weight", w->v.id()}, {"conjugate", rows}}).dump(2));
  });
}

wck_status wck_weight_check(const wck_weight* w, double t_max, int samples, char** out) {
  return guard([&] {
    need(w, "weight");
    need(out, "out");
    wck::ConditionReport r = wck::check_conditions(w->v, t_max, samples);
    json j = wck::to_json(r);
    j["all_pass"] = r.all_pass();
    *out = dup(j.dump(2));
  });
}

wck_status wck_weight_lemmas(const wck_weight* w, int trials, uint64_t seed, char** out,
                             int* violations) {
  return guard([&] {
    need(w, "weight");
    need(out, "out");
    if (trials < 1) throw wck::DomainError("trials must be positive");
    wck::LemmaReport lt = wck::check_lemma_lt(w->v, trials, seed);
    wck::LemmaReport rho = wck::check_rho_lemma_random(w->v, trials, seed);
    if (violations) *violations = lt.violations + rho.violations;
    json j = {{"weight", w->v.id()},
              {"trials", trials},
              {"seed", seed},
              {"slack", wck::kLemmaSlack},
              {"suites", json::array({wck::to_json(lt), wck::to_json(rho)})},
              {"pass", lt.pass() && rho.pass()}};
    *out = dup(j.dump(2));
  });
}

wck_status wck_seminorm(const wck_weight* w, const char* input, int system, double lambda,
                        double mu, int K, const char* backend, const char* format, char** out) {
  return guard([&] {
    need(w, "weight");
    need(input, "input");
    need(out, "out");
    std::string in = input, be = backend ? backend : "", fmt = format ? format : "json";
    if (fmt != "json" && fmt != "csv") throw ArgError("format must be json or csv");
    wck::SeminormReport r;
    if (in == "gaussian" || in == "xgaussian") {
      wck::PolyGauss u = in == "gaussian" ? wck::seminorm_gaussian() : wck::seminorm_xgaussian();
      if (be.empty() || be == "exact") r = wck::seminorm(u, w->v, system, lambda, mu, K, in);
      else if (be == "grid") r = wck::seminorm(u.sample(128, 16.0), w->v, system, lambda, mu, K, in);
      else throw ArgError("backend must be exact or grid");
    } else if (in == "decoy") {
      if (!be.empty() && be != "grid") throw wck::DomainError("the decoy input has no exact form");
      r = wck::seminorm(wck::seminorm_decoy(), w->v, system, lambda, mu, K, in);
    } else {
      throw wck::DomainError("unknown seminorm input '" + in + "'");
    }
    if (fmt == "csv") {
      std::ostringstream os;
      wck::write_csv(os, r);
      *out = dup(os.str());
    } else {
      *out = dup(wck::to_json(r).dump(2));
    }
  });
}

wck_status wck_gallery_names(char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(json(wck::catalog_names()).dump());
  });
}

wck_status wck_gallery_show(const char* name, const char* args_json, char** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = dup(wck::to_json(wck::make_example(name, example_args(args_json))).dump(2));
  });
}

wck_status wck_gallery_op(const char* name, const char* args_json, wck_op** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = new wck_op{wck::make_example(name, example_args(args_json)).form};
  });
}

wck_status wck_hypo_check(const wck_op* op, const char* params_json, char** out, int* witness) {
  return guard([&] {
    need(op, "op");
    need(out, "out");
    json j = parse_config(params_json);
    wck::HypoParams p;
    p.m_prime = j.value("m_prime", p.m_prime);
    p.rho = j.value("rho", p.rho);
    p.B = j.value("B", p.B);
    if (j.contains("radii")) p.radii = j["radii"].get<std::vector<double>>();
    p.random_directions = j.value("random_directions", p.random_directions);
    p.derivative_order = j.value("derivative_order", p.derivative_order);
    p.seed = j.value("seed", p.seed);
    wck::HypoVerdict v = wck::hypo_check(wck::symbol_of(op->v), p);
    if (witness) *witness = v.witness_found;
    *out = dup(wck::to_json(v).dump(2));
  });
}

wck_status wck_twisted_green(double r, double* out) {
  return guard([&] {
    need(out, "out");
    *out = wck::twisted_green(r);
  });
}

wck_status wck_green_bound(double c, double s, double r_min, double r_max, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(wck::to_json(wck::fit_green_bound(c, s, r_min, r_max)).dump(2));
  });
}

wck_status wck_twisted_solve(const wck_grid* f, wck_grid** out) {
  return guard([&] {
    need(f, "grid");
    need(out, "out");
    *out = new wck_grid{wck::twisted_solve(f->v).u};
  });
}

wck_status wck_twisted_solve_gaussian(int N, double L, char** out, double* residual) {
  return guard([&] {
    need(out, "out");
    wck::SolveReport r = wck::twisted_solve_gaussian(N, L);
    if (residual) *residual = r.residual;
    *out = dup(wck::to_json(r).dump(2));
  });
}

}  // extern "C"
