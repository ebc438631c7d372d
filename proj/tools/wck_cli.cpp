#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "wck/wck.h"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kKernel = 3, kTolerance = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(wck_status s) {
  switch (s) {
    case WCK_OK: return kOk;
    case WCK_ERR_ARG:
    case WCK_ERR_PARSE:
    case WCK_ERR_DOMAIN: return kUsage;
    case WCK_ERR_KERNEL: return kKernel;
    case WCK_ERR_TOLERANCE: return kTolerance;
    default: return kFailure;
  }
}

void check(wck_status s, const std::string& what) {
  if (s != WCK_OK) throw Failure{exit_code(s), what + ": " + wck_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  wck_string_free(s);
  return out;
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
  T** out() { return &p; }
};
using Op = Handle<wck_op, wck_op_free>;
using Kernel = Handle<wck_kernel, wck_kernel_free>;
using Weight = Handle<wck_weight, wck_weight_free>;

struct Common {
  std::string out;
  std::string format = "json";
  bool no_timestamp = false;
  unsigned long long seed = 0;
};

void add_common(CLI::App* app, Common& c, bool csv) {
  app->add_option("--out", c.out, "Write output to this file instead of stdout");
  auto* f = app->add_option("--format", c.format, "Output format")->capture_default_str();
  f->check(CLI::IsMember(csv ? std::vector<std::string>{"json", "csv"}
                             : std::vector<std::string>{"json"}));
  app->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp from JSON output");
  app->add_option("--seed", c.seed, "Random seed, recorded in the output")->capture_default_str();
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit_text(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw Failure{kFailure, "cannot open " + c.out};
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
}

void emit(const Common& c, const std::string& command, json body) {
  json doc;
  doc["command"] = command;
  doc["seed"] = c.seed;
  if (!c.no_timestamp) doc["timestamp"] = utc_now();
  doc["result"] = std::move(body);
  emit_text(c, doc.dump(2));
}

// transform

struct TransformArgs {
  Common c;
  std::string op, P = "0", q = "1", which = "tilde";
};

int run_transform(const TransformArgs& a) {
  Op op, result;
  check(wck_op_parse(a.op.c_str(), op.out()), "--op");
  Kernel k;
  if (a.which != "pushforward") check(wck_kernel_create(a.P.c_str(), a.q.c_str(), k.out()), "kernel");
  check(wck_transform(op.p, k.p, a.which.c_str(), result.out()), "transform");
  char* text = nullptr;
  char* terms = nullptr;
  char* sym = nullptr;
  check(wck_op_format(result.p, &text), "format");
  check(wck_op_to_json(result.p, &terms), "json");
  check(wck_op_symbol(result.p, &sym), "symbol");
  json body = {{"op", a.op},
               {"which", a.which},
               {"result", take(text)},
               {"terms", json::parse(take(terms))},
               {"symbol", take(sym)}};
  if (a.which != "pushforward") {
    body["P"] = a.P;
    body["q"] = a.q;
  }
  emit(a.c, "transform", body);
  return kOk;
}

// verify

struct VerifyArgs {
  Common c;
  std::string suite = "all", backend = "both";
  int N = 256;
  double L = 12.0, tol = 1e-6;
  std::string P, q, op;
};

int run_verify(const VerifyArgs& a) {
  json cfg = {{"suite", a.suite}, {"N", a.N},   {"L", a.L},
              {"tol", a.tol},     {"seed", a.c.seed}, {"backend", a.backend}};
  if (!a.P.empty()) cfg["P"] = a.P;
  if (!a.q.empty()) cfg["q"] = a.q;
  if (!a.op.empty()) cfg["op"] = a.op;
  char* out = nullptr;
  int breach = 0;
  check(wck_verify(cfg.dump().c_str(), &out, &breach), "verify");
  json report = json::parse(take(out));
  emit(a.c, "verify", report);
  if (breach) {
    std::cerr << "tolerance breach; worst case: " << report["summary"]["worst_case"].dump() << "\n";
    return kTolerance;
  }
  return kOk;
}

// weights

struct WeightsArgs {
  Common c;
  std::string id, action;
  double t_max = 1e4;
  int samples = 2000;
  std::vector<double> s;
  std::string u = "gaussian", backend;
  int system = 6, K = 20, trials = 10000;
  double lambda = 1.0, mu = 1.0;
};

int run_weights(const WeightsArgs& a) {
  Weight w;
  check(wck_weight_create(a.id.c_str(), w.out()), "weight");
  char* out = nullptr;
  if (a.action == "check") {
    check(wck_weight_check(w.p, a.t_max, a.samples, &out), "check");
    emit(a.c, "weights check", json::parse(take(out)));
    return kOk;
  }
  if (a.action == "conjugate") {
    std::vector<double> s = a.s;
    if (s.empty())
      for (int k = 0; k <= 20; ++k) s.push_back(k);
    check(wck_weight_conjugate_table(w.p, s.data(), s.size(), &out), "conjugate");
    json t = json::parse(take(out));
    if (a.c.format == "csv") {
      std::string csv = "s,value,closed_form\n";
      for (const auto& row : t["conjugate"]) {
        auto cell = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        csv += row["s"].dump() + "," + cell(row["value"]) + "," +
               (row.contains("closed_form") ? cell(row["closed_form"]) : "") + "\n";
      }
      emit_text(a.c, csv);
    } else {
      emit(a.c, "weights conjugate", t);
    }
    return kOk;
  }
  if (a.action == "seminorm") {
    check(wck_seminorm(w.p, a.u.c_str(), a.system, a.lambda, a.mu, a.K,
                       a.backend.empty() ? nullptr : a.backend.c_str(), a.c.format.c_str(), &out),
          "seminorm");
    if (a.c.format == "csv") emit_text(a.c, take(out));
    else emit(a.c, "weights seminorm", json::parse(take(out)));
    return kOk;
  }
  if (a.action == "lemmas") {
    int violations = 0;
    check(wck_weight_lemmas(w.p, a.trials, a.c.seed, &out, &violations), "lemmas");
    emit(a.c, "weights lemmas", json::parse(take(out)));
    return violations ? kTolerance : kOk;
  }
  throw Failure{kUsage, "unknown weights action '" + a.action + "'"};
}

// gallery

struct GalleryArgs {
  Common c;
  std::string name, action;
  std::string b, P, Q, R, alpha;
  int m = 1;
  double m_prime = 0.0, rho = 1.0, B = 1.0;
  std::vector<double> radii;
  int directions = 2000, derivative_order = 0;
  int N = 64;
  double L = 8.0, tol = 1e-2;
};

int run_gallery(const GalleryArgs& a) {
  if (a.name == "list") {
    char* out = nullptr;
    check(wck_gallery_names(&out), "gallery");
    emit(a.c, "gallery list", json::parse(take(out)));
    return kOk;
  }
  json args = json::object();
  if (!a.b.empty()) args["b"] = a.b;
  if (!a.P.empty()) args["P"] = a.P;
  if (!a.Q.empty()) args["Q"] = a.Q;
  if (!a.R.empty()) args["R"] = a.R;
  if (!a.alpha.empty()) args["alpha"] = a.alpha;
  args["m"] = a.m;
  const std::string args_text = args.dump();
  char* out = nullptr;
  // Validates the name and parameters for every action.
  check(wck_gallery_show(a.name.c_str(), args_text.c_str(), &out), "gallery");
  json shown = json::parse(take(out));

  if (a.action == "show") {
    emit(a.c, "gallery show", shown);
    return kOk;
  }
  if (a.action == "hypo") {
    Op op;
    check(wck_gallery_op(a.name.c_str(), args_text.c_str(), op.out()), "gallery");
    json params = {{"m_prime", a.m_prime},
                   {"rho", a.rho},
                   {"B", a.B},
                   {"random_directions", a.directions},
                   {"derivative_order", a.derivative_order},
                   {"seed", a.c.seed}};
    if (!a.radii.empty()) params["radii"] = a.radii;
    int witness = 0;
    check(wck_hypo_check(op.p, params.dump().c_str(), &out, &witness), "hypo");
    json v = json::parse(take(out));
    v["example"] = a.name;
    emit(a.c, "gallery hypo", v);
    return kOk;
  }
  if (a.action == "solve" || a.action == "green") {
    if (a.name != "twisted")
      throw Failure{kUsage, "action '" + a.action + "' is only available for twisted"};
    if (a.action == "green") {
      check(wck_green_bound(0.1, 2.0, 0.05, 6.0, &out), "green");
      json g = json::parse(take(out));
      emit(a.c, "gallery green", g);
      return g["violations"] == 0 ? kOk : kTolerance;
    }
    if (a.N < 8 || a.N > 1024 || (a.N & (a.N - 1)))
      throw Failure{kUsage, "N must be a power of two in [8, 1024]"};
    double residual = 0.0;
    check(wck_twisted_solve_gaussian(a.N, a.L, &out, &residual), "solve");
    json r = json::parse(take(out));
    r["tol"] = a.tol;
    r["within_tolerance"] = residual <= a.tol;
    emit(a.c, "gallery solve", r);
    return residual <= a.tol ? kOk : kTolerance;
  }
  throw Failure{kUsage, "unknown gallery action '" + a.action + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner/Cohen transformation calculus toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wck_version()));

  TransformArgs ta;
  auto* tr = app.add_subcommand("transform", "Transform an operator");
  tr->add_option("--op", ta.op, "Operator in x, y, Dx, Dy")->required();
  tr->add_option("--P", ta.P, "Phase P(xi, eta)")->capture_default_str();
  tr->add_option("--q", ta.q, "Factor q(xi, eta)")->capture_default_str();
  tr->add_option("--which", ta.which, "bar, tilde or pushforward")
      ->check(CLI::IsMember({"bar", "tilde", "pushforward"}))
      ->capture_default_str();
  add_common(tr, ta.c, false);

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "Run an intertwining-identity suite");
  ve->add_option("--suite", va.suite)
      ->check(CLI::IsMember({"wigner", "cohen", "sigma1", "all"}))
      ->capture_default_str();
  ve->add_option("-N", va.N, "Grid size")->capture_default_str();
  ve->add_option("-L", va.L, "Grid half-width")->capture_default_str();
  ve->add_option("--tol", va.tol, "Relative residual tolerance")->capture_default_str();
  ve->add_option("--backend", va.backend)
      ->check(CLI::IsMember({"grid", "exact", "both"}))
      ->capture_default_str();
  ve->add_option("--P", va.P, "Restrict to one phase");
  ve->add_option("--q", va.q, "Restrict to one factor");
  ve->add_option("--op", va.op, "Restrict to one operator");
  add_common(ve, va.c, false);

  WeightsArgs wa;
  auto* we = app.add_subcommand("weights", "Weight-function tables");
  we->add_option("weight", wa.id, "Weight id, e.g. classical, gevrey:2")->required();
  we->add_option("action", wa.action, "check, conjugate, seminorm or lemmas")
      ->required()
      ->check(CLI::IsMember({"check", "conjugate", "seminorm", "lemmas"}));
  we->add_option("--t-max", wa.t_max, "Upper end for the condition checks")->capture_default_str();
  we->add_option("--samples", wa.samples, "Samples for the condition checks")->capture_default_str();
  we->add_option("--s", wa.s, "Arguments of the conjugate")->delimiter(',');
  we->add_option("--u", wa.u, "gaussian, xgaussian or decoy")->capture_default_str();
  we->add_option("--system", wa.system, "Seminorm system 1..6")->capture_default_str();
  we->add_option("--lambda", wa.lambda)->capture_default_str();
  we->add_option("--mu", wa.mu)->capture_default_str();
  we->add_option("--K", wa.K, "Truncation order")->capture_default_str();
  we->add_option("--backend", wa.backend, "exact or grid")->check(CLI::IsMember({"grid", "exact"}));
  we->add_option("--trials", wa.trials, "Trials per lemma suite")->capture_default_str();
  add_common(we, wa.c, true);

  GalleryArgs ga;
  auto* ga_cmd = app.add_subcommand("gallery", "Example operators");
  ga_cmd->add_option("name", ga.name, "Catalog entry, or 'list'")->required();
  ga_cmd->add_option("action", ga.action, "show, hypo, solve or green")
      ->check(CLI::IsMember({"show", "hypo", "solve", "green"}));
  ga_cmd->add_option("--b", ga.b, "ex1: polynomial b(x)");
  ga_cmd->add_option("--P", ga.P, "Phase P(xi, eta)");
  ga_cmd->add_option("--Q", ga.Q, "HO2/HO3: Q(Dx)");
  ga_cmd->add_option("--R", ga.R, "HO2/HO3: R(Dy)");
  ga_cmd->add_option("--alpha", ga.alpha, "airy: complex constant, e.g. i or 1-2i");
  ga_cmd->add_option("--m", ga.m, "airy: exponent")->capture_default_str();
  ga_cmd->add_option("--m-prime", ga.m_prime, "hypo: exponent m'")->capture_default_str();
  ga_cmd->add_option("--rho", ga.rho, "hypo: rho in (0, 1]")->capture_default_str();
  ga_cmd->add_option("--B", ga.B, "hypo: base radius")->capture_default_str();
  ga_cmd->add_option("--radii", ga.radii, "hypo: shell radii")->delimiter(',');
  ga_cmd->add_option("--directions", ga.directions, "hypo: random directions")->capture_default_str();
  ga_cmd->add_option("--derivative-order", ga.derivative_order)->capture_default_str();
  ga_cmd->add_option("-N", ga.N, "solve: grid size")->capture_default_str();
  ga_cmd->add_option("-L", ga.L, "solve: grid half-width")->capture_default_str();
  ga_cmd->add_option("--tol", ga.tol, "solve: residual tolerance")->capture_default_str();
  add_common(ga_cmd, ga.c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*tr) return run_transform(ta);
    if (*ve) return run_verify(va);
    if (*we) return run_weights(wa);
    if (*ga_cmd) {
      if (ga.name != "list" && ga.action.empty()) throw Failure{kUsage, "missing gallery action"};
      return run_gallery(ga);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
