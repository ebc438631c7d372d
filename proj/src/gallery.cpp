#include "wck/gallery.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "wck/cohen.hpp"
#include "wck/dsl.hpp"
#include "wck/error.hpp"
#include "wck/parallel.hpp"
#include "wck/serialize.hpp"
#include "wck/verify.hpp"

namespace wck {

using nlohmann::json;

namespace {

using Point = std::array<double, 4>;

double bracket(const Point& z) {
  return std::sqrt(1.0 + z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]);
}

std::vector<Point> directions(int random_count, std::uint64_t seed) {
  static const double lattice[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<Point> out;
  for (double a : lattice)
    for (double b : lattice)
      for (double c : lattice)
        for (double d : lattice)
          if (a != 0 || b != 0 || c != 0 || d != 0) out.push_back({a, b, c, d});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int k = 0; k < random_count; ++k) {
    Point p{nd(rng), nd(rng), nd(rng), nd(rng)};
    if (p[0] == 0 && p[1] == 0 && p[2] == 0 && p[3] == 0) p[0] = 1.0;
    out.push_back(p);
  }
  for (Point& p : out) {
    double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    for (double& v : p) v /= n;
  }
  return out;
}

struct ShellObjective {
  const Poly4* a;
  double r;
  double scale;
};

Point on_shell(const double* v, double r) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
  if (n == 0.0) return {r, 0.0, 0.0, 0.0};
  return {r * v[0] / n, r * v[1] / n, r * v[2] / n, r * v[3] / n};
}

double shell_value(const gsl_vector* v, void* params) {
  const auto* o = static_cast<const ShellObjective*>(params);
  double x[4] = {gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2),
                 gsl_vector_get(v, 3)};
  return std::abs((*o->a)(on_shell(x, o->r))) / o->scale;
}

// Nelder-Mead on the unnormalized direction; returns the best shell point.
std::pair<double, Point> refine(const Poly4& a, double r, double scale, const Point& start) {
  ShellObjective obj{&a, r, scale};
  gsl_multimin_function fn{&shell_value, 4, &obj};
  gsl_vector* x = gsl_vector_alloc(4);
  gsl_vector* step = gsl_vector_alloc(4);
  for (int k = 0; k < 4; ++k) {
    gsl_vector_set(x, k, start[k]);
    gsl_vector_set(step, k, 0.05);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  for (int it = 0; it < 1000; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (s->fval == 0.0) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
  }
  double v[4];
  for (int k = 0; k < 4; ++k) v[k] = gsl_vector_get(s->x, k);
  double best = s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return {best, on_shell(v, r)};
}

struct Derivative {
  Poly4 poly;
  int order;
};

std::vector<Derivative> derivatives(const Poly4& a, int max_order) {
  std::vector<Derivative> out;
  for (int g0 = 0; g0 <= max_order; ++g0)
    for (int g1 = 0; g0 + g1 <= max_order; ++g1)
      for (int g2 = 0; g0 + g1 + g2 <= max_order; ++g2)
        for (int g3 = 0; g0 + g1 + g2 + g3 <= max_order; ++g3) {
          int n = g0 + g1 + g2 + g3;
          if (n == 0) continue;
          Poly4 d = a;
          const int g[4] = {g0, g1, g2, g3};
          for (int ax = 0; ax < 4; ++ax)
            for (int t = 0; t < g[ax]; ++t) d = d.derivative(ax);
          out.push_back({d, n});
        }
  return out;
}

json point_json(const Point& p) { return json::array({p[0], p[1], p[2], p[3]}); }

}  // namespace

HypoVerdict hypo_check(const Poly4& a, const HypoParams& params) {
  if (!(params.rho > 0.0 && params.rho <= 1.0)) throw DomainError("rho must lie in (0, 1]");
  if (!(params.B > 0.0)) throw DomainError("base radius must be positive");
  if (!std::isfinite(params.m_prime)) throw DomainError("m' must be finite");
  if (params.radii.empty()) throw DomainError("no shell radii");
  for (std::size_t k = 0; k < params.radii.size(); ++k) {
    if (params.radii[k] < params.B) throw DomainError("shell radii must be >= B");
    if (k > 0 && !(params.radii[k] > params.radii[k - 1]))
      throw DomainError("shell radii must increase");
  }
  if (params.random_directions < 0) throw DomainError("negative direction count");
  if (params.derivative_order < 0 || params.derivative_order > 6)
    throw DomainError("derivative order must lie in 0..6");

  gsl_set_error_handler_off();
  const std::vector<Point> dirs = directions(params.random_directions, params.seed);
  const std::vector<Derivative> derivs = derivatives(a, params.derivative_order);

  HypoVerdict v;
  v.symbol = format_symbol(a);
  v.params = params;
  v.R = params.radii.back();
  v.shells.resize(params.radii.size());

  parallel_for(params.radii.size(), [&](std::size_t s) {
    const double r = params.radii[s];
    const double scale = std::pow(1.0 + r * r, 0.5 * params.m_prime);
    std::vector<std::pair<double, std::size_t>> vals(dirs.size());
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const Point& d = dirs[k];
      vals[k] = {std::abs(a({r * d[0], r * d[1], r * d[2], r * d[3]})) / scale, k};
    }
    std::vector<std::pair<double, std::size_t>> sorted = vals;
    std::partial_sort(sorted.begin(), sorted.begin() + std::min<std::size_t>(8, sorted.size()),
                      sorted.end());
    ShellResult sh;
    sh.radius = r;
    const Point& d0 = dirs[sorted[0].second];
    sh.c = sorted[0].first;
    sh.argmin = {r * d0[0], r * d0[1], r * d0[2], r * d0[3]};
    for (std::size_t k = 0; k < std::min<std::size_t>(8, sorted.size()); ++k) {
      if (sh.c == 0.0) break;
      auto [val, p] = refine(a, r, scale, dirs[sorted[k].second]);
      if (val < sh.c) {
        sh.c = val;
        sh.argmin = p;
      }
    }
    sh.abs_a = std::abs(a(sh.argmin));
    sh.witness = sh.c < kWitnessThreshold;

    if (!derivs.empty()) {
      double C = 0.0;
      for (const Point& d : dirs) {
        Point p{r * d[0], r * d[1], r * d[2], r * d[3]};
        double av = std::abs(a(p));
        double br = bracket(p);
        if (av < kWitnessThreshold * std::pow(br, params.m_prime)) {
          ++sh.derivative_skipped;
          continue;
        }
        for (const Derivative& dv : derivs)
          C = std::max(C, std::abs(dv.poly(p)) * std::pow(br, params.rho * dv.order) / av);
      }
      sh.derivative_C = C;
    }
    v.shells[s] = sh;
  });

  for (const ShellResult& sh : v.shells) {
    if (!sh.witness) continue;
    v.witness_found = true;
    v.witness = sh.argmin;
    v.witness_abs = sh.abs_a;
    v.witness_radius = sh.radius;
  }
  std::ostringstream os;
  if (v.witness_found) {
    os << "lower bound violated: |a| = " << format_number(v.witness_abs) << " at radius "
       << format_number(v.witness_radius) << "; the symbol is not globally hypoelliptic";
  } else {
    os << "no violation found up to radius " << format_number(v.R)
       << "; one-sided evidence only, the lower bound is not proved";
  }
  v.verdict = os.str();
  return v;
}

json to_json(const HypoVerdict& v) {
  json j;
  j["symbol"] = v.symbol;
  j["params"] = {{"m_prime", v.params.m_prime},
                 {"rho", v.params.rho},
                 {"B", v.params.B},
                 {"radii", v.params.radii},
                 {"random_directions", v.params.random_directions},
                 {"derivative_order", v.params.derivative_order},
                 {"seed", v.params.seed}};
  json shells = json::array();
  for (const ShellResult& s : v.shells) {
    json e = {{"radius", s.radius},
              {"c", s.c},
              {"argmin", point_json(s.argmin)},
              {"abs_a", s.abs_a},
              {"witness", s.witness}};
    if (s.derivative_C) {
      e["derivative_C"] = *s.derivative_C;
      e["derivative_skipped"] = s.derivative_skipped;
    }
    shells.push_back(e);
  }
  j["shells"] = shells;
  j["witness_found"] = v.witness_found;
  if (v.witness_found)
    j["witness"] = {{"point", point_json(v.witness)},
                    {"abs_a", v.witness_abs},
                    {"radius", v.witness_radius}};
  j["R"] = v.R;
  j["verdict"] = v.verdict;
  return j;
}

double twisted_green(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("twisted_green needs r > 0");
  const double q = 0.25 * r * r;
  // exp(-q (cosh T - 1)) = 1e-18
  const double T = std::acosh(1.0 + 18.0 * std::log(10.0) / q);
  auto f = [q](double t) { return std::exp(-q * std::cosh(t)); };
  double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, T, 12, 1e-13);
  return I / (4.0 * M_PI);
}

double twisted_green_moment(double R) {
  if (R <= 0.0) return 0.0;
  const double q = 0.25 * R * R;
  auto f = [q](double t) {
    double c = std::cosh(t);
    return 2.0 / c * -std::expm1(-q * c);
  };
  double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 46.0, 12, 1e-13);
  return I / (4.0 * M_PI);
}

GreenBound fit_green_bound(double c, double s, double r_min, double r_max, int samples) {
  if (!(r_min > 0.0 && r_max > r_min) || samples < 2) throw DomainError("bad bound range");
  GreenBound b;
  b.c = c;
  b.s = s;
  b.r_min = r_min;
  b.r_max = r_max;
  b.samples = samples;
  auto h = [&](double r) { return twisted_green(r) * std::pow(r, s) * std::exp(c * r * r); };
  const double dr = (r_max - r_min) / (samples - 1);
  std::vector<double> hv(samples);
  parallel_for(samples, [&](std::size_t k) { hv[k] = h(r_min + k * dr); });
  std::size_t k = std::max_element(hv.begin(), hv.end()) - hv.begin();
  b.C = hv[k];
  b.argmax = r_min + k * dr;
  double lo = std::max(r_min, b.argmax - dr), hi = std::min(r_max, b.argmax + dr);
  auto [rm, neg] = boost::math::tools::brent_find_minima([&](double r) { return -h(r); }, lo, hi,
                                                          std::numeric_limits<double>::digits / 2);
  if (-neg > b.C) {
    b.C = -neg;
    b.argmax = rm;
  }
  // Independent, finer check grid offset from the fitting grid.
  const int check = 3 * samples + 1;
  const double cr = (r_max - r_min) / (check - 1);
  std::vector<int> bad(check, 0);
  parallel_for(check, [&](std::size_t i) {
    double r = std::min(r_max, r_min + (i + 0.5) * cr);
    if (i + 1 == std::size_t(check)) r = r_max;
    bad[i] = h(r) > b.C * (1.0 + 1e-12);
  });
  for (int v : bad) b.violations += v;
  return b;
}

json to_json(const GreenBound& b) {
  return {{"c", b.c},         {"s", b.s},           {"r_min", b.r_min},
          {"r_max", b.r_max}, {"C", b.C},           {"argmax", b.argmax},
          {"samples", b.samples}, {"violations", b.violations}};
}

TwistedSolution twisted_solve(const Grid2& f) {
  const int N = f.N();
  if (N > kMaxSolveN) throw DomainError("twisted_solve: N exceeds " + std::to_string(kMaxSolveN));
  if (f.kind() != GridKind::Spatial) throw DomainError("twisted_solve needs a spatial grid");
  f.check_finite();
  const double h = f.axis(0).step;
  if (std::abs(f.axis(1).step - h) > 1e-15 * h) throw DomainError("twisted_solve needs a square lattice");

  TwistedSolution out{f.zeros_like(), "square-cell integral", 0.0, 0.0};
  // int over the cell [-h/2, h/2]^2 of g, in polar coordinates.
  auto ray = [h](double th) { return twisted_green_moment(0.5 * h / std::cos(th)); };
  out.center_weight =
      8.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(ray, 0.0, M_PI / 4, 12, 1e-13);
  out.disc_weight = 2.0 * M_PI * twisted_green_moment(0.5 * h);

  // G[a * N + b] = h^2 g(h |(a, b)|) for a, b >= 0.
  std::vector<double> G(std::size_t(N) * N);
  parallel_for(G.size(), [&](std::size_t k) {
    int a = int(k / N), b = int(k % N);
    G[k] = (a == 0 && b == 0) ? out.center_weight : h * h * twisted_green(h * std::hypot(a, b));
  });

  std::vector<double> x(N), y(N);
  for (int i = 0; i < N; ++i) {
    x[i] = f.axis(0).coord(i);
    y[i] = f.axis(1).coord(i);
  }
  const cplx I(0.0, 1.0);
  // e^{-i y_j x_i' / 2}
  std::vector<cplx> E(std::size_t(N) * N);
  for (int j = 0; j < N; ++j)
    for (int ip = 0; ip < N; ++ip) E[std::size_t(j) * N + ip] = std::exp(-0.5 * I * y[j] * x[ip]);

  parallel_for(N, [&](std::size_t i) {
    // F[i'][j'] = e^{i x_i y_j' / 2} f(i', j')
    std::vector<cplx> F(std::size_t(N) * N);
    for (int jp = 0; jp < N; ++jp) {
      cplx ph = std::exp(0.5 * I * x[i] * y[jp]);
      for (int ip = 0; ip < N; ++ip) F[std::size_t(ip) * N + jp] = ph * f(ip, jp);
    }
    for (int j = 0; j < N; ++j) {
      cplx acc = 0.0;
      for (int ip = 0; ip < N; ++ip) {
        const double* Grow = &G[std::size_t(std::abs(int(i) - ip)) * N];
        const cplx* Frow = &F[std::size_t(ip) * N];
        cplx inner = 0.0;
        for (int jp = 0; jp < N; ++jp) inner += Grow[std::abs(j - jp)] * Frow[jp];
        acc += E[std::size_t(j) * N + ip] * inner;
      }
      out.u(int(i), j) = acc;
    }
  });
  return out;
}

SolveReport twisted_solve_gaussian(int N, double L) {
  Grid2 f = Grid2::sample(N, L, [](double x, double y) { return std::exp(-(x * x + y * y) / 2.0); });
  TwistedSolution sol = twisted_solve(f);
  Grid2 Lu = apply_op(twisted_laplacian(), sol.u);
  SolveReport r;
  r.N = N;
  r.L = L;
  r.residual = l2_norm(Lu - f) / l2_norm(f);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double z = std::hypot(f.axis(0).coord(i), f.axis(1).coord(j));
      r.decay_sup = std::max(r.decay_sup, std::sqrt(1.0 + z) * std::abs(sol.u(i, j)));
    }
  r.center_rule = sol.center_rule;
  r.center_weight = sol.center_weight;
  r.disc_weight = sol.disc_weight;
  return r;
}

json to_json(const SolveReport& r) {
  return {{"N", r.N},
          {"L", r.L},
          {"f", "exp(-(x^2+y^2)/2)"},
          {"residual", r.residual},
          {"decay_sup", r.decay_sup},
          {"center_rule", r.center_rule},
          {"center_weight", r.center_weight},
          {"disc_weight", r.disc_weight}};
}

// Catalog.

namespace {

// Reads an operator in a single generator as a polynomial in one indeterminate.
Poly2 single_variable(const WeylOp& op, int gen, int axis, bool real, const std::string& what) {
  Poly2 p;
  for (const auto& [k, c] : op.terms()) {
    for (int g = 0; g < 4; ++g)
      if (g != gen && k[g] != 0) throw DomainError(what + " may only contain " + std::string(gen == 0 ? "x" : gen == 2 ? "Dx" : "Dy"));
    if (real && c.imag() != 0.0) throw DomainError(what + " must have real coefficients");
    p.add_term(axis == 0 ? k[gen] : 0, axis == 1 ? k[gen] : 0, c);
  }
  return p;
}

Poly2 integrate(const Poly2& p, int axis) {
  Poly2 out;
  for (const auto& [k, c] : p.terms()) {
    int e = k[axis] + 1;
    out.add_term(axis == 0 ? e : k[0], axis == 1 ? e : k[1], c / double(e));
  }
  return out;
}

const WeylOp I_ = WeylOp::identity();
const WeylOp M1 = WeylOp::M1(), M2 = WeylOp::M2(), D1 = WeylOp::D1(), D2 = WeylOp::D2();

WeylOp sq(const WeylOp& a) { return a * a; }

NamedExample ho_family(const std::string& name, const ExampleArgs& args) {
  Poly2 Q = single_variable(parse_weyl(args.Q), 2, 0, true, "Q");
  Poly2 R = single_variable(parse_weyl(args.R), 3, 1, true, "R");
  NamedExample e;
  e.name = name;
  e.params = {{"Q", format_poly(Q)}, {"R", format_poly(R)}};
  e.base = sq(M1) + sq(D1);
  WeylOp q = eval_at(Q, D1, D2), r = eval_at(R, D1, D2);
  Poly2 P = -integrate(Q, 0) - integrate(R, 1);
  if (name == "HO2") {
    e.form = sq(M1 - 0.5 * D2 + q) + sq(M2 + 0.5 * D1 + r);
    e.notes = "transformed harmonic oscillator, P = P1(xi) + P2(eta); regular";
  } else {
    P += Poly2::monomial(1, 1, 0.5);
    e.form = sq(M1 - D2 + q) + sq(M2 + r);
    e.notes = "transformed harmonic oscillator, P = xi eta / 2 + P1(xi) + P2(eta); regular";
  }
  e.kernel = make_kernel(P, Poly2::constant(1.0));
  return e;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"ex1", "HO1", "HO2", "HO3", "twisted", "harmonic2d", "airy"};
}

NamedExample make_example(const std::string& name, const ExampleArgs& args) {
  NamedExample e;
  if (name == "ex1") {
    Poly2 b = single_variable(parse_weyl(args.b), 0, 0, false, "b");
    if (b.degree() < 0 || b.is_zero()) throw DomainError("b must be nonzero");
    Poly2 P = parse_poly2(args.P);
    e.name = name;
    e.params = {{"b", format_poly(b)}, {"P", format_poly(P)}};
    e.base = eval_at(b, M1, I_);
    e.form = eval_at(b, M1 + eval_at(P, D1, D2), I_);
    e.kernel = make_kernel(-integrate(P, 0) - Poly2::monomial(1, 1, 0.5), Poly2::constant(1.0));
    ZeroProbe z = probe_zero(b);
    e.condition = "b has no real zeros";
    e.condition_holds = z.min_abs > 1e-9;
    e.notes = "b(x + P(Dx, Dy)) as the transform of multiplication by b; regular when b has no real zeros";
    return e;
  }
  if (name == "HO1") {
    Poly2 P = parse_poly2(args.P);
    e.name = name;
    e.params = {{"P", format_poly(P)}};
    e.kernel = make_kernel(P, Poly2::constant(1.0));
    WeylOp p1 = eval_at(e.kernel.P1(), D1, D2), p2 = eval_at(e.kernel.P2(), D1, D2);
    e.base = sq(M1) + sq(D1);
    e.form = sq(M1 - 0.5 * D2 - p1) + sq(M2 + 0.5 * D1 - p2);
    e.notes = "transformed harmonic oscillator x^2 + Dx^2; regular for every real P";
    return e;
  }
  if (name == "HO2" || name == "HO3") return ho_family(name, args);
  if (name == "twisted") {
    e.name = name;
    e.params = json::object();
    e.base = sq(0.75 * D1 + 1.25 * D2) + sq(-0.75 * M1 + 1.25 * M2);
    e.kernel = make_kernel(Poly2(), Poly2::constant(1.0));
    e.form = twisted_laplacian();
    e.notes = "twisted Laplacian; regular but not globally hypoelliptic, the symbol vanishes on xi = y/2, eta = -x/2";
    return e;
  }
  if (name == "harmonic2d") {
    e.name = name;
    e.params = json::object();
    e.base = sq(0.5 * M1 + 0.5 * M2) + sq(0.5 * D1 - 0.5 * D2) + sq(D1 + D2) + sq(M2 - M1);
    e.kernel = make_kernel(Poly2(), Poly2::constant(1.0));
    e.form = sq(M1) + sq(M2) + sq(D1) + sq(D2);
    e.notes = "two-dimensional harmonic oscillator; globally hypoelliptic with m' = 2";
    return e;
  }
  if (name == "airy") {
    if (args.m < 1) throw DomainError("airy: m must be >= 1");
    if (!std::isfinite(args.alpha.real()) || !std::isfinite(args.alpha.imag()))
      throw DomainError("airy: alpha must be finite");
    Poly2 P = parse_poly2(args.P);
    e.name = name;
    e.params = {{"alpha", {args.alpha.real(), args.alpha.imag()}}, {"m", args.m}, {"P", format_poly(P)}};
    e.kernel = make_kernel(P, Poly2::constant(1.0));
    WeylOp p1 = eval_at(e.kernel.P1(), D1, D2), p2 = eval_at(e.kernel.P2(), D1, D2);
    e.base = D1 + args.alpha * M1.pow(args.m);
    e.form = 0.5 * D1 + M2 - p2 + args.alpha * (M1 - 0.5 * D2 - p1).pow(args.m);
    e.condition = "(Im alpha)^m > 0";
    e.condition_holds = std::pow(args.alpha.imag(), args.m) > 0.0;
    e.notes = "transform of Dx + alpha x^m; regular in Schwartz spaces when (Im alpha)^m > 0 (recorded, not tested)";
    return e;
  }
  throw DomainError("unknown catalog entry '" + name + "'");
}

std::vector<NamedExample> catalog() {
  std::vector<NamedExample> out;
  ExampleArgs ex1;
  ex1.P = "xi*eta";
  for (const std::string& n : catalog_names()) out.push_back(make_example(n, n == "ex1" ? ex1 : ExampleArgs{}));
  return out;
}

bool tilde_reproduces(const NamedExample& e) { return tilde_transform(e.base, e.kernel) == e.form; }

bool dsl_round_trips(const NamedExample& e) { return parse_weyl(format_op(e.form)) == e.form; }

json to_json(const NamedExample& e) {
  json j;
  j["name"] = e.name;
  j["params"] = e.params;
  j["base"] = format_op(e.base);
  j["kernel"] = {{"P", format_poly(e.kernel.P)}, {"q", format_poly(e.kernel.q)}};
  j["form"] = format_op(e.form);
  j["form_terms"] = to_json(e.form);
  j["symbol"] = format_symbol(symbol_of(e.form));
  j["notes"] = e.notes;
  if (!e.condition.empty()) {
    j["condition"] = e.condition;
    j["condition_holds"] = e.condition_holds;
  }
  j["tilde_reproduces"] = tilde_reproduces(e);
  j["dsl_round_trips"] = dsl_round_trips(e);
  return j;
}

}  // namespace wck
