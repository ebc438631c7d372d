#include "wck/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>

#include "wck/error.hpp"
#include "wck/parallel.hpp"

namespace wck {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEnvelopeExact = 1e-16;
constexpr double kEnvelopeGrid = 1e-12;
constexpr double kStableGrowth = 1e-3;
const double kBoxes[] = {4.0, 8.0, 16.0, 32.0, 64.0};

struct Sup {
  double value = 0.0;
  bool converged = true;
  double box = 0.0;
};

// Dense p(x, y) exp(q(x, y)) evaluator.
struct DenseEval {
  std::vector<std::vector<cplx>> c;  // c[i][j] x^i y^j
  Quadratic q;

  explicit DenseEval(const PolyGauss& f) : q(f.quad()) {
    int dx = f.poly().degree_in(0), dy = f.poly().degree_in(1);
    c.assign(std::max(dx, 0) + 1, std::vector<cplx>(std::max(dy, 0) + 1, 0.0));
    for (const auto& [k, v] : f.poly().terms()) c[k[0]][k[1]] = v;
  }
  double abs(double x, double y) const {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      cplx row = 0.0;
      for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * y + *jt;
      acc = acc * x + row;
    }
    if (acc == 0.0) return 0.0;
    return std::abs(acc) * std::exp(q(x, y).real());
  }
};

// Adaptive square box: 65 x 65 samples on [-R, R]^2, doubled until the
// boundary ring is below kEnvelopeExact of the maximum, then zoomed in on the
// best sample.
Sup sup2(const std::function<double(double, double)>& f) {
  const int n = 65;
  Sup s;
  double bx = 0.0, by = 0.0;
  for (double R : kBoxes) {
    double h = 2.0 * R / (n - 1), m = 0.0, ring = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = -R + i * h;
      for (int j = 0; j < n; ++j) {
        double y = -R + j * h;
        double v = f(x, y);
        if (!std::isfinite(v)) v = kInf;
        if (v > m) {
          m = v;
          bx = x;
          by = y;
        }
        if (i == 0 || j == 0 || i == n - 1 || j == n - 1) ring = std::max(ring, v);
      }
    }
    s.value = m;
    s.box = R;
    s.converged = ring <= kEnvelopeExact * m || m == 0.0;
    if (s.converged) break;
  }
  if (!std::isfinite(s.value) || s.value == 0.0) return s;
  double h = 2.0 * s.box / (n - 1);
  for (int round = 0; round < 6; ++round) {
    const int z = 17;
    double cx = bx, cy = by;
    for (int i = 0; i < z; ++i)
      for (int j = 0; j < z; ++j) {
        double x = cx - h + 2.0 * h * i / (z - 1), y = cy - h + 2.0 * h * j / (z - 1);
        double v = f(x, y);
        if (v > s.value) {
          s.value = v;
          bx = x;
          by = y;
        }
      }
    h /= 8.0;
  }
  return s;
}

// 1-D factor p(x) exp(-a x^2 / 2 + b x + c).
struct Gauss1 {
  std::vector<cplx> p;
  cplx a, b, c;

  Gauss1 derivative() const {  // D = -i d/dx
    std::vector<cplx> r(p.size() + 1, 0.0);
    for (std::size_t k = 1; k < p.size(); ++k) r[k - 1] += double(k) * p[k];
    for (std::size_t k = 0; k < p.size(); ++k) {
      r[k + 1] += -a * p[k];
      r[k] += b * p[k];
    }
    for (cplx& v : r) v *= cplx(0.0, -1.0);
    return {r, a, b, c};
  }
  Gauss1 times_x(int m) const {
    std::vector<cplx> r(p.size() + m, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) r[k + m] = p[k];
    return {r, a, b, c};
  }
  double abs(double x) const {
    cplx acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    if (acc == 0.0) return 0.0;
    return std::abs(acc) * std::exp((-0.5 * a * x * x + b * x + c).real());
  }
};

Sup sup1(const Gauss1& g) {
  const int n = 4097;
  Sup s;
  double bx = 0.0;
  for (double R : kBoxes) {
    double h = 2.0 * R / (n - 1), m = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = -R + i * h, v = g.abs(x);
      if (v > m) {
        m = v;
        bx = x;
      }
    }
    double ring = std::max(g.abs(-R), g.abs(R));
    s.value = m;
    s.box = R;
    s.converged = ring <= kEnvelopeExact * m || m == 0.0;
    if (s.converged) break;
  }
  double h = 2.0 * s.box / (n - 1);
  for (int round = 0; round < 6; ++round) {
    const int z = 33;
    double cx = bx;
    for (int i = 0; i < z; ++i) {
      double x = cx - h + 2.0 * h * i / (z - 1), v = g.abs(x);
      if (v > s.value) {
        s.value = v;
        bx = x;
      }
    }
    h /= 16.0;
  }
  return s;
}

// Splits f = f1(x) f2(y) when the exponent has no cross term and the
// polynomial has rank one.
bool split(const PolyGauss& f, Gauss1& f1, Gauss1& f2) {
  const Quadratic& q = f.quad();
  if (q.A[0][1] != 0.0 || f.poly().is_zero()) return false;
  Poly2::Key piv{0, 0};
  double best = -1.0;
  for (const auto& [k, v] : f.poly().terms())
    if (std::abs(v) > best) {
      best = std::abs(v);
      piv = k;
    }
  const cplx pv = f.poly().coeff(piv[0], piv[1]);
  int dx = f.poly().degree_in(0), dy = f.poly().degree_in(1);
  std::vector<cplx> p1(dx + 1), p2(dy + 1);
  for (int i = 0; i <= dx; ++i) p1[i] = f.poly().coeff(i, piv[1]);
  for (int j = 0; j <= dy; ++j) p2[j] = f.poly().coeff(piv[0], j) / pv;
  for (int i = 0; i <= dx; ++i)
    for (int j = 0; j <= dy; ++j)
      if (std::abs(f.poly().coeff(i, j) - p1[i] * p2[j]) > 1e-14 * best) return false;
  f1 = {p1, q.A[0][0], q.b[0], q.c};
  f2 = {p2, q.A[1][1], q.b[1], 0.0};
  return true;
}

// Backend interface: sup of weight(|v|) |x^beta D^alpha u| over v = x, or of
// weight(|v|) |F[x^beta D^alpha u]| over v = xi.
struct Source {
  virtual ~Source() = default;
  virtual Sup sup(std::array<int, 2> alpha, std::array<int, 2> beta, bool fourier,
                  const std::function<double(double)>* weight) = 0;
};

WeylOp mono(std::array<int, 2> alpha, std::array<int, 2> beta) {
  return WeylOp::monomial({beta[0], beta[1], alpha[0], alpha[1]});
}

struct ExactSource : Source {
  PolyGauss u;
  bool separable;
  Gauss1 f1, f2;
  std::mutex mu;
  std::map<std::array<int, 3>, Sup> cache;  // (axis, a, b)

  explicit ExactSource(const PolyGauss& f) : u(f) { separable = split(f, f1, f2); }

  Sup factor(int axis, int a, int b) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find({axis, a, b});
      if (it != cache.end()) return it->second;
    }
    Gauss1 g = axis == 0 ? f1 : f2;
    for (int t = 0; t < a; ++t) g = g.derivative();
    Sup s = sup1(g.times_x(b));
    std::lock_guard<std::mutex> lock(mu);
    cache[{axis, a, b}] = s;
    return s;
  }

  Sup sup(std::array<int, 2> alpha, std::array<int, 2> beta, bool fourier,
          const std::function<double(double)>* weight) override {
    if (!fourier && !weight && separable) {
      Sup a = factor(0, alpha[0], beta[0]), b = factor(1, alpha[1], beta[1]);
      return {a.value * b.value, a.converged && b.converged, std::max(a.box, b.box)};
    }
    PolyGauss g = apply_op_exact(mono(alpha, beta), u);
    if (fourier) g = fourier_exact(g);
    DenseEval e(g);
    if (!weight) return sup2([&](double x, double y) { return e.abs(x, y); });
    return sup2([&](double x, double y) { return (*weight)(std::hypot(x, y)) * e.abs(x, y); });
  }
};

struct GridSource : Source {
  Grid2 u;
  Grid2 F;
  explicit GridSource(const Grid2& g) : u(g), F(spectrum(g)) {}

  Sup sup(std::array<int, 2> alpha, std::array<int, 2> beta, bool fourier,
          const std::function<double(double)>* weight) override {
    const int N = u.N();
    Grid2 d = F;
    for (int a = 0; a < N; ++a) {
      double xa = std::pow(dft_frequency(a, N, u.axis(0).step), alpha[0]);
      for (int b = 0; b < N; ++b) d(a, b) *= xa * std::pow(dft_frequency(b, N, u.axis(1).step), alpha[1]);
    }
    d = from_spectrum(d);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        d(i, j) *= std::pow(u.axis(0).coord(i), beta[0]) * std::pow(u.axis(1).coord(j), beta[1]);
    Sup s;
    double m = 0.0, ring = 0.0;
    if (!fourier) {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          double x = u.axis(0).coord(i), y = u.axis(1).coord(j);
          double v = std::abs(d(i, j)) * (weight ? (*weight)(std::hypot(x, y)) : 1.0);
          m = std::max(m, v);
          if (i == 0 || j == 0 || i == N - 1 || j == N - 1) ring = std::max(ring, v);
        }
      s.box = u.L();
    } else {
      Grid2 S = spectrum(d);
      const double cell = u.axis(0).step * u.axis(1).step;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
          double xi = dft_frequency(a, N, u.axis(0).step), eta = dft_frequency(b, N, u.axis(1).step);
          double v = cell * std::abs(S(a, b)) * (weight ? (*weight)(std::hypot(xi, eta)) : 1.0);
          m = std::max(m, v);
          int wa = a < N / 2 ? a : a - N, wb = b < N / 2 ? b : b - N;
          if (std::max(std::abs(wa), std::abs(wb)) >= N / 2 - 1) ring = std::max(ring, v);
        }
      s.box = M_PI / u.axis(0).step;
    }
    s.value = m;
    s.converged = ring <= kEnvelopeGrid * m || m == 0.0;
    return s;
  }
};

int level(const SeminormEntry& e) { return e.alpha[0] + e.alpha[1] + e.beta[0] + e.beta[1]; }

std::vector<std::array<int, 2>> indices_of_order(int k) {
  std::vector<std::array<int, 2>> r;
  for (int a = 0; a <= k; ++a) r.push_back({a, k - a});
  return r;
}

// e^{-c phi*(n / c)}, 0 when phi* is infinite.
double conj_factor(const WeightFunction& wf, double c, int n) {
  double v = young_conjugate(wf, n / c);
  return std::isinf(v) ? 0.0 : std::exp(-c * v);
}

SeminormReport run(Source& src, const WeightFunction& wf, int system, double lambda, double mu,
                   int K) {
  if (system < 1 || system > 6) throw DomainError("seminorm system must be in 1..6");
  if (!(lambda > 0) || !(mu > 0)) throw DomainError("seminorm requires lambda, mu > 0");
  if (K < 0) throw DomainError("seminorm requires K >= 0");
  SeminormReport r;
  r.system = system;
  r.weight = wf.id();
  r.lambda = lambda;
  r.mu = mu;
  r.K = system == 3 ? 0 : K;

  struct Job {
    SeminormEntry e;
    bool fourier;
    bool weighted;
    double factor;
  };
  std::vector<Job> jobs;
  auto add = [&](std::array<int, 2> al, std::array<int, 2> be, bool fourier, bool weighted,
                 double factor, const char* part) {
    SeminormEntry e;
    e.alpha = al;
    e.beta = be;
    e.domain = fourier ? "xi" : "x";
    e.part = part;
    jobs.push_back({e, fourier, weighted, factor});
  };

  const int Kr = r.K;
  switch (system) {
    case 1:
      for (int k = 0; k <= Kr; ++k)
        for (auto al : indices_of_order(k)) {
          add(al, {0, 0}, false, true, 1.0, "i");
          add({0, 0}, al, true, true, 1.0, "ii");  // D^alpha u^ = +-F[x^alpha u]
        }
      break;
    case 2:
      for (int k = 0; k <= Kr; ++k)
        for (auto al : indices_of_order(k)) {
          add({0, 0}, al, false, true, 1.0, "i'");
          add(al, {0, 0}, true, true, 1.0, "ii'");  // xi^alpha u^ = F[D^alpha u]
        }
      break;
    case 3:
      add({0, 0}, {0, 0}, false, true, 1.0, "i''");
      add({0, 0}, {0, 0}, true, true, 1.0, "ii''");
      break;
    default:
      for (int k = 0; k <= Kr; ++k)
        for (int ka = 0; ka <= k; ++ka)
          for (auto al : indices_of_order(ka))
            for (auto be : indices_of_order(k - ka)) {
              if (system == 6) {
                add(al, be, false, false, conj_factor(wf, lambda, k), "");
              } else if (system == 5) {
                add(al, be, false, false, conj_factor(wf, lambda, ka) * conj_factor(wf, mu, k - ka),
                    "");
              } else {
                if (k - ka <= 2) add(al, be, false, false, conj_factor(wf, lambda, ka), "a");
                if (ka <= 2) add(al, be, false, false, conj_factor(wf, mu, k - ka), "b");
              }
            }
      break;
  }

  const std::function<double(double)> weight = [&](double rad) {
    return std::exp(lambda * wf.omega(rad));
  };
  std::vector<Sup> sups(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    if (j.factor == 0.0) return;  // e^{-inf}: the entry is 0 whatever the supremum
    sups[i] = src.sup(j.e.alpha, j.e.beta, j.fourier, j.weighted ? &weight : nullptr);
  });

  r.running_max.assign(Kr + 1, 0.0);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    SeminormEntry e = jobs[i].e;
    e.value = jobs[i].factor == 0.0 ? 0.0 : sups[i].value * jobs[i].factor;
    r.box_converged = r.box_converged && sups[i].converged;
    r.box = std::max(r.box, sups[i].box);
    int lv = std::min(level(e), Kr);
    r.running_max[lv] = std::max(r.running_max[lv], e.value);
    r.entries.push_back(e);
  }
  for (int k = 1; k <= Kr; ++k) r.running_max[k] = std::max(r.running_max[k], r.running_max[k - 1]);

  if (system >= 4) {
    double last = r.running_max[Kr], ref = r.running_max[(3 * Kr) / 4];
    r.ladder_stable = std::isfinite(last) && last <= (1.0 + kStableGrowth) * ref;
  }
  bool ok = r.box_converged && r.ladder_stable;
  r.verdict = ok ? "stabilized" : "growing";
  if (!r.ladder_stable) r.warning = "truncation: running maximum still growing at K";
  if (!r.box_converged)
    r.warning += std::string(r.warning.empty() ? "" : "; ") +
                 "supremum not confined: envelope above threshold at the box edge";
  return r;
}

}  // namespace

SeminormReport seminorm(const PolyGauss& u, const WeightFunction& wf, int system, double lambda,
                        double mu, int K, const std::string& label) {
  if (K > kMaxOrderExact) throw DomainError("K exceeds 40 for exact inputs");
  ExactSource src(u);
  SeminormReport r = run(src, wf, system, lambda, mu, K);
  r.input = label;
  r.backend = "exact";
  return r;
}

SeminormReport seminorm(const Grid2& u, const WeightFunction& wf, int system, double lambda,
                        double mu, int K, const std::string& label) {
  if (K > kMaxOrderGrid) throw DomainError("K exceeds 8 for grid inputs");
  if (u.kind() != GridKind::Spatial) throw DomainError("seminorm expects a spatial grid");
  GridSource src(u);
  SeminormReport r = run(src, wf, system, lambda, mu, K);
  r.input = label;
  r.backend = "grid";
  return r;
}

json to_json(const SeminormReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"alpha", e.alpha},
                       {"beta", e.beta},
                       {"domain", e.domain},
                       {"part", e.part},
                       {"value", e.value}});
  return json{{"system", r.system},   {"weight", r.weight},
              {"input", r.input},     {"backend", r.backend},
              {"lambda", r.lambda},   {"mu", r.mu},
              {"K", r.K},             {"box", r.box},
              {"box_converged", r.box_converged},
              {"ladder_stable", r.ladder_stable},
              {"running_max", r.running_max},
              {"verdict", r.verdict}, {"warning", r.warning},
              {"entries", entries}};
}

void write_csv(std::ostream& os, const SeminormReport& r) {
  os << "domain,part,alpha1,alpha2,beta1,beta2,value\n";
  os.precision(17);
  for (const auto& e : r.entries)
    os << e.domain << ',' << e.part << ',' << e.alpha[0] << ',' << e.alpha[1] << ',' << e.beta[0]
       << ',' << e.beta[1] << ',' << e.value << '\n';
}

PolyGauss seminorm_gaussian() { return PolyGauss::gaussian(); }

PolyGauss seminorm_xgaussian() { return PolyGauss::gaussian().with_poly(Poly2::var(0)); }

Grid2 seminorm_decoy() {
  return Grid2::sample(128, 16.0, [](double x, double y) { return cplx(1.0 / (1.0 + x * x + y * y)); });
}

}  // namespace wck
