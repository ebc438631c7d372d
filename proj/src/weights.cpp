#include "wck/weights.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "wck/error.hpp"
#include "wck/parallel.hpp"

namespace wck {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double log1pexp(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double parse_param(const std::string& text, const std::string& id) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    throw DomainError("bad parameter in weight id '" + id + "'");
  return v;
}

// Maximizes a unimodal f on [a, b] by golden-section search; returns the best
// value seen, endpoints included.
template <class F>
double golden_max(F f, double a, double b, double tol) {
  double best = std::max(f(a), f(b));
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
    if (x1 == x2) break;
  }
  return std::max({best, f1, f2});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

WeightFunction WeightFunction::classical() { return {WeightKind::Classical, 0.0}; }

WeightFunction WeightFunction::gevrey(double s) {
  if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("gevrey weight requires s > 1");
  return {WeightKind::Gevrey, s};
}

WeightFunction WeightFunction::powerlog(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw DomainError("powerlog weight requires beta > 1");
  return {WeightKind::PowerLog, beta};
}

WeightFunction WeightFunction::linear() { return {WeightKind::Linear, 0.0}; }
WeightFunction WeightFunction::affine() { return {WeightKind::Affine, 0.0}; }

WeightFunction WeightFunction::from_id(const std::string& id) {
  const std::string prefix = "normalized:";
  if (id.rfind(prefix, 0) == 0) return from_id(id.substr(prefix.size())).normalized();
  if (id == "classical") return classical();
  if (id == "linear") return linear();
  if (id == "affine") return affine();
  if (id.rfind("gevrey:", 0) == 0) return gevrey(parse_param(id.substr(7), id));
  if (id.rfind("powerlog:", 0) == 0) return powerlog(parse_param(id.substr(9), id));
  throw DomainError("unknown weight id '" + id + "'");
}

WeightFunction WeightFunction::normalized() const {
  WeightFunction w = *this;
  w.normalized_ = true;
  return w;
}

WeightFunction WeightFunction::base() const {
  WeightFunction w = *this;
  w.normalized_ = false;
  return w;
}

std::string WeightFunction::id() const {
  std::string base;
  switch (kind_) {
    case WeightKind::Classical: base = "classical"; break;
    case WeightKind::Gevrey: base = "gevrey:" + fmt(param_); break;
    case WeightKind::PowerLog: base = "powerlog:" + fmt(param_); break;
    case WeightKind::Linear: base = "linear"; break;
    case WeightKind::Affine: base = "affine"; break;
  }
  return normalized_ ? "normalized:" + base : base;
}

double WeightFunction::phi_raw(double t) const {
  switch (kind_) {
    case WeightKind::Classical: return log1pexp(t);
    case WeightKind::Gevrey: return std::exp(t / param_);
    case WeightKind::PowerLog: return std::pow(log1pexp(t), param_);
    case WeightKind::Linear: return std::exp(t);
    case WeightKind::Affine: return std::max(t, 0.0);
  }
  return 0.0;
}

double WeightFunction::phi_prime_raw(double t) const {
  switch (kind_) {
    case WeightKind::Classical: return 1.0 / (1.0 + std::exp(-t));
    case WeightKind::Gevrey: return std::exp(t / param_) / param_;
    case WeightKind::PowerLog:
      return param_ * std::pow(log1pexp(t), param_ - 1.0) / (1.0 + std::exp(-t));
    case WeightKind::Linear: return std::exp(t);
    case WeightKind::Affine: return t >= 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double WeightFunction::omega(double t) const {
  if (t < 0) throw DomainError("omega is defined on t >= 0");
  if (t == 0.0) return normalized_ ? 0.0 : phi_raw(-kInf);
  return phi(std::log(t));
}

double WeightFunction::phi(double t) const {
  if (!normalized_) return phi_raw(t);
  return std::max(0.0, phi_raw(t) - phi_raw(0.0));
}

double WeightFunction::phi_prime(double t) const {
  if (normalized_ && t < 0.0) return 0.0;
  return phi_prime_raw(t);
}

std::optional<double> WeightFunction::conjugate_closed_form(double s) const {
  std::optional<double> v;
  switch (kind_) {
    case WeightKind::Gevrey:
    case WeightKind::Linear: {
      double sig = kind_ == WeightKind::Gevrey ? param_ : 1.0;
      double x = sig * s;
      v = x >= 1.0 ? x * std::log(x) - x : -1.0;
      break;
    }
    case WeightKind::Classical:
      if (s > 1.0)
        v = kInf;
      else if (s == 1.0)
        v = 0.0;
      else if (s >= 0.5)
        v = s * std::log(s) + (1.0 - s) * std::log1p(-s);
      else
        v = -std::log(2.0);
      break;
    case WeightKind::Affine: v = s <= 1.0 ? 0.0 : kInf; break;
    case WeightKind::PowerLog: return std::nullopt;
  }
  if (normalized_ && std::isfinite(*v)) *v += phi_raw(0.0);
  return v;
}

std::vector<WeightFunction> builtin_weights() {
  return {WeightFunction::classical(), WeightFunction::gevrey(2.0), WeightFunction::powerlog(1.5)};
}

double young_conjugate(const WeightFunction& wf, double s) {
  if (!(s >= 0.0) || std::isinf(s)) throw DomainError("young_conjugate requires finite s >= 0");
  // t -> s t - phi(t) is concave, so the sign of its right derivative locates the maximum.
  if (s <= wf.phi_prime(0.0)) return 0.0 - wf.phi(0.0);
  if (s > wf.phi_prime(kConjugateCeiling)) return kInf;
  double lo = 0.0, hi = 1.0;
  while (hi < kConjugateCeiling && wf.phi_prime(hi) < s) {
    lo = hi;
    hi = std::min(2.0 * hi, kConjugateCeiling);
  }
  return golden_max([&](double t) { return s * t - wf.phi(t); }, lo, hi, 1e-10);
}

double biconjugate(const WeightFunction& wf, double t) {
  if (!(t >= 0.0)) throw DomainError("biconjugate requires t >= 0");
  const double s_hi = wf.phi_prime(std::min(t + 1.0, kConjugateCeiling));
  auto f = [&](double s) { return s * t - young_conjugate(wf, s); };
  const int n = 64;
  int best = 0;
  double best_v = -kInf;
  for (int i = 0; i <= n; ++i) {
    double v = f(s_hi * i / n);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = s_hi * std::max(best - 1, 0) / n, b = s_hi * std::min(best + 1, n) / n;
  return std::max(best_v, golden_max(f, a, b, 1e-12 * std::max(1.0, s_hi)));
}

BiconjugateReport biconjugate_check(const WeightFunction& wf, double t_max, int samples) {
  if (samples < 2 || !(t_max > 0)) throw DomainError("biconjugate_check needs samples >= 2, t_max > 0");
  std::vector<double> gap(samples);
  parallel_for(samples, [&](std::size_t i) {
    double t = t_max * double(i) / (samples - 1);
    gap[i] = std::abs(biconjugate(wf, t) - wf.phi(t));
  });
  BiconjugateReport r;
  for (int i = 0; i < samples; ++i) {
    if (gap[i] > r.max_gap) {
      r.max_gap = gap[i];
      r.worst_t = t_max * double(i) / (samples - 1);
    }
  }
  return r;
}

namespace {

// Tail of int_T^inf omega(t)/t^2 dt for the builtin weights.
double analytic_tail(const WeightFunction& wf, double T) {
  const double w1 = wf.is_normalized() ? wf.base().omega(1.0) : 0.0;
  double raw = 0.0;
  switch (wf.kind()) {
    case WeightKind::Classical: raw = std::log1p(T) / T + std::log1p(1.0 / T); break;
    case WeightKind::Gevrey: {
      double e = 1.0 / wf.param();
      raw = std::pow(T, e - 1.0) / (1.0 - e);
      break;
    }
    case WeightKind::PowerLog:
      raw = boost::math::tgamma(wf.param() + 1.0, std::log(T));
      break;
    case WeightKind::Linear: return kInf;
    case WeightKind::Affine: raw = (std::log(T) + 1.0) / T; break;
  }
  return raw - w1 / T;
}

// lim_{t -> inf} omega(c t) / omega(t) for the builtin families.
double ratio_limit(const WeightFunction& wf, double c) {
  switch (wf.kind()) {
    case WeightKind::Gevrey: return std::pow(c, 1.0 / wf.param());
    case WeightKind::Linear: return c;
    default: return 1.0;
  }
}

}  // namespace

ConditionReport check_conditions(const WeightFunction& wf, double t_max, int samples) {
  if (!(t_max >= 1e3) || samples < 1000)
    throw DomainError("check_conditions requires t_max >= 1e3 and samples >= 1e3");
  ConditionReport r;
  r.weight = wf.id();
  r.t_max = t_max;
  r.samples = samples;

  std::vector<double> ts{0.0};
  const double l0 = -3.0, l1 = std::log10(t_max);
  for (int i = 0; i < samples - 1; ++i) ts.push_back(std::pow(10.0, l0 + (l1 - l0) * i / (samples - 2)));

  // (alpha) and D; the ratios approach their limits from below, so the
  // t -> inf limit is part of the supremum.
  double L = std::max(1.0, ratio_limit(wf, 2.0)), D = std::max(1.0, ratio_limit(wf, std::exp(1.0)));
  r.alpha.witness = kInf;
  for (double t : ts) {
    double ratio = wf.omega(2 * t) / (wf.omega(t) + 1.0);
    if (!(ratio <= L)) {
      L = ratio;
      r.alpha.witness = t;
    }
    D = std::max(D, wf.omega(std::exp(1.0) * t) / (wf.omega(t) + 1.0));
  }
  r.alpha.value = L;
  r.alpha.pass = std::isfinite(L);
  r.alpha.note = "smallest L >= 1 over the sample ladder and the t -> inf limit";
  r.D = D;

  // (beta): int_1^{t_max} omega(t)/t^2 dt = int_0^{log t_max} phi(u) e^{-u} du
  using boost::math::quadrature::gauss_kronrod;
  double head = gauss_kronrod<double, 31>::integrate(
      [&](double u) { return wf.phi(u) * std::exp(-u); }, 0.0, std::log(t_max), 15, 1e-12);
  double tail = analytic_tail(wf, t_max);
  r.beta.value = head + tail;
  r.beta.pass = std::isfinite(tail);
  r.beta.witness = t_max;
  r.beta.note = r.beta.pass ? "numeric integral to t_max plus analytic tail"
                            : "tail diverges; partial integral to t_max is " + fmt(head);
  if (!r.beta.pass) r.beta.value = head;

  // (gamma)
  double b = kInf;
  for (double t : ts) {
    if (t < std::exp(1.0) - 1.0) continue;
    double v = wf.omega(t) / std::log1p(t);
    if (v < b) {
      b = v;
      r.gamma.witness = t;
    }
  }
  double a = kInf;
  for (double t : ts) a = std::min(a, wf.omega(t) - b * std::log1p(t));
  r.gamma.value = b;
  r.a = a;
  r.gamma.pass = b > 0 && std::isfinite(b) && std::isfinite(a);
  r.gamma.note = "b = min omega(t)/log(1+t) over t >= e-1; a = min(omega - b log(1+t))";

  // (delta): second differences of phi on a uniform ladder in log t
  const double u0 = -10.0, u1 = std::log(t_max);
  const double h = (u1 - u0) / (samples - 1);
  double min_d2 = kInf;
  bool convex = true;
  for (int i = 1; i < samples - 1; ++i) {
    double u = u0 + i * h;
    double pm = wf.phi(u - h), p0 = wf.phi(u), pp = wf.phi(u + h);
    double d2 = pm - 2 * p0 + pp;
    if (d2 < min_d2) {
      min_d2 = d2;
      r.delta.witness = u;
    }
    if (d2 < -1e-12 * (std::abs(pm) + 2 * std::abs(p0) + std::abs(pp))) convex = false;
  }
  r.delta.value = min_d2;
  r.delta.pass = convex;
  r.delta.note = "second differences of phi(u) = omega(e^u), u in [-10, log t_max]";
  return r;
}

json to_json(const ConditionReport& r) {
  auto cond = [](const ConditionVerdict& c) {
    return json{{"pass", c.pass}, {"value", number_or_inf(c.value)}, {"witness", number_or_inf(c.witness)},
                {"note", c.note}};
  };
  json ja = cond(r.alpha), jb = cond(r.beta), jg = cond(r.gamma), jd = cond(r.delta);
  ja["L"] = r.alpha.value;
  jg["a"] = r.a;
  jg["b"] = r.gamma.value;
  return json{{"weight", r.weight},
              {"t_max", r.t_max},
              {"samples", r.samples},
              {"alpha", ja},
              {"beta", jb},
              {"gamma", jg},
              {"delta", jd},
              {"D", r.D},
              {"all_pass", r.all_pass()}};
}

json to_json(const LemmaReport& r) {
  return json{{"lemma", r.name},
              {"weight", r.weight},
              {"normalized", r.normalized},
              {"trials", r.trials},
              {"seed", r.seed},
              {"violations", r.violations},
              {"worst_margin", number_or_inf(r.worst_margin)},
              {"first_violation", r.first_violation},
              {"slack", kLemmaSlack},
              {"pass", r.pass()}};
}

json to_json(const RhoReport& r) {
  return json{{"pass", r.pass},
              {"first_violation", r.first_violation},
              {"D", r.D},
              {"lambda_prime", r.lambda_prime},
              {"log_Lambda", r.log_Lambda}};
}

json to_json(const FactorialReport& r) {
  return json{{"pass", r.pass},
              {"log_C", number_or_inf(r.log_C)},
              {"C", number_or_inf(std::exp(r.log_C))},
              {"argmax", r.argmax},
              {"finite_terms", r.finite_terms}};
}

namespace {

struct Outcome {
  double margin = -kInf;
  std::string where;
};

void collect(LemmaReport& rep, const std::vector<Outcome>& out) {
  rep.worst_margin = -kInf;
  for (const auto& o : out) {
    rep.worst_margin = std::max(rep.worst_margin, o.margin);
    if (o.margin > kLemmaSlack) {
      if (rep.violations == 0) rep.first_violation = o.where;
      ++rep.violations;
    }
  }
}

// Minimum over integer j in [lo, hi] of a convex f.
template <class F>
double convex_int_min(F f, int lo, int hi) {
  while (hi - lo > 2) {
    int m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (f(m1) < f(m2))
      hi = m2;
    else
      lo = m1;
  }
  double m = kInf;
  for (int j = lo; j <= hi; ++j) m = std::min(m, f(j));
  return m;
}

}  // namespace

LemmaReport check_lemma_lt(const WeightFunction& wf, int trials, std::uint64_t seed) {
  ConditionReport cr = check_conditions(wf);
  const double a = cr.a, b = cr.gamma.value;
  LemmaReport rep;
  rep.name = "lemma-lt";
  rep.weight = wf.id();
  rep.normalized = wf.is_normalized();
  rep.trials = trials;
  rep.seed = seed;

  struct Trial {
    double t, lambda;
    int k;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> kd(1, 60);
  std::vector<Trial> ts(trials);
  for (auto& tr : ts) {
    tr.t = std::pow(10.0, 3.0 * u01(rng));
    tr.k = kd(rng);
    tr.lambda = std::pow(10.0, -1.0 + 2.0 * u01(rng));
  }
  const double s_dom = wf.phi_prime(kConjugateCeiling);

  std::vector<Outcome> out(trials);
  parallel_for(trials, [&](std::size_t i) {
    const Trial& tr = ts[i];
    const double lt = std::log(tr.t), om = wf.omega(tr.t);
    std::string at = "t=" + fmt(tr.t) + " k=" + std::to_string(tr.k) + " lambda=" + fmt(tr.lambda);
    // (i)
    double ps = young_conjugate(wf, tr.k / tr.lambda);
    if (std::isfinite(ps)) {
      double m = (tr.k * lt - tr.lambda * om) - tr.lambda * ps;
      if (m > out[i].margin) out[i] = {m, "(i) " + at};
    }
    // (ii)
    int j_hi = 400;
    if (std::isfinite(s_dom)) j_hi = int(std::min(400.0, std::floor(tr.lambda * s_dom)));
    while (j_hi > 0 && !std::isfinite(young_conjugate(wf, j_hi / tr.lambda))) --j_hi;
    double lhs = convex_int_min(
        [&](int j) { return -j * lt + tr.lambda * young_conjugate(wf, j / tr.lambda); }, 0, j_hi);
    double rhs = -(tr.lambda - 1.0 / b) * om - a / b;
    double m = lhs - rhs;
    if (m > out[i].margin) out[i] = {m, "(ii) " + at};
  });
  collect(rep, out);
  return rep;
}

namespace {

struct RhoSetup {
  WeightFunction w;
  double D;
};

RhoSetup rho_setup(const WeightFunction& wf) {
  WeightFunction w = wf.is_normalized() ? wf : wf.normalized();
  return {w, check_conditions(w).D};
}

// lhs - rhs in log space; -inf when the right side is infinite.
double rho_margin(const WeightFunction& w, double D, double rho, double lambda, int j,
                  double* lambda_prime, double* log_Lambda) {
  const double n = std::floor(std::log(rho) + 1.0);
  const double lp = lambda / std::pow(D, n);
  if (lambda_prime) *lambda_prime = lp;
  if (log_Lambda) *log_Lambda = lambda * n;
  double rhs_c = young_conjugate(w, j / lp);
  if (std::isinf(rhs_c)) return -kInf;
  double lhs_c = young_conjugate(w, j / lambda);
  if (std::isinf(lhs_c)) return kInf;
  return (j * std::log(rho) + lambda * lhs_c) - (lambda * n + lp * rhs_c);
}

}  // namespace

RhoReport check_rho_lemma(const WeightFunction& wf, double rho, double lambda, int j_max) {
  if (!(rho > 0) || !(lambda > 0) || j_max < 0)
    throw DomainError("check_rho_lemma requires rho > 0, lambda > 0, j_max >= 0");
  RhoSetup st = rho_setup(wf);
  RhoReport r;
  r.D = st.D;
  for (int j = 0; j <= j_max; ++j) {
    double m = rho_margin(st.w, st.D, rho, lambda, j, &r.lambda_prime, &r.log_Lambda);
    if (m > kLemmaSlack) {
      r.pass = false;
      r.first_violation = j;
      break;
    }
  }
  return r;
}

LemmaReport check_rho_lemma_random(const WeightFunction& wf, int trials, std::uint64_t seed) {
  RhoSetup st = rho_setup(wf);
  LemmaReport rep;
  rep.name = "lemma-rho";
  rep.weight = st.w.id();
  rep.normalized = true;
  rep.trials = trials;
  rep.seed = seed;
  struct Trial {
    double rho, lambda;
    int j;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> jd(0, 200);
  std::vector<Trial> ts(trials);
  for (auto& tr : ts) {
    tr.rho = std::pow(10.0, u01(rng));
    tr.lambda = std::pow(10.0, -1.0 + 2.0 * u01(rng));
    tr.j = jd(rng);
  }
  std::vector<Outcome> out(trials);
  parallel_for(trials, [&](std::size_t i) {
    const Trial& tr = ts[i];
    double m = rho_margin(st.w, st.D, tr.rho, tr.lambda, tr.j, nullptr, nullptr);
    out[i] = {m, "rho=" + fmt(tr.rho) + " lambda=" + fmt(tr.lambda) + " j=" + std::to_string(tr.j)};
  });
  collect(rep, out);
  return rep;
}

FactorialReport check_factorial_bound(const WeightFunction& wf, double lambda, int n_max) {
  if (!(lambda > 0) || n_max < 0) throw DomainError("check_factorial_bound requires lambda > 0, n_max >= 0");
  FactorialReport r;
  r.log_C = -kInf;
  for (int n = 0; n <= n_max; ++n) {
    double c = young_conjugate(wf, n / lambda);
    if (std::isinf(c)) continue;
    ++r.finite_terms;
    double v = std::lgamma(n + 1.0) - lambda * c;
    if (v > r.log_C) {
      r.log_C = v;
      r.argmax = n;
    }
  }
  r.pass = r.finite_terms > 0 && std::isfinite(r.log_C);
  return r;
}

}  // namespace wck
