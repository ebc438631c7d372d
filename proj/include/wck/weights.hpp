#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace wck {

enum class WeightKind { Classical, Gevrey, PowerLog, Linear, Affine };

// omega on [0, inf) and phi(t) = omega(e^t).
//   classical    log(1 + t)
//   gevrey:s     t^(1/s), s > 1
//   powerlog:b   log(1 + t)^b, b > 1
//   linear       t            (fails the integrability condition)
//   affine       log(max(t, 1)), i.e. phi(t) = t on t >= 0
// The normalized variant is max(0, omega(t) - omega(1)).
class WeightFunction {
 public:
  static WeightFunction classical();
  static WeightFunction gevrey(double s);
  static WeightFunction powerlog(double beta);
  static WeightFunction linear();
  static WeightFunction affine();
  // "classical", "gevrey:2", "powerlog:1.5", "linear", "affine", each
  // optionally prefixed with "normalized:". Throws DomainError.
  static WeightFunction from_id(const std::string& id);

  WeightFunction normalized() const;
  WeightFunction base() const;

  WeightKind kind() const { return kind_; }
  double param() const { return param_; }
  bool is_normalized() const { return normalized_; }
  std::string id() const;

  double omega(double t) const;
  double phi(double t) const;
  // Right derivative of phi.
  double phi_prime(double t) const;
  // Closed-form Young conjugate where one is known.
  std::optional<double> conjugate_closed_form(double s) const;

 private:
  WeightFunction(WeightKind k, double p) : kind_(k), param_(p) {}
  double phi_raw(double t) const;
  double phi_prime_raw(double t) const;

  WeightKind kind_;
  double param_;
  bool normalized_ = false;
};

// classical, gevrey:2, powerlog:1.5.
std::vector<WeightFunction> builtin_weights();

// Upper end of the search for the Young conjugate.
inline constexpr double kConjugateCeiling = 700.0;

// phi*(s) = sup_{t >= 0} (s t - phi(t)); +infinity when the objective is still
// increasing at the ceiling.
double young_conjugate(const WeightFunction& wf, double s);
// phi**(t) computed from young_conjugate.
double biconjugate(const WeightFunction& wf, double t);

struct BiconjugateReport {
  double max_gap = 0.0;
  double worst_t = 0.0;
};
BiconjugateReport biconjugate_check(const WeightFunction& wf, double t_max = 20.0,
                                    int samples = 201);

struct ConditionVerdict {
  bool pass = false;
  double value = 0.0;    // fitted constant or estimate
  double witness = 0.0;  // t where the constant is attained or the check fails
  std::string note;
};

struct ConditionReport {
  std::string weight;
  double t_max = 0.0;
  int samples = 0;
  ConditionVerdict alpha;  // value = L
  ConditionVerdict beta;   // value = tail integral estimate
  ConditionVerdict gamma;  // value = b
  double a = 0.0;
  ConditionVerdict delta;  // value = min second difference of phi
  double D = 0.0;
  bool all_pass() const { return alpha.pass && beta.pass && gamma.pass && delta.pass; }
};

nlohmann::json to_json(const ConditionReport& r);

// Requires t_max >= 1e3 and samples >= 1e3 (DomainError otherwise).
ConditionReport check_conditions(const WeightFunction& wf, double t_max = 1e4,
                                 int samples = 2000);

struct LemmaReport {
  std::string name;
  std::string weight;
  bool normalized = false;
  int trials = 0;
  std::uint64_t seed = 0;
  int violations = 0;
  double worst_margin = 0.0;  // max (lhs - rhs) in log space
  std::string first_violation;
  bool pass() const { return violations == 0; }
};

nlohmann::json to_json(const LemmaReport& r);

inline constexpr double kLemmaSlack = 1e-9;

// Randomized check of
//   (i)  t^k e^{-lambda omega(t)} <= e^{lambda phi*(k/lambda)}
//   (ii) inf_j t^{-j} e^{lambda phi*(j/lambda)} <= e^{-(lambda - 1/b) omega(t) - a/b}
// with t in [1, 1e3], k in 1..60, lambda in [0.1, 10], j <= 400.
LemmaReport check_lemma_lt(const WeightFunction& wf, int trials, std::uint64_t seed);

struct RhoReport {
  bool pass = true;
  int first_violation = -1;
  double D = 0.0;
  double lambda_prime = 0.0;
  double log_Lambda = 0.0;
};

// rho^j e^{lambda phi*(j/lambda)} <= Lambda e^{lambda' phi*(j/lambda')} for
// j = 0..j_max with lambda' = lambda / D^[log rho + 1], Lambda = e^{lambda [log rho + 1]}.
// Uses the normalized weight.
RhoReport check_rho_lemma(const WeightFunction& wf, double rho, double lambda, int j_max);
// Randomized version: rho in [1, 10], lambda in [0.1, 10], j in 0..200.
LemmaReport check_rho_lemma_random(const WeightFunction& wf, int trials, std::uint64_t seed);

struct FactorialReport {
  bool pass = false;
  double log_C = 0.0;  // log of max_n n! e^{-lambda phi*(n/lambda)}
  int argmax = 0;
  int finite_terms = 0;
};
nlohmann::json to_json(const RhoReport& r);
nlohmann::json to_json(const FactorialReport& r);

FactorialReport check_factorial_bound(const WeightFunction& wf, double lambda, int n_max);

}  // namespace wck
