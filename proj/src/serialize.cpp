#include "wck/serialize.hpp"

#include "wck/error.hpp"

namespace wck {

using nlohmann::json;

json to_json(const WeylOp& op) {
  json a = json::array();
  for (const auto& [k, c] : op.terms())
    a.push_back({{"m", k[0]}, {"n", k[1]}, {"h", k[2]}, {"k", k[3]},
                 {"re", c.real()}, {"im", c.imag()}});
  return a;
}

json to_json(const Poly2& p) {
  json a = json::array();
  for (const auto& [k, c] : p.terms())
    a.push_back({{"i", k[0]}, {"j", k[1]}, {"re", c.real()}, {"im", c.imag()}});
  return a;
}

json to_json(const Poly4& s) {
  json a = json::array();
  for (const auto& [k, c] : s.terms())
    a.push_back({{"x", k[0]}, {"y", k[1]}, {"xi", k[2]}, {"eta", k[3]},
                 {"re", c.real()}, {"im", c.imag()}});
  return a;
}

WeylOp weyl_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("operator JSON must be an array");
  WeylOp r;
  for (const auto& t : j) {
    int m = t.at("m"), n = t.at("n"), h = t.at("h"), k = t.at("k");
    if (m < 0 || n < 0 || h < 0 || k < 0)
      throw DomainError("negative exponent in operator JSON");
    r.add_term({m, n, h, k}, cplx(t.at("re").get<double>(), t.at("im").get<double>()));
  }
  return r;
}

Poly2 poly2_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("polynomial JSON must be an array");
  Poly2 r;
  for (const auto& t : j) {
    int a = t.at("i"), b = t.at("j");
    if (a < 0 || b < 0) throw DomainError("negative exponent in polynomial JSON");
    r.add_term(a, b, cplx(t.at("re").get<double>(), t.at("im").get<double>()));
  }
  return r;
}

}  // namespace wck
