#pragma once

#include <json.hpp>

#include "wck/weyl.hpp"

namespace wck {

nlohmann::json to_json(const WeylOp& op);
nlohmann::json to_json(const Poly2& p);
nlohmann::json to_json(const Poly4& a);

WeylOp weyl_from_json(const nlohmann::json& j);
Poly2 poly2_from_json(const nlohmann::json& j);

}  // namespace wck
