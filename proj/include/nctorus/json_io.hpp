#pragma once

#include <json.hpp>

#include "nctorus/gauge.hpp"
#include "nctorus/torus_element.hpp"

namespace nctorus {

using Json = nlohmann::json;

/// {"theta": t, "coeffs": [[n1, n2, re, im], ...]} with coefficients
/// in lexicographic (n1, n2) order.
Json torus_element_to_json(const TorusElement& a);
TorusElement torus_element_from_json(const Json& j);

/// {"theta": t, "psi": [[0, p], [-p, 0]], "beta": [b1, b2],
///  "metric": [[..], [..]], "symbol_mode": "literal"|"hermitian"}
Json gauge_config_to_json(const GaugeConfig& cfg);
GaugeConfig gauge_config_from_json(const Json& j);

std::string symbol_mode_name(SymbolMode mode);
SymbolMode symbol_mode_from_name(const std::string& name);

}  // namespace nctorus
