#include "nctorus/json_io.hpp"

#include <stdexcept>

namespace nctorus {

Json torus_element_to_json(const TorusElement& a) {
  Json coeffs = Json::array();
  for (const auto& [n, c] : a.coeffs()) {  // map order is lexicographic in (n1, n2)
    coeffs.push_back(Json::array({n.n1, n.n2, c.real(), c.imag()}));
  }
  return Json{{"theta", a.theta()}, {"coeffs", coeffs}};
}

TorusElement torus_element_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("theta") || !j.contains("coeffs")) {
    throw std::invalid_argument("torus element needs {theta, coeffs}");
  }
  TorusElement a(j.at("theta").get<double>());
  for (const auto& entry : j.at("coeffs")) {
    if (!entry.is_array() || entry.size() != 4) {
      throw std::invalid_argument("coefficient entries are [n1, n2, re, im]");
    }
    const Mode n{entry[0].get<int>(), entry[1].get<int>()};
    a.set_coeff(n, a.coeff(n) + Complex(entry[2].get<double>(), entry[3].get<double>()));
  }
  return a;
}

std::string symbol_mode_name(SymbolMode mode) {
  return mode == SymbolMode::literal ? "literal" : "hermitian";
}

SymbolMode symbol_mode_from_name(const std::string& name) {
  if (name == "literal") return SymbolMode::literal;
  if (name == "hermitian") return SymbolMode::hermitian;
  throw std::invalid_argument("symbol_mode must be \"literal\" or \"hermitian\"");
}

Json gauge_config_to_json(const GaugeConfig& cfg) {
  return Json{
      {"theta", cfg.theta},
      {"psi", Json::array({Json::array({cfg.psi(0, 0), cfg.psi(0, 1)}),
                           Json::array({cfg.psi(1, 0), cfg.psi(1, 1)})})},
      {"beta", Json::array({cfg.beta(0), cfg.beta(1)})},
      {"metric", Json::array({Json::array({cfg.metric(0, 0), cfg.metric(0, 1)}),
                              Json::array({cfg.metric(1, 0), cfg.metric(1, 1)})})},
      {"symbol_mode", symbol_mode_name(cfg.symbol_mode)},
  };
}

GaugeConfig gauge_config_from_json(const Json& j) {
  GaugeConfig cfg;
  if (!j.is_object()) {
    throw std::invalid_argument("gauge config must be an object");
  }
  if (j.contains("theta")) cfg.theta = j.at("theta").get<double>();
  if (j.contains("psi")) {
    const auto& p = j.at("psi");
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) cfg.psi(r, c) = p.at(r).at(c).get<int>();
    }
  }
  if (j.contains("beta")) {
    cfg.beta(0) = j.at("beta").at(0).get<double>();
    cfg.beta(1) = j.at("beta").at(1).get<double>();
  }
  if (j.contains("metric")) {
    const auto& m = j.at("metric");
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) cfg.metric(r, c) = m.at(r).at(c).get<double>();
    }
  }
  if (j.contains("symbol_mode")) {
    cfg.symbol_mode = symbol_mode_from_name(j.at("symbol_mode").get<std::string>());
  }
  return cfg;
}

}  // namespace nctorus
