#include "nctorus/gauge.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nctorus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double mode_component(Mode n, int j) { return j == 1 ? n.n1 : n.n2; }

}  // namespace

void GaugeConfig::validate() const {
  if (psi(0, 0) != 0 || psi(1, 1) != 0 || psi(0, 1) != -psi(1, 0)) {
    throw std::invalid_argument("field matrix psi must be antisymmetric with zero diagonal");
  }
  if (metric(0, 1) != metric(1, 0)) {
    throw std::invalid_argument("metric must be symmetric");
  }
  if (symbol_mode == SymbolMode::hermitian) {
    if (metric(0, 0) >= 0.0 || metric(1, 1) >= 0.0) {
      throw std::invalid_argument("hermitian mode requires negative metric diagonal");
    }
    // negative definite <=> negative diagonal and positive determinant
    if (metric.determinant() <= 0.0) {
      throw std::invalid_argument("hermitian mode requires a negative-definite metric");
    }
  }
  if (theta < 0.0 || theta >= 1.0) {
    throw std::invalid_argument("theta must lie in [0, 1)");
  }
}

double gauge_component(const GaugeConfig& cfg, int k) {
  if (k != 1 && k != 2) {
    throw std::invalid_argument("gauge direction must be 1 or 2");
  }
  return cfg.beta(k - 1);
}

Complex eta_symbol(const GaugeConfig& cfg, Mode n) {
  if (cfg.symbol_mode != SymbolMode::literal) {
    throw std::invalid_argument("eta_symbol is defined in literal mode only");
  }
  Complex eta{0.0};
  for (int j = 1; j <= 2; ++j) {
    const double gj = gauge_component(cfg, j);
    eta += kPi * kI * gj * mode_component(n, j) + 2.0 * kPi * kPi * gj * gj;
  }
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      if (j == k) continue;
      const double gj = gauge_component(cfg, j);
      const double gk = gauge_component(cfg, k);
      eta += cfg.metric(j - 1, k - 1) *
             (mode_component(n, j) - 2.0 * kPi * kI * gj) *
             (mode_component(n, k) - 2.0 * kPi * kI * gk);
    }
  }
  return eta;
}

Complex l0_symbol(const GaugeConfig& cfg, Mode n) {
  if (cfg.symbol_mode == SymbolMode::literal) {
    return 0.5 * (double(n.n1) * n.n1 + double(n.n2) * n.n2);
  }
  Complex v{0.0};
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      v += cfg.metric(j - 1, k - 1) * mode_component(n, j) * mode_component(n, k);
    }
  }
  return v;
}

Complex l0m_symbol(const GaugeConfig& cfg, Mode n) {
  if (cfg.symbol_mode == SymbolMode::literal) {
    return 0.5 * (double(n.n1) * n.n1 + double(n.n2) * n.n2) + eta_symbol(cfg, n);
  }
  Complex v{0.0};
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      const double sj = mode_component(n, j) - 2.0 * kPi * gauge_component(cfg, j);
      const double sk = mode_component(n, k) - 2.0 * kPi * gauge_component(cfg, k);
      v += cfg.metric(j - 1, k - 1) * sj * sk;
    }
  }
  return v;
}

Complex t0_symbol(const GaugeConfig& cfg, Mode n) {
  if (cfg.symbol_mode == SymbolMode::hermitian) {
    return l0m_symbol(cfg, n) - l0_symbol(cfg, n);
  }
  Complex t{0.0};
  for (int j = 1; j <= 2; ++j) {
    const double gj = gauge_component(cfg, j);
    t += kPi * kI * gj * mode_component(n, j) + 2.0 * kPi * kPi * gj * gj;
  }
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      if (j == k) continue;
      const double gj = gauge_component(cfg, j);
      const double gk = gauge_component(cfg, k);
      // the linear part of the gauge differentiates to the constant psi shift
      t += cfg.metric(j - 1, k - 1) *
           ((mode_component(n, j) - 2.0 * kPi * kI * gj) *
                (mode_component(n, k) - 2.0 * kPi * kI * gk) -
            kPi * kI * static_cast<double>(cfg.psi(j - 1, k - 1)));
    }
  }
  return t;
}

MagneticSymbol magnetic_symbol(const GaugeConfig& cfg, Mode n) {
  return MagneticSymbol{n, l0m_symbol(cfg, n)};
}

}  // namespace nctorus
