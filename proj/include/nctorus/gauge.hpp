#pragma once

#include <Eigen/Dense>

#include "nctorus/torus_element.hpp"

namespace nctorus {

/// Which convention the scalar symbols follow.
///
/// `literal` reproduces the operator algebra exactly as the eigenvalue
/// formula prints it (positive +|n|^2/2 kinetic term, complex gauge terms);
/// it exists for algebraic-identity checks.  `hermitian` uses the standard
/// magnetic-Schroedinger convention with real gauge shifts n_j - 2 pi G_j and
/// the metric carried through, so the generator is genuinely self-adjoint and
/// nonpositive for a negative-definite metric.  All spectral and heat-trace
/// work runs in hermitian mode.
enum class SymbolMode { literal, hermitian };

struct GaugeConfig {
  double theta = 0.0;
  Eigen::Matrix2i psi = Eigen::Matrix2i::Zero();     // antisymmetric field matrix
  Eigen::Vector2d beta = Eigen::Vector2d::Zero();    // constant gauge components
  Eigen::Matrix2d metric = (Eigen::Matrix2d() << -0.5, 0.0, 0.0, -0.5).finished();
  SymbolMode symbol_mode = SymbolMode::hermitian;

  /// Throws std::invalid_argument if psi is not antisymmetric, the metric is
  /// not symmetric, or (hermitian mode) the metric is not negative definite.
  void validate() const;
};

/// Constant gauge component G_k evaluated at the reference point, i.e. beta_k.
/// The field matrix psi enters only through the constant cross-term shifts of
/// t0_symbol below.
double gauge_component(const GaugeConfig& cfg, int k);

/// Gauge correction to the printed eigenvalue formula (literal mode only):
///   eta(n) = sum_j (pi i G_j n_j + 2 pi^2 G_j^2)
///          + sum_{j != k} g^{jk} (n_j - 2 pi i G_j)(n_k - 2 pi i G_k).
Complex eta_symbol(const GaugeConfig& cfg, Mode n);

/// Symbol of the plain Laplacian on mode n:
/// literal +(n1^2+n2^2)/2, hermitian sum g^{jk} n_j n_k.
Complex l0_symbol(const GaugeConfig& cfg, Mode n);

/// Symbol of the unperturbed magnetic Laplacian on mode n.
/// literal: (n1^2+n2^2)/2 + eta(n).
/// hermitian: sum g^{jk} (n_j - 2 pi G_j)(n_k - 2 pi G_k), real and <= 0 for a
/// negative-definite metric.
Complex l0m_symbol(const GaugeConfig& cfg, Mode n);

/// Symbol of the gauge correction T0 on mode n; satisfies
/// l0m_symbol = l0_symbol + t0_symbol in both modes.  The literal cross terms
/// carry the constant shift -pi i psi_{jk} contributed by the linear part of
/// the gauge field; for a symmetric metric those shifts cancel in the sum.
Complex t0_symbol(const GaugeConfig& cfg, Mode n);

struct MagneticSymbol {
  Mode mode;
  Complex value;
};

/// Full magnetic Laplacian symbol bundled with its mode.
MagneticSymbol magnetic_symbol(const GaugeConfig& cfg, Mode n);

}  // namespace nctorus
