#pragma once

// Test-side oracles, independent of the implementation paths they check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "nctorus/torus_element.hpp"

namespace oracles {

using nctorus::Complex;
using nctorus::Mode;
using nctorus::TorusElement;

constexpr double kGoldenTheta = 0.6180339887498949;  // frac(golden ratio)

/// Exact finite-dimensional representation of the Weyl relation at rational
/// theta = p/q: clock C = diag(omega^k) and shift S e_k = e_{k+1 mod q}
/// satisfy C S = omega S C with omega = e^{2 pi i p / q}.  Mapping
/// X -> C, Y -> S turns torus elements into q x q matrices multiplicatively,
/// which checks the twisted product against plain matrix algebra.
class ClockShiftRep {
 public:
  ClockShiftRep(int p, int q) : q_(q), theta_(static_cast<double>(p) / q) {
    clock_ = Eigen::MatrixXcd::Zero(q, q);
    shift_ = Eigen::MatrixXcd::Zero(q, q);
    for (int k = 0; k < q; ++k) {
      clock_(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * theta_ * k);
      shift_((k + 1) % q, k) = 1.0;
    }
  }

  double theta() const { return theta_; }

  Eigen::MatrixXcd represent(const TorusElement& a) const {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(q_, q_);
    for (const auto& [n, c] : a.coeffs()) {
      acc += c * (matrix_power(clock_, n.n1) * matrix_power(shift_, n.n2));
    }
    return acc;
  }

  /// Normalized matrix trace; equals the algebra trace for elements whose
  /// support stays inside (-q, q)^2.
  Complex trace(const TorusElement& a) const {
    return represent(a).trace() / static_cast<double>(q_);
  }

 private:
  static Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, int n) {
    const int q = static_cast<int>(m.rows());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(q, q);
    const Eigen::MatrixXcd base = n >= 0 ? m : m.adjoint().eval();  // unitary inverse
    for (int i = 0; i < std::abs(n); ++i) acc = acc * base;
    return acc;
  }

  int q_;
  double theta_;
  Eigen::MatrixXcd clock_;
  Eigen::MatrixXcd shift_;
};

inline TorusElement random_element(double theta, int terms, int max_mode,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> modes(-max_mode, max_mode);
  TorusElement a(theta);
  for (int t = 0; t < terms; ++t) {
    const Mode n{modes(rng), modes(rng)};
    a.set_coeff(n, a.coeff(n) + Complex(unif(rng), unif(rng)));
  }
  return a;
}

inline TorusElement random_self_adjoint(double theta, int terms, int max_mode,
                                        std::mt19937_64& rng) {
  const TorusElement a = random_element(theta, terms, max_mode, rng);
  return Complex(0.5) * (a + nctorus::adjoint(a));
}

/// Direct lattice sum over the window: sum e^{-t |n|^2 / 2}.
inline double flat_heat_sum(int half_width, double t) {
  double acc = 0.0;
  for (int n1 = -half_width; n1 <= half_width; ++n1) {
    for (int n2 = -half_width; n2 <= half_width; ++n2) {
      acc += std::exp(-0.5 * t * (double(n1) * n1 + double(n2) * n2));
    }
  }
  return acc;
}

}  // namespace oracles
