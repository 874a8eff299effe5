#pragma once

#include <complex>
#include <map>
#include <cstdint>

namespace nctorus {

using Complex = std::complex<double>;

/// Fourier mode (n1, n2) on the integer lattice Z^2.
struct Mode {
  int n1 = 0;
  int n2 = 0;
  friend auto operator<=>(const Mode&, const Mode&) = default;
};

/// Finite Fourier series  sum a_{n1 n2} X^{n1} Y^{n2}  over the two unitary
/// generators with  X Y = e^{2 pi i theta} Y X.
///
/// Monomials are stored X-power-first.  The coefficient map never holds an
/// exact zero: every mutating operation restores canonical form by dropping
/// coefficients that are exactly 0 (no epsilon pruning, so the algebraic
/// identities below stay exact).
class TorusElement {
 public:
  using CoeffMap = std::map<Mode, Complex>;

  TorusElement() = default;
  explicit TorusElement(double theta) : theta_(theta) {}
  TorusElement(double theta, CoeffMap coeffs);

  static TorusElement monomial(double theta, Mode n, Complex c = Complex(1.0));
  static TorusElement identity(double theta) { return monomial(theta, {0, 0}); }
  static TorusElement zero(double theta) { return TorusElement(theta); }

  double theta() const { return theta_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  std::size_t term_count() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  Complex coeff(Mode n) const;
  void set_coeff(Mode n, Complex c);

  /// Largest Chebyshev radius max(|n1|,|n2|) over the support; 0 for zero.
  int support_radius() const;

  TorusElement& operator+=(const TorusElement& rhs);
  TorusElement& operator-=(const TorusElement& rhs);
  TorusElement& operator*=(Complex scale);

  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  friend TorusElement operator*(Complex s, TorusElement a) { return a *= s; }
  friend TorusElement operator*(TorusElement a, Complex s) { return a *= s; }

 private:
  double theta_ = 0.0;
  CoeffMap coeffs_;
};

/// Phase picked up when X^{m1}Y^{m2} is multiplied by X^{n1}Y^{n2}:
/// moving Y^{m2} past X^{n1} costs e^{-2 pi i theta m2 n1}.
Complex weyl_phase(double theta, Mode m, Mode n);

/// Twisted product; bilinear extension of the monomial rule above.
/// Throws std::invalid_argument on mismatched theta.
TorusElement weyl_mul(const TorusElement& a, const TorusElement& b);

/// *-involution: (X^{n1}Y^{n2})^* = e^{-2 pi i theta n1 n2} X^{-n1} Y^{-n2},
/// coefficients conjugated.
TorusElement adjoint(const TorusElement& a);

/// The faithful trace: reads off the (0,0) coefficient.
Complex trace_phi(const TorusElement& a);

/// <u, v> = phi(v^* u).  Positive definite; monomials are orthonormal.
Complex inner_product(const TorusElement& u, const TorusElement& v);

/// Canonical derivation d_j, j in {1,2}: scales mode (n1,n2) by n_j.
TorusElement canonical_derivation(int j, const TorusElement& a);

/// Inner derivation d_r = [r, .].
TorusElement inner_derivation(const TorusElement& r, const TorusElement& a);

/// delta_j = d_j + d_{r_j}.
TorusElement perturbed_derivation(int j, const TorusElement& r_j, const TorusElement& a);

/// Max coefficient-wise distance between the union of supports.
double max_coeff_distance(const TorusElement& a, const TorusElement& b);

/// r = r^* up to tol (tol = 0 demands exact equality).
bool is_self_adjoint(const TorusElement& r, double tol = 1e-12);

}  // namespace nctorus
