#include "nctorus/torus_element.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nctorus {

namespace {

void require_same_theta(const TorusElement& a, const TorusElement& b) {
  if (a.theta() != b.theta()) {
    throw std::invalid_argument("torus elements carry different deformation parameters");
  }
}

}  // namespace

TorusElement::TorusElement(double theta, CoeffMap coeffs)
    : theta_(theta), coeffs_(std::move(coeffs)) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it = (it->second == Complex(0.0)) ? coeffs_.erase(it) : std::next(it);
  }
}

TorusElement TorusElement::monomial(double theta, Mode n, Complex c) {
  TorusElement e(theta);
  e.set_coeff(n, c);
  return e;
}

Complex TorusElement::coeff(Mode n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

void TorusElement::set_coeff(Mode n, Complex c) {
  if (c == Complex(0.0)) {
    coeffs_.erase(n);
  } else {
    coeffs_[n] = c;
  }
}

int TorusElement::support_radius() const {
  int r = 0;
  for (const auto& [n, c] : coeffs_) {
    r = std::max({r, std::abs(n.n1), std::abs(n.n2)});
  }
  return r;
}

TorusElement& TorusElement::operator+=(const TorusElement& rhs) {
  require_same_theta(*this, rhs);
  for (const auto& [n, c] : rhs.coeffs_) {
    set_coeff(n, coeff(n) + c);
  }
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& rhs) {
  require_same_theta(*this, rhs);
  for (const auto& [n, c] : rhs.coeffs_) {
    set_coeff(n, coeff(n) - c);
  }
  return *this;
}

TorusElement& TorusElement::operator*=(Complex scale) {
  if (scale == Complex(0.0)) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [n, c] : coeffs_) {
    c *= scale;
  }
  return *this;
}

Complex weyl_phase(double theta, Mode m, Mode n) {
  const double arg = -2.0 * std::numbers::pi * theta *
                     static_cast<double>(m.n2) * static_cast<double>(n.n1);
  return std::polar(1.0, arg);
}

TorusElement weyl_mul(const TorusElement& a, const TorusElement& b) {
  require_same_theta(a, b);
  TorusElement out(a.theta());
  for (const auto& [m, am] : a.coeffs()) {
    for (const auto& [n, bn] : b.coeffs()) {
      const Mode sum{m.n1 + n.n1, m.n2 + n.n2};
      out.set_coeff(sum, out.coeff(sum) + am * bn * weyl_phase(a.theta(), m, n));
    }
  }
  return out;
}

TorusElement adjoint(const TorusElement& a) {
  TorusElement out(a.theta());
  for (const auto& [n, c] : a.coeffs()) {
    const double arg = -2.0 * std::numbers::pi * a.theta() *
                       static_cast<double>(n.n1) * static_cast<double>(n.n2);
    out.set_coeff({-n.n1, -n.n2}, std::conj(c) * std::polar(1.0, arg));
  }
  return out;
}

Complex trace_phi(const TorusElement& a) { return a.coeff({0, 0}); }

Complex inner_product(const TorusElement& u, const TorusElement& v) {
  require_same_theta(u, v);
  return trace_phi(weyl_mul(adjoint(v), u));
}

TorusElement canonical_derivation(int j, const TorusElement& a) {
  if (j != 1 && j != 2) {
    throw std::invalid_argument("derivation direction must be 1 or 2");
  }
  TorusElement out(a.theta());
  for (const auto& [n, c] : a.coeffs()) {
    const int nj = (j == 1) ? n.n1 : n.n2;
    out.set_coeff(n, c * static_cast<double>(nj));
  }
  return out;
}

TorusElement inner_derivation(const TorusElement& r, const TorusElement& a) {
  return weyl_mul(r, a) - weyl_mul(a, r);
}

TorusElement perturbed_derivation(int j, const TorusElement& r_j, const TorusElement& a) {
  return canonical_derivation(j, a) + inner_derivation(r_j, a);
}

double max_coeff_distance(const TorusElement& a, const TorusElement& b) {
  double d = 0.0;
  for (const auto& [n, c] : a.coeffs()) {
    d = std::max(d, std::abs(c - b.coeff(n)));
  }
  for (const auto& [n, c] : b.coeffs()) {
    d = std::max(d, std::abs(c - a.coeff(n)));
  }
  return d;
}

bool is_self_adjoint(const TorusElement& r, double tol) {
  return max_coeff_distance(r, adjoint(r)) <= tol;
}

}  // namespace nctorus
