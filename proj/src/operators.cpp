#include "nctorus/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nctorus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
constexpr double kHermTol = 1e-12;

using Triplet = Eigen::Triplet<Complex>;

void require_theta_match(const GaugeConfig& cfg, const TorusElement& r) {
  if (!r.is_zero() && r.theta() != cfg.theta) {
    throw std::invalid_argument("perturbation theta does not match gauge config");
  }
}

void require_self_adjoint_in_hermitian_mode(const GaugeConfig& cfg, const TorusElement& r,
                                            const char* which) {
  if (cfg.symbol_mode == SymbolMode::hermitian && !is_self_adjoint(r)) {
    throw std::invalid_argument(std::string(which) +
                                " must be self-adjoint in hermitian mode");
  }
}

SparseCd scaled_identity(const LatticeWindow& w, Complex c) {
  SparseCd id(w.dim(), w.dim());
  id.setIdentity();
  return SparseCd(c * id);
}

double max_abs(const SparseCd& m) {
  double v = 0.0;
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SparseCd::InnerIterator it(m, col); it; ++it) {
      v = std::max(v, std::abs(it.value()));
    }
  }
  return v;
}

double max_abs_interior(const SparseCd& m, const LatticeWindow& w, int margin) {
  double v = 0.0;
  for (int col = 0; col < m.outerSize(); ++col) {
    if (!w.interior(w.mode(col), margin)) continue;
    for (SparseCd::InnerIterator it(m, col); it; ++it) {
      if (!w.interior(w.mode(static_cast<int>(it.row())), margin)) continue;
      v = std::max(v, std::abs(it.value()));
    }
  }
  return v;
}

}  // namespace

MatrixOperator make_operator(Eigen::MatrixXcd mat, const LatticeWindow& w) {
  if (mat.rows() != w.dim() || mat.cols() != w.dim()) {
    throw std::invalid_argument("matrix dimension does not match lattice window");
  }
  MatrixOperator op{std::move(mat), w, false};
  op.hermitian = op.hermiticity_defect() <= kHermTol;
  return op;
}

Complex left_mul_entry(const TorusElement& r, Mode row, Mode col) {
  const Mode m{row.n1 - col.n1, row.n2 - col.n2};
  const Complex c = r.coeff(m);
  return c == Complex(0.0) ? c : c * weyl_phase(r.theta(), m, col);
}

Complex right_mul_entry(const TorusElement& r, Mode row, Mode col) {
  const Mode m{row.n1 - col.n1, row.n2 - col.n2};
  const Complex c = r.coeff(m);
  return c == Complex(0.0) ? c : c * weyl_phase(r.theta(), col, m);
}

SparseCd sparse_left_mul(const TorusElement& r, const LatticeWindow& w) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(w.dim()) * r.term_count());
  for (int col = 0; col < w.dim(); ++col) {
    const Mode n = w.mode(col);
    for (const auto& [m, c] : r.coeffs()) {
      const Mode out{m.n1 + n.n1, m.n2 + n.n2};
      if (!w.contains(out)) continue;  // products escaping the window are truncated
      trip.emplace_back(w.index(out), col, c * weyl_phase(r.theta(), m, n));
    }
  }
  SparseCd mat(w.dim(), w.dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

SparseCd sparse_right_mul(const TorusElement& r, const LatticeWindow& w) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(w.dim()) * r.term_count());
  for (int col = 0; col < w.dim(); ++col) {
    const Mode n = w.mode(col);
    for (const auto& [m, c] : r.coeffs()) {
      const Mode out{n.n1 + m.n1, n.n2 + m.n2};
      if (!w.contains(out)) continue;
      trip.emplace_back(w.index(out), col, c * weyl_phase(r.theta(), n, m));
    }
  }
  SparseCd mat(w.dim(), w.dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

SparseCd sparse_derivation(int j, const LatticeWindow& w) {
  if (j != 1 && j != 2) {
    throw std::invalid_argument("derivation direction must be 1 or 2");
  }
  std::vector<Triplet> trip;
  trip.reserve(w.dim());
  for (int i = 0; i < w.dim(); ++i) {
    const Mode n = w.mode(i);
    const double nj = (j == 1) ? n.n1 : n.n2;
    if (nj != 0.0) trip.emplace_back(i, i, Complex(nj));
  }
  SparseCd mat(w.dim(), w.dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

SparseCd sparse_inner_derivation(const TorusElement& r, const LatticeWindow& w) {
  return SparseCd(sparse_left_mul(r, w) - sparse_right_mul(r, w));
}

SparseCd sparse_identity(const LatticeWindow& w) {
  SparseCd id(w.dim(), w.dim());
  id.setIdentity();
  return id;
}

SparseCd restrict_window(const SparseCd& m, const LatticeWindow& from, const LatticeWindow& to) {
  if (to.half_width() > from.half_width()) {
    throw std::invalid_argument("cannot restrict to a larger window");
  }
  std::vector<Triplet> trip;
  for (int col = 0; col < m.outerSize(); ++col) {
    const Mode cn = from.mode(col);
    if (!to.contains(cn)) continue;
    for (SparseCd::InnerIterator it(m, col); it; ++it) {
      const Mode rn = from.mode(static_cast<int>(it.row()));
      if (!to.contains(rn)) continue;
      trip.emplace_back(to.index(rn), to.index(cn), it.value());
    }
  }
  SparseCd out(to.dim(), to.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

MatrixOperator matrix_of_left_mul(const TorusElement& r, const LatticeWindow& w) {
  return make_operator(Eigen::MatrixXcd(sparse_left_mul(r, w)), w);
}

MatrixOperator matrix_of_derivation(int j, const LatticeWindow& w) {
  return make_operator(Eigen::MatrixXcd(sparse_derivation(j, w)), w);
}

MatrixOperator matrix_of_inner_derivation(const TorusElement& r, const LatticeWindow& w) {
  return make_operator(Eigen::MatrixXcd(sparse_inner_derivation(r, w)), w);
}

SparseCd sparse_L0m(const GaugeConfig& cfg, const LatticeWindow& w) {
  cfg.validate();
  std::vector<Triplet> trip;
  trip.reserve(w.dim());
  for (int i = 0; i < w.dim(); ++i) {
    const Complex v = l0m_symbol(cfg, w.mode(i));
    if (v != Complex(0.0)) trip.emplace_back(i, i, v);
  }
  SparseCd mat(w.dim(), w.dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

MatrixOperator assemble_L0m(const GaugeConfig& cfg, const LatticeWindow& w) {
  return make_operator(Eigen::MatrixXcd(sparse_L0m(cfg, w)), w);
}

namespace {

/// Shared composition recipe, with delta_j = d_j + d_{r_j} (r may be zero).
/// Hermitian mode: sum g^{jk} (delta_j - 2 pi G_j)(delta_k - 2 pi G_k).
/// Literal mode mirrors the printed expansion term by term, so the gauge-off
/// diagonal carries the positive kinetic sign and the cross products keep the
/// constant -pi i psi_{jk} shift.
SparseCd compose_magnetic(const GaugeConfig& cfg, const SparseCd& delta1,
                          const SparseCd& delta2, const LatticeWindow& w) {
  const double g1 = gauge_component(cfg, 1);
  const double g2 = gauge_component(cfg, 2);
  const SparseCd* delta[2] = {&delta1, &delta2};
  const double g[2] = {g1, g2};
  SparseCd acc(w.dim(), w.dim());
  if (cfg.symbol_mode == SymbolMode::hermitian) {
    SparseCd shifted[2];
    for (int j = 0; j < 2; ++j) {
      shifted[j] = *delta[j] - scaled_identity(w, Complex(2.0 * kPi * g[j]));
    }
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const double gjk = cfg.metric(j, k);
        if (gjk == 0.0) continue;
        acc += SparseCd(gjk * SparseCd(shifted[j] * shifted[k]));
      }
    }
    return acc;
  }
  // literal
  Complex constant(0.0);
  for (int j = 0; j < 2; ++j) {
    acc += SparseCd(0.5 * SparseCd(*delta[j] * *delta[j]));
    acc += SparseCd((kPi * kI * g[j]) * *delta[j]);
    constant += 2.0 * kPi * kPi * g[j] * g[j];
  }
  SparseCd shifted[2];
  for (int j = 0; j < 2; ++j) {
    shifted[j] = *delta[j] - scaled_identity(w, 2.0 * kPi * kI * g[j]);
  }
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      if (j == k) continue;
      const double gjk = cfg.metric(j, k);
      if (gjk == 0.0) continue;
      acc += SparseCd(gjk * SparseCd(shifted[j] * shifted[k]));
      constant -= gjk * kPi * kI * static_cast<double>(cfg.psi(j, k));
    }
  }
  if (constant != Complex(0.0)) acc += scaled_identity(w, constant);
  return acc;
}

}  // namespace

MatrixOperator assemble_L0m_composed(const GaugeConfig& cfg, const LatticeWindow& w) {
  cfg.validate();
  const SparseCd d1 = sparse_derivation(1, w);
  const SparseCd d2 = sparse_derivation(2, w);
  return make_operator(Eigen::MatrixXcd(compose_magnetic(cfg, d1, d2, w)), w);
}

int magnetic_pad(const TorusElement& r1, const TorusElement& r2) {
  return 2 * std::max(r1.support_radius(), r2.support_radius());
}

SparseCd sparse_Lm(const GaugeConfig& cfg, const TorusElement& r1, const TorusElement& r2,
                   const LatticeWindow& w, int pad) {
  cfg.validate();
  require_theta_match(cfg, r1);
  require_theta_match(cfg, r2);
  require_self_adjoint_in_hermitian_mode(cfg, r1, "r1");
  require_self_adjoint_in_hermitian_mode(cfg, r2, "r2");
  if (pad < 0) pad = magnetic_pad(r1, r2);
  const LatticeWindow wp(w.half_width() + pad);
  const SparseCd delta1 = sparse_derivation(1, wp) + sparse_inner_derivation(r1, wp);
  const SparseCd delta2 = sparse_derivation(2, wp) + sparse_inner_derivation(r2, wp);
  return restrict_window(compose_magnetic(cfg, delta1, delta2, wp), wp, w);
}

MatrixOperator assemble_Lm(const GaugeConfig& cfg, const TorusElement& r1,
                           const TorusElement& r2, const LatticeWindow& w, int pad) {
  return make_operator(Eigen::MatrixXcd(sparse_Lm(cfg, r1, r2, w, pad)), w);
}

namespace {

struct CorrectionParts {
  SparseCd t1;
  SparseCd t2;
  SparseCd t2_alt;
};

CorrectionParts build_corrections(const GaugeConfig& cfg, const TorusElement& r1,
                                  const TorusElement& r2, const LatticeWindow& wp) {
  const double g[2] = {gauge_component(cfg, 1), gauge_component(cfg, 2)};
  const bool herm = cfg.symbol_mode == SymbolMode::hermitian;
  // diagonal weight per mode convention
  const double wdiag[2] = {herm ? cfg.metric(0, 0) : 0.5, herm ? cfg.metric(1, 1) : 0.5};
  const Complex shift[2] = {herm ? Complex(2.0 * kPi * g[0]) : 2.0 * kPi * kI * g[0],
                            herm ? Complex(2.0 * kPi * g[1]) : 2.0 * kPi * kI * g[1]};
  // hermitian mode expands (delta - s)^2 exactly, so rho picks up -2 s g^{jj};
  // the literal recipe carries the printed pi i G rho term instead
  const Complex lin[2] = {herm ? -2.0 * wdiag[0] * shift[0] : kPi * kI * g[0],
                          herm ? -2.0 * wdiag[1] * shift[1] : kPi * kI * g[1]};

  SparseCd d[2] = {sparse_derivation(1, wp), sparse_derivation(2, wp)};
  SparseCd rho[2] = {sparse_inner_derivation(r1, wp), sparse_inner_derivation(r2, wp)};

  SparseCd t1(wp.dim(), wp.dim());
  SparseCd t2(wp.dim(), wp.dim());
  SparseCd t2_alt(wp.dim(), wp.dim());
  for (int j = 0; j < 2; ++j) {
    t1 += SparseCd(wdiag[j] * SparseCd(rho[j] * rho[j]));
    t1 += SparseCd(lin[j] * rho[j]);
    t2 += SparseCd(wdiag[j] * SparseCd(rho[j] * d[j] + d[j] * rho[j]));
    t2_alt += SparseCd((2.0 * wdiag[j]) * SparseCd(rho[j] * d[j]));
  }
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      if (j == k) continue;
      const double gjk = cfg.metric(j, k);
      if (gjk == 0.0) continue;
      t1 -= SparseCd(gjk * SparseCd(shift[j] * rho[k] + shift[k] * rho[j]));
      const SparseCd cross(d[j] * rho[k] + rho[j] * d[k] + rho[j] * rho[k]);
      t2 += SparseCd(gjk * cross);
      t2_alt += SparseCd(gjk * cross);
    }
  }
  return {std::move(t1), std::move(t2), std::move(t2_alt)};
}

}  // namespace

std::pair<MatrixOperator, MatrixOperator> assemble_T1_T2(const GaugeConfig& cfg,
                                                         const TorusElement& r1,
                                                         const TorusElement& r2,
                                                         const LatticeWindow& w, int pad) {
  cfg.validate();
  require_theta_match(cfg, r1);
  require_theta_match(cfg, r2);
  require_self_adjoint_in_hermitian_mode(cfg, r1, "r1");
  require_self_adjoint_in_hermitian_mode(cfg, r2, "r2");
  if (pad < 0) pad = magnetic_pad(r1, r2);
  const LatticeWindow wp(w.half_width() + pad);
  auto parts = build_corrections(cfg, r1, r2, wp);
  return {make_operator(Eigen::MatrixXcd(restrict_window(parts.t1, wp, w)), w),
          make_operator(Eigen::MatrixXcd(restrict_window(parts.t2, wp, w)), w)};
}

MatrixOperator assemble_T2_alt(const GaugeConfig& cfg, const TorusElement& r1,
                               const TorusElement& r2, const LatticeWindow& w, int pad) {
  cfg.validate();
  if (pad < 0) pad = magnetic_pad(r1, r2);
  const LatticeWindow wp(w.half_width() + pad);
  auto parts = build_corrections(cfg, r1, r2, wp);
  return make_operator(Eigen::MatrixXcd(restrict_window(parts.t2_alt, wp, w)), w);
}

Eigen::MatrixXcd DiracOperator::full() const {
  const int n = window.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  out.block(0, n, n, n) = Eigen::MatrixXcd(upper);
  out.block(n, 0, n, n) = Eigen::MatrixXcd(lower);
  return out;
}

Eigen::VectorXd DiracOperator::grading_diagonal() const {
  const int n = window.dim();
  Eigen::VectorXd g(2 * n);
  g.head(n).setOnes();
  g.tail(n).setConstant(-1.0);
  return g;
}

std::pair<Complex, Complex> dirac_gauge_constants(const GaugeConfig& cfg) {
  const double g1 = gauge_component(cfg, 1);
  const double g2 = gauge_component(cfg, 2);
  if (cfg.symbol_mode == SymbolMode::hermitian) {
    return {Complex(-2.0 * kPi * g1, -2.0 * kPi * g2),
            Complex(-2.0 * kPi * g1, 2.0 * kPi * g2)};
  }
  return {-2.0 * kPi * kI * (g1 + g2), -2.0 * kPi * kI * (g1 - g2)};
}

DiracOperator assemble_dirac(const GaugeConfig& cfg, const TorusElement& r,
                             const LatticeWindow& w) {
  cfg.validate();
  require_theta_match(cfg, r);
  const SparseCd d1 = sparse_derivation(1, w);
  const SparseCd d2 = sparse_derivation(2, w);
  const auto [cu, cl] = dirac_gauge_constants(cfg);
  SparseCd upper, lower;
  if (cfg.symbol_mode == SymbolMode::hermitian) {
    upper = SparseCd(d1 + SparseCd(kI * d2)) + scaled_identity(w, cu);
    lower = SparseCd(d1 - SparseCd(kI * d2)) + scaled_identity(w, cl);
  } else {
    upper = SparseCd(SparseCd(kI * d1) + d2) + scaled_identity(w, cu);
    lower = SparseCd(SparseCd(kI * d1) - d2) + scaled_identity(w, cl);
  }
  if (!r.is_zero()) {
    upper += sparse_inner_derivation(r, w);
    lower += sparse_inner_derivation(adjoint(r), w);
  }
  DiracOperator d{std::move(upper), std::move(lower), w, false};
  d.hermitian = max_abs(SparseCd(d.lower - SparseCd(d.upper.adjoint()))) <= kHermTol;
  return d;
}

std::pair<SparseCd, SparseCd> dirac_square_blocks(const DiracOperator& d) {
  return {SparseCd(d.upper * d.lower), SparseCd(d.lower * d.upper)};
}

int dirac_kernel_dimension(const DiracOperator& d) {
  auto [b1, b2] = dirac_square_blocks(d);
  const Eigen::VectorXd e1 = eigenvalues_by_components(b1);
  const Eigen::VectorXd e2 = eigenvalues_by_components(b2);
  const double top = std::max({e1.size() ? e1.cwiseAbs().maxCoeff() : 0.0,
                               e2.size() ? e2.cwiseAbs().maxCoeff() : 0.0});
  const double thr = 1e-8 * std::sqrt(std::max(top, 0.0));
  const double thr2 = thr * thr;
  int dim = 0;
  for (double v : e1) dim += std::abs(v) < thr2;
  for (double v : e2) dim += std::abs(v) < thr2;
  return dim;
}

DiracCommutator commutator_with_element(const DiracOperator& d, const TorusElement& x) {
  const SparseCd mx = sparse_left_mul(x, d.window);
  return {SparseCd(d.upper * mx - mx * d.upper), SparseCd(d.lower * mx - mx * d.lower)};
}

double commutator_norm(const DiracOperator& d, const TorusElement& x) {
  const DiracCommutator c = commutator_with_element(d, x);
  return std::max(spectral_norm(c.upper), spectral_norm(c.lower));
}

double one_form_gauge_shift_deviation(const GaugeConfig& cfg, const TorusElement& r,
                                      const TorusElement& x, const LatticeWindow& w) {
  GaugeConfig plain = cfg;
  plain.beta.setZero();
  const DiracCommutator magnetic = commutator_with_element(assemble_dirac(cfg, r, w), x);
  const DiracCommutator bare = commutator_with_element(assemble_dirac(plain, r, w), x);
  return std::max(max_abs(SparseCd(magnetic.upper - bare.upper)),
                  max_abs(SparseCd(magnetic.lower - bare.lower)));
}

CurvatureReport curvature_two_form_check(const GaugeConfig& cfg, const TorusElement& r1,
                                         const TorusElement& r2, const LatticeWindow& w) {
  cfg.validate();
  require_theta_match(cfg, r1);
  require_theta_match(cfg, r2);
  const int pad = std::max(1, magnetic_pad(r1, r2));
  const LatticeWindow wp(w.half_width() + pad);
  const double g1 = gauge_component(cfg, 1);
  const double g2 = gauge_component(cfg, 2);
  const Complex tp = 2.0 * kPi * kI;  // the identity is stated with 2 pi i shifts

  const SparseCd d1 = sparse_derivation(1, wp);
  const SparseCd d2 = sparse_derivation(2, wp);
  const SparseCd rho1 = sparse_inner_derivation(r1, wp);
  const SparseCd rho2 = sparse_inner_derivation(r2, wp);
  const SparseCd m1(d1 + rho1);
  const SparseCd m2(d2 + rho2);

  // inner part of [delta_1, delta_2]: d_1(r_2) - d_2(r_1) + [r_1, r_2]
  const TorusElement e1 = r1.is_zero() ? TorusElement::zero(cfg.theta) : r1;
  const TorusElement e2 = r2.is_zero() ? TorusElement::zero(cfg.theta) : r2;
  const TorusElement s = canonical_derivation(1, e2) - canonical_derivation(2, e1) +
                         weyl_mul(e1, e2) - weyl_mul(e2, e1);
  const SparseCd ms = sparse_inner_derivation(s, wp);

  const SparseCd commutator(m1 * m2 - m2 * m1);
  const SparseCd flat(ms - commutator);

  const SparseCd lhs(ms + SparseCd(tp * Complex(g2) * SparseCd(d1 + rho1)) -
                     SparseCd(tp * Complex(g1) * SparseCd(d2 + rho2)) - commutator);
  const SparseCd rhs(SparseCd(tp * Complex(g2) * d1) - SparseCd(tp * Complex(g1) * d2) +
                     SparseCd(tp * Complex(g2) * rho1) - SparseCd(tp * Complex(g1) * rho2));

  CurvatureReport report;
  report.interior_margin = pad;
  report.flat_deviation = max_abs_interior(restrict_window(flat, wp, w), w, pad);
  report.identity_deviation =
      max_abs_interior(restrict_window(SparseCd(lhs - rhs), wp, w), w, pad);
  return report;
}

}  // namespace nctorus
