#include "nctorus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nctorus {

namespace {

constexpr double kHermTol = 1e-12;

Spectrum assemble_spectrum(std::vector<ComponentEigen> comps, Eigen::Index dim,
                           const std::string& source, bool with_vectors) {
  std::vector<std::pair<double, std::pair<int, int>>> order;  // (value, (comp, local))
  order.reserve(dim);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
    for (int i = 0; i < comps[c].values.size(); ++i) {
      order.push_back({comps[c].values(i), {c, i}});
    }
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Spectrum spec;
  spec.source = source;
  spec.eigenvalues.resize(static_cast<Eigen::Index>(order.size()));
  if (with_vectors) spec.eigenvectors = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(order.size()); ++k) {
    spec.eigenvalues(k) = order[k].first;
    if (with_vectors) {
      const auto& ce = comps[order[k].second.first];
      const int local = order[k].second.second;
      for (int i = 0; i < static_cast<int>(ce.indices.size()); ++i) {
        spec.eigenvectors(ce.indices[i], k) = ce.vectors(i, local);
      }
    }
  }
  const double scale = spec.eigenvalues.size() ? spec.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double tol = std::max(1e-12, 1e-9 * scale);
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues(k) > tol) spec.above_zero.push_back(static_cast<int>(k));
  }
  return spec;
}

}  // namespace

Spectrum sparse_hermitian_eigen(const SparseCd& m, const std::string& source,
                                bool with_vectors) {
  if (hermiticity_defect_sparse(m) > kHermTol) {
    throw std::invalid_argument("operator is not Hermitian");
  }
  return assemble_spectrum(eigen_by_components(m, with_vectors), m.rows(), source,
                           with_vectors);
}

Spectrum hermitian_eigen(const MatrixOperator& m, bool with_vectors) {
  if (!m.hermitian) {
    throw std::invalid_argument("hermitian_eigen requires a Hermitian operator");
  }
  return sparse_hermitian_eigen(m.mat.sparseView(), "dense operator", with_vectors);
}

double heat_trace(const Spectrum& spec, double t) {
  if (t <= 0.0) {
    throw std::invalid_argument("heat trace needs t > 0");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    sum += std::exp(t * spec.eigenvalues(k));
  }
  return sum;
}

HeatTraceSeries heat_trace_series(const Spectrum& spec, const std::vector<double>& t_grid,
                                  int window_N) {
  HeatTraceSeries series;
  series.window_N = window_N;
  double prev = 0.0;
  for (double t : t_grid) {
    if (t <= prev) {
      throw std::invalid_argument("t grid must be strictly increasing and positive");
    }
    series.samples.push_back({t, heat_trace(spec, t)});
    prev = t;
  }
  return series;
}

double t_min_valid(int window_N) { return 46.0 / (static_cast<double>(window_N) * window_N); }

AsymptoticFit fit_weyl_asymptotics(const HeatTraceSeries& series, double residual_threshold) {
  const double lo = t_min_valid(series.window_N);
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, tr] : series.samples) {
    if (t >= lo && t <= kTMaxValid) pts.push_back({t, tr});
  }
  if (pts.size() < 4) {
    throw std::invalid_argument("need at least 4 heat-trace samples inside the validity window");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0 / pts[i].first;
    design(i, 1) = 1.0;
    y(i) = pts[i].second;
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - design * coef;

  AsymptoticFit fit;
  fit.volume = coef(0);
  fit.curvature = coef(1) / 6.0;
  fit.t_min = pts.front().first;
  fit.t_max = pts.back().first;
  fit.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  if (n > 2) {
    const double sigma2 = resid.squaredNorm() / static_cast<double>(n - 2);
    const Eigen::Matrix2d cov = sigma2 * (design.transpose() * design).inverse();
    fit.volume_stderr = std::sqrt(std::max(cov(0, 0), 0.0));
    fit.curvature_stderr = std::sqrt(std::max(cov(1, 1), 0.0)) / 6.0;
  }
  const double scale = y.cwiseAbs().maxCoeff();
  fit.reliable = fit.residual <= residual_threshold * std::max(scale, 1.0);
  return fit;
}

InvarianceReport invariance_report(const GaugeConfig& cfg, const TorusElement& r1,
                                   const TorusElement& r2, const LatticeWindow& w,
                                   const std::vector<double>& t_grid) {
  if (cfg.symbol_mode != SymbolMode::hermitian) {
    throw std::invalid_argument("invariance report requires hermitian mode");
  }
  const Spectrum spec0 = sparse_hermitian_eigen(sparse_L0m(cfg, w), "L0m");
  const bool trivial = r1.is_zero() && r2.is_zero();
  const Spectrum spec1 =
      trivial ? spec0 : sparse_hermitian_eigen(sparse_Lm(cfg, r1, r2, w), "Lm");

  InvarianceReport report;
  report.unperturbed_series = heat_trace_series(spec0, t_grid, w.half_width());
  report.perturbed_series = heat_trace_series(spec1, t_grid, w.half_width());
  report.unperturbed = fit_weyl_asymptotics(report.unperturbed_series);
  report.perturbed = fit_weyl_asymptotics(report.perturbed_series);
  const double v0 = report.unperturbed.volume;
  report.volume_rel_change =
      std::abs(report.perturbed.volume - v0) / std::max(std::abs(v0), 1e-300);
  report.curvature_change = report.perturbed.curvature - report.unperturbed.curvature;
  report.curvature_uncertainty =
      std::hypot(report.unperturbed.curvature_stderr, report.perturbed.curvature_stderr);
  return report;
}

DixmierEstimate dixmier_extrapolate(const std::vector<std::pair<double, double>>& sums) {
  if (sums.size() < 2) {
    throw std::invalid_argument("extrapolation needs at least two partial sums");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(sums.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = 1.0 / std::log(sums[i].first);
    y(i) = sums[i].second;
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  DixmierEstimate est;
  est.partial_sums = sums;
  est.extrapolated = coef(0);
  est.uncertainty = std::sqrt((y - design * coef).squaredNorm() / static_cast<double>(n));
  return est;
}

DixmierEstimate dixmier_from_weights(const std::vector<double>& weights,
                                     const std::vector<std::int64_t>& cutoffs) {
  std::vector<std::int64_t> cuts = cutoffs;
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> sums;
  double acc = 0.0;
  std::int64_t next = 0;
  std::size_t ci = 0;
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(weights.size()) && ci < cuts.size();
       ++k) {
    acc += weights[static_cast<std::size_t>(k)];
    next = k + 1;
    while (ci < cuts.size() && cuts[ci] == next) {
      sums.push_back({static_cast<double>(next), acc / std::log(static_cast<double>(next))});
      ++ci;
    }
  }
  if (ci != cuts.size()) {
    throw std::invalid_argument("cutoff exceeds the number of available eigenvalues");
  }
  return dixmier_extrapolate(sums);
}

Eigen::VectorXd dirac_square_eigenvalues(const DiracOperator& d) {
  auto [b1, b2] = dirac_square_blocks(d);
  const Eigen::VectorXd e1 = eigenvalues_by_components(b1);
  const Eigen::VectorXd e2 = eigenvalues_by_components(b2);
  Eigen::VectorXd all(e1.size() + e2.size());
  all << e1, e2;
  std::sort(all.data(), all.data() + all.size());
  return all;
}

DixmierEstimate dixmier_volume_form(const DiracOperator& d, const TorusElement& x,
                                    const std::vector<std::int64_t>& cutoffs) {
  if (!d.hermitian) {
    throw std::invalid_argument("volume form needs a Hermitian Dirac operator");
  }
  auto [b1, b2] = dirac_square_blocks(d);
  std::vector<std::pair<double, double>> pairs;  // (lambda of D^2, raw weight)
  pairs.reserve(2 * static_cast<std::size_t>(d.window.dim()));
  for (const SparseCd* block : {&b1, &b2}) {
    for (const auto& comp : eigen_by_components(*block, true)) {
      const int k = static_cast<int>(comp.indices.size());
      // x (x) I restricted to this component, both spinor blocks act as x
      Eigen::MatrixXcd xsub(k, k);
      for (int col = 0; col < k; ++col) {
        for (int row = 0; row < k; ++row) {
          xsub(row, col) = left_mul_entry(x, d.window.mode(comp.indices[row]),
                                          d.window.mode(comp.indices[col]));
        }
      }
      for (int i = 0; i < static_cast<int>(comp.values.size()); ++i) {
        const Eigen::VectorXcd q = comp.vectors.col(i);
        pairs.push_back({comp.values(i), (q.adjoint() * xsub * q)(0).real()});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const double top = pairs.empty() ? 0.0 : std::abs(pairs.back().first);
  const double thr = 1e-8 * std::sqrt(std::max(top, 0.0));
  const double thr2 = thr * thr;
  std::vector<double> weights;
  weights.reserve(pairs.size());
  for (const auto& [lambda, raw] : pairs) {
    // P projects off the kernel of D
    weights.push_back(std::abs(lambda) < thr2 ? 0.0 : 0.5 * raw / lambda);
  }
  return dixmier_from_weights(weights, cutoffs);
}

}  // namespace nctorus
