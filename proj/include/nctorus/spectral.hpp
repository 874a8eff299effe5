#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nctorus/operators.hpp"

namespace nctorus {

struct Spectrum {
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // columns matching eigenvalues; empty unless requested
  std::string source;
  /// Indices with eigenvalue above +tolerance; nonempty only for
  /// boundary-artifact modes when the operator should generate a contraction
  /// semigroup.
  std::vector<int> above_zero;
};

/// Full spectrum of a Hermitian operator.  The sparsity graph is split into
/// connected components first and each block is solved densely, so banded
/// single-direction perturbations stay cheap at large windows.
/// Throws std::invalid_argument when the hermitian flag is not set.
Spectrum hermitian_eigen(const MatrixOperator& m, bool with_vectors = false);

/// Same, for an operator kept in sparse form (hermiticity is verified).
Spectrum sparse_hermitian_eigen(const SparseCd& m, const std::string& source,
                                bool with_vectors = false);

/// Tr e^{tL} over the truncated spectrum; t must be positive.
double heat_trace(const Spectrum& spec, double t);

struct HeatTraceSeries {
  std::vector<std::pair<double, double>> samples;  // (t, trace), t ascending
  int window_N = 0;
};

HeatTraceSeries heat_trace_series(const Spectrum& spec, const std::vector<double>& t_grid,
                                  int window_N);

/// Truncation at half-width N under-counts the trace once e^{-t N^2 / 2}
/// matters; this is the smallest t the window supports at ~1e-10 accuracy.
double t_min_valid(int window_N);
inline constexpr double kTMaxValid = 0.1;

struct AsymptoticFit {
  double volume = 0.0;     // coefficient of 1/t
  double curvature = 0.0;  // constant term / 6
  double volume_stderr = 0.0;
  double curvature_stderr = 0.0;
  double residual = 0.0;  // rms misfit of trace(t) ~ V/t + c
  double t_min = 0.0;
  double t_max = 0.0;
  bool reliable = true;
};

/// Least-squares fit trace(t) ~ V/t + c over the samples inside the validity
/// window.  Needs at least 4 usable samples; a residual above
/// `residual_threshold` (relative to the sample scale) flags the fit
/// unreliable instead of throwing.
AsymptoticFit fit_weyl_asymptotics(const HeatTraceSeries& series,
                                   double residual_threshold = 1e-4);

struct InvarianceReport {
  AsymptoticFit unperturbed;
  AsymptoticFit perturbed;
  HeatTraceSeries unperturbed_series;
  HeatTraceSeries perturbed_series;
  double volume_rel_change = 0.0;   // |V_m - V_0| / |V_0|
  double curvature_change = 0.0;    // s_m - s_0
  double curvature_uncertainty = 0.0;
};

/// Fits the heat-trace asymptotics of the unperturbed and perturbed magnetic
/// Laplacians on the same window and grid.
InvarianceReport invariance_report(const GaugeConfig& cfg, const TorusElement& r1,
                                   const TorusElement& r2, const LatticeWindow& w,
                                   const std::vector<double>& t_grid);

struct DixmierEstimate {
  std::vector<std::pair<double, double>> partial_sums;  // (cutoff R, sum_{k<=R} mu_k / log R)
  double extrapolated = 0.0;
  double uncertainty = 0.0;  // rms residual of the linear-in-1/log R fit
};

/// Linear extrapolation of log-Cesaro partial sums in 1/log R.  A genuine
/// Dixmier trace needs a generalized limit; this estimator is calibrated on
/// the harmonic sequence (mu_k = 1/k gives 1 within 2% at R = 1e6).
DixmierEstimate dixmier_extrapolate(const std::vector<std::pair<double, double>>& sums);

/// Partial sums of a weight sequence already ordered by ascending eigenvalue.
DixmierEstimate dixmier_from_weights(const std::vector<double>& weights,
                                     const std::vector<std::int64_t>& cutoffs);

/// Volume-form estimate (1/2) Tr_w(x |D|^{-2} P): eigenpairs of D^2 ordered by
/// ascending eigenvalue, weights <phi_k, (x (x) I) phi_k> / lambda_k with the
/// kernel projected out, log-Cesaro partial sums at the cutoffs.
DixmierEstimate dixmier_volume_form(const DiracOperator& d, const TorusElement& x,
                                    const std::vector<std::int64_t>& cutoffs);

/// Ascending eigenvalues of both blocks of D^2 (no vectors); handy for
/// cutoff choice and oracles.
Eigen::VectorXd dirac_square_eigenvalues(const DiracOperator& d);

}  // namespace nctorus
