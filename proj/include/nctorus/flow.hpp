#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "nctorus/gauge.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/spectral.hpp"

namespace nctorus {

/// Phase applied to mode components before exponentiation: `natural` drives
/// e^{i n.w}; `two_pi` drives e^{2 pi i n.w}, which rescales time by (2 pi)^2.
enum class PhaseConvention { natural, two_pi };

/// One planar Brownian path sampled at uniform steps.  Increment streams are
/// keyed by (seed, path_index), so path i is the same regardless of ensemble
/// size and paths can be generated independently in any order.
struct BrownianPath {
  double dt = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  Eigen::Matrix2Xd increments;  // iid normal, mean 0, variance dt
};

BrownianPath make_brownian_path(std::uint64_t seed, std::uint64_t path_index, double dt,
                                int steps);
std::vector<BrownianPath> sample_brownian(double dt, int steps, int n_paths,
                                          std::uint64_t seed);

double mode_phase_scale(PhaseConvention convention);
double lambda0_of_mode(Mode mode, PhaseConvention convention = PhaseConvention::natural);

/// Unit-modulus flow phases e^{i s (n . w)} at steps 0..steps.
Eigen::VectorXcd flow_unperturbed(Mode mode, const BrownianPath& path,
                                  PhaseConvention convention = PhaseConvention::natural);

/// Magnetic flow per mode: Euler integration of df = dj + tau f dt with
/// tau the gauge-correction symbol of the mode.  path_values holds the
/// driving phases j, correction the running integral F; the solution is their
/// sum at every step, exactly (the scheme telescopes).
struct FlowSample {
  Mode mode;
  Complex tau{0.0};
  Eigen::VectorXcd path_values;  // j phases, |j| = 1 at every step
  Eigen::VectorXcd correction;   // F, with f = path_values + correction
};

FlowSample flow_magnetic(Mode mode, const GaugeConfig& cfg, const BrownianPath& path,
                         PhaseConvention convention = PhaseConvention::natural);

struct MeanEstimate {
  Complex mean{0.0};
  double stderr_mean = 0.0;
  int n_samples = 0;
};

/// Ensemble mean and standard error of f at the given step index.
MeanEstimate vacuum_expectation(const std::vector<FlowSample>& samples, int step);

/// Exact mean of the Euler-integrated flow equation df = dj + tau f dt when
/// E j_t = e^{lambda0 t}: variation of constants gives
///   m(t) = (lambda0 e^{lambda0 t} - tau e^{tau t}) / (lambda0 - tau),
/// with the confluent limit e^{lambda0 t}(1 + lambda0 t) at tau = lambda0.
Complex flow_mean_reference(double lambda0, Complex tau, double t);

/// Semigroup value e^{t(lambda0 + tau)}; equals the flow mean only at tau = 0.
Complex semigroup_reference(double lambda0, Complex tau, double t);

/// Streaming ensemble run: per report time, MC mean/stderr plus both
/// reference curves.  Deterministic: paths are consumed in index order.
struct FlowSeries {
  Mode mode;
  Complex tau{0.0};
  std::vector<double> times;
  std::vector<MeanEstimate> estimates;
  std::vector<Complex> flow_reference;       // closed form of the integrated equation
  std::vector<Complex> semigroup_reference_;  // e^{t(lambda0+tau)}
};

struct FlowRunConfig {
  Mode mode;
  double dt = 1e-3;
  int steps = 1000;
  int n_paths = 10000;
  std::uint64_t seed = 1;
  std::vector<double> report_times;
  bool magnetic = false;
  GaugeConfig gauge;
  PhaseConvention convention = PhaseConvention::natural;
};

FlowSeries run_flow_ensemble(const FlowRunConfig& cfg);

/// e^{t L^m} applied to the coefficient vector of x on the window
/// (hermitian mode, self-adjoint r); the expectation-level evolution.
TorusElement perturbed_expectation(const GaugeConfig& cfg, const TorusElement& r1,
                                   const TorusElement& r2, const TorusElement& x,
                                   const LatticeWindow& w, double t);

/// Same with a precomputed spectrum of the generator.
TorusElement apply_heat_semigroup(const Spectrum& spec, const LatticeWindow& w,
                                  const TorusElement& x, double t);

struct MomentReport {
  int order = 0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> reference;
  std::vector<double> error_estimate;  // quadrature error bound, > 0
};

/// Scalar-mode moment recursion m_r(t) = 1 + lambda Int_0^t m_{r-1}(s) ds
/// iterated from the flow mean e^{lambda s}; e^{lambda t} is the fixed point,
/// so every order reproduces it up to quadrature error.  The grid must be
/// uniform; composite Simpson is used for the cumulative integrals.
MomentReport moment_recursion(int r_order, double lambda, const std::vector<double>& t_grid);

struct VarianceReport {
  std::vector<double> times;
  std::vector<double> recursion_route;  // Eh^(2) - (Eh^(1))^2 = e^{lt} - e^{2lt}
  std::vector<double> printed_route;    // scalar reading of the closed formula
  std::vector<double> discrepancy;
};

/// Both variance routes side by side; the two disagree by a constant because
/// the closed formula's grouping is ambiguous, so the discrepancy is reported
/// rather than asserted away.  lambda must be negative (invertibility).
VarianceReport variance_report(double lambda, const std::vector<double>& t_grid);

/// m(y) = y^2 + 2 y (E j_t + 1); the variance decomposition correction term.
double variance_correction_m(double y, double expectation_j);

}  // namespace nctorus
