#pragma once

#include <Eigen/Dense>

#include <filesystem>

#include "nctorus/torus_element.hpp"

namespace nctorus {

/// Complex samples on a uniform symmetric grid, 1-d (single column) or 2-d
/// square (values(i, j) at (axis(i), axis(j))).
struct SampledFunction {
  int dims = 1;
  Eigen::VectorXd axis;
  Eigen::MatrixXcd values;
  bool decay_warning = false;

  double spacing() const { return axis.size() > 1 ? axis(1) - axis(0) : 0.0; }
  double extent() const { return axis.size() > 1 ? axis(axis.size() - 1) - axis(0) : 0.0; }
};

SampledFunction make_grid(int dims, double extent, double spacing);

/// Built-in test functions: centered Gaussian e^{-|u|^2 / (2 width^2)} and a
/// compactly supported bump exp(-1 / (1 - |u/radius|^2)).
SampledFunction sample_gaussian(int dims, double extent, double spacing, double width = 1.0);
SampledFunction sample_bump(int dims, double extent, double spacing, double radius);

/// Schwartz-class proxy: |values| on the outermost 5% of the grid below
/// 1e-8 * max|values|.
bool decay_ok(const SampledFunction& g);

/// Trapezoid quadrature of g over its grid.
Complex grid_integral(const SampledFunction& g);

/// ghat(eps) = (2 pi)^{-d} Int e^{i <eps, u>} g(u) du on the same grid
/// (self-dual sampling; valid while both sides decay inside the extent).
/// A decay violation only flags the result.
SampledFunction fourier_transform(const SampledFunction& g, int d = 1);

/// g(u) = Int e^{-i <u, eps>} ghat(eps) d eps.
SampledFunction inverse_fourier(const SampledFunction& ghat, int d = 1);

/// Twisted convolution on the Fourier side:
/// (g . h)^(u) = Int ghat(u - v) hhat(v) e^{(i/2) f(u,v)} dv with
/// f(u, v) = u1 v2 - u2 v1 (identically zero for 1-d data).
SampledFunction twisted_convolve_hat(const SampledFunction& ghat, const SampledFunction& hhat);

/// Position-side twisted product via transform, twist, inverse transform.
SampledFunction twisted_convolve(const SampledFunction& g, const SampledFunction& h, int d = 1);

/// Involution g^N(u) = conj(g(-u)); exact on the symmetric grid.
SampledFunction involution(const SampledFunction& g);

/// The faithful trace (2 pi)^{-d} Int g.
Complex phi_trace_euclidean(const SampledFunction& g, int d = 1);

/// Translation-modulation Weyl operator on 1-d samples:
/// (Z_u g)(x) = e^{-i u1 u2 / 2} e^{i u2 x} g(x + u1); u1 must be an integer
/// multiple of the grid spacing (shifted samples leaving the grid are zero).
SampledFunction weyl_operator(const SampledFunction& g, double u1, double u2);

/// CSV exchange format: header "# extent=<L> spacing=<h> dims=<d>" then rows
/// u1 [, u2], re, im in grid order.
void write_sampled_csv(const std::filesystem::path& path, const SampledFunction& g);
SampledFunction read_sampled_csv(const std::filesystem::path& path);

struct MagneticHeatParams {
  double G1 = 0.0;
  double G2 = 0.0;
  double t = 1.0;
  int d = 1;
};

struct HeatTraceComparison {
  double analytic = 0.0;     // closed form with the kernel-diagonal normalization
  double quadrature = 0.0;   // grid integral of the kernel diagonal
  double printed_form = 0.0; // (2 pi)^d t^{-d} f(G1, G2), kept for comparison
  double max_imag = 0.0;     // largest imaginary residue of the nominally real results
};

/// Both evaluation routes of Tr(M_g T^m_t).  The closed form carries the
/// ghat(0) e^{-2 t pi^2 G1 G2} prefactor of the kernel diagonal; the bare
/// (2 pi)^d t^{-d} f(G1,G2) value is reported alongside rather than matched.
/// Only d = 1 (two-dimensional grids) is integrated.
HeatTraceComparison magnetic_heat_trace(const MagneticHeatParams& params,
                                        const SampledFunction& g);

}  // namespace nctorus
