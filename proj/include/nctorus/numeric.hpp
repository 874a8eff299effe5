#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

namespace nctorus {

using SparseCd = Eigen::SparseMatrix<std::complex<double>>;

/// Connected components of the symmetric sparsity pattern (union-find).
/// Index sets are returned sorted, grouped by component root.
std::vector<std::vector<int>> connected_components(const SparseCd& m);

struct ComponentEigen {
  std::vector<int> indices;      // global row indices of this component
  Eigen::VectorXd values;        // ascending within the component
  Eigen::MatrixXcd vectors;      // columns, in component-local coordinates; empty if not requested
};

/// Dense self-adjoint eigensolve applied per connected component.  Banded
/// operators whose sparsity graph decouples (e.g. single-direction
/// perturbations) split into many small blocks, which is what makes the large
/// windows tractable.
std::vector<ComponentEigen> eigen_by_components(const SparseCd& m, bool with_vectors);

/// All eigenvalues of a self-adjoint sparse matrix, ascending.
Eigen::VectorXd eigenvalues_by_components(const SparseCd& m);

/// Largest singular value by power iteration on m^H m.  Deterministic start
/// vector; converges to the top of the spectrum even when it is degenerate.
double spectral_norm(const SparseCd& m, int max_iters = 400, double tol = 1e-12);

/// Cumulative integral of uniformly sampled values (spacing h) with a
/// composite-Simpson scheme; odd nodes use the quadratic through the
/// surrounding three points.  O(h^4) accurate.
Eigen::VectorXd cumulative_integral(const Eigen::VectorXd& values, double h);

/// FNV-1a 64-bit hash, used for stable config fingerprints in file names.
std::uint64_t fnv1a64(std::string_view data);

/// max |m - m^H| entrywise.
double hermiticity_defect(const Eigen::MatrixXcd& m);
double hermiticity_defect_sparse(const SparseCd& m);

}  // namespace nctorus
