#include "nctorus/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nctorus {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<std::vector<int>> connected_components(const SparseCd& m) {
  const int n = static_cast<int>(m.rows());
  UnionFind uf(n);
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SparseCd::InnerIterator it(m, col); it; ++it) {
      if (it.value() != std::complex<double>(0.0)) {
        uf.unite(static_cast<int>(it.row()), col);
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> root_to_group(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_to_group[r] < 0) {
      root_to_group[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[root_to_group[r]].push_back(i);
  }
  return groups;
}

std::vector<ComponentEigen> eigen_by_components(const SparseCd& m, bool with_vectors) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eigen_by_components needs a square matrix");
  }
  auto groups = connected_components(m);
  std::vector<ComponentEigen> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    const int k = static_cast<int>(g.size());
    Eigen::MatrixXcd sub = Eigen::MatrixXcd::Zero(k, k);
    std::vector<int> local(m.rows(), -1);
    for (int i = 0; i < k; ++i) local[g[i]] = i;
    for (int i = 0; i < k; ++i) {
      for (SparseCd::InnerIterator it(m, g[i]); it; ++it) {
        const int lr = local[it.row()];
        if (lr >= 0) sub(lr, i) = it.value();
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        sub, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("self-adjoint eigensolver failed on a component");
    }
    ComponentEigen ce;
    ce.indices = std::move(g);
    ce.values = solver.eigenvalues();
    if (with_vectors) ce.vectors = solver.eigenvectors();
    out.push_back(std::move(ce));
  }
  return out;
}

Eigen::VectorXd eigenvalues_by_components(const SparseCd& m) {
  auto comps = eigen_by_components(m, false);
  std::vector<double> all;
  for (const auto& c : comps) {
    all.insert(all.end(), c.values.data(), c.values.data() + c.values.size());
  }
  std::sort(all.begin(), all.end());
  return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

double spectral_norm(const SparseCd& m, int max_iters, double tol) {
  const Eigen::Index n = m.cols();
  if (n == 0) return 0.0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) += std::complex<double>(0.0, 1e-3 * static_cast<double>((i % 7) + 1));
  }
  v.normalize();
  const SparseCd mh = SparseCd(m.adjoint());
  double prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXcd w = mh * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double est = std::sqrt(norm);
    if (std::abs(est - prev) <= tol * std::max(1.0, est)) return est;
    prev = est;
  }
  return prev;
}

Eigen::VectorXd cumulative_integral(const Eigen::VectorXd& values, double h) {
  const Eigen::Index n = values.size();
  if (n < 3) {
    throw std::invalid_argument("cumulative_integral needs at least 3 samples");
  }
  if (h <= 0.0) {
    throw std::invalid_argument("cumulative_integral needs positive spacing");
  }
  Eigen::VectorXd out(n);
  out(0) = 0.0;
  for (Eigen::Index i = 2; i < n; i += 2) {
    out(i) = out(i - 2) + h / 3.0 * (values(i - 2) + 4.0 * values(i - 1) + values(i));
  }
  // odd nodes: half-interval rule from the parabola through three neighbours
  for (Eigen::Index i = 1; i < n; i += 2) {
    if (i + 1 < n) {
      out(i) = out(i - 1) + h / 12.0 * (5.0 * values(i - 1) + 8.0 * values(i) - values(i + 1));
    } else {
      out(i) = out(i - 1) + h / 12.0 * (-values(i - 2) + 8.0 * values(i - 1) + 5.0 * values(i));
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

double hermiticity_defect_sparse(const SparseCd& m) {
  SparseCd d = m - SparseCd(m.adjoint());
  double defect = 0.0;
  for (int col = 0; col < d.outerSize(); ++col) {
    for (SparseCd::InnerIterator it(d, col); it; ++it) {
      defect = std::max(defect, std::abs(it.value()));
    }
  }
  return defect;
}

}  // namespace nctorus
