#include "nctorus/flow.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nctorus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Explicit Box-Muller on top of the fully specified mt19937_64 stream, so
/// output bytes do not depend on the standard library's normal_distribution.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
  }

 private:
  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

int step_of_time(double t, double dt, int steps) {
  const int s = static_cast<int>(std::lround(t / dt));
  if (s < 0 || s > steps) {
    throw std::invalid_argument("report time outside the simulated horizon");
  }
  return s;
}

}  // namespace

BrownianPath make_brownian_path(std::uint64_t seed, std::uint64_t path_index, double dt,
                                int steps) {
  if (dt <= 0.0 || steps < 1) {
    throw std::invalid_argument("Brownian path needs dt > 0 and steps >= 1");
  }
  BrownianPath path{dt, steps, seed, path_index, Eigen::Matrix2Xd(2, steps)};
  NormalStream normals(splitmix64(seed ^ splitmix64(path_index)));
  const double scale = std::sqrt(dt);
  for (int s = 0; s < steps; ++s) {
    path.increments(0, s) = scale * normals.next();
    path.increments(1, s) = scale * normals.next();
  }
  return path;
}

std::vector<BrownianPath> sample_brownian(double dt, int steps, int n_paths,
                                          std::uint64_t seed) {
  std::vector<BrownianPath> paths;
  paths.reserve(n_paths);
  for (int i = 0; i < n_paths; ++i) {
    paths.push_back(make_brownian_path(seed, static_cast<std::uint64_t>(i), dt, steps));
  }
  return paths;
}

double mode_phase_scale(PhaseConvention convention) {
  return convention == PhaseConvention::natural ? 1.0 : kTwoPi;
}

double lambda0_of_mode(Mode mode, PhaseConvention convention) {
  const double p = mode_phase_scale(convention);
  return -0.5 * p * p *
         (static_cast<double>(mode.n1) * mode.n1 + static_cast<double>(mode.n2) * mode.n2);
}

Eigen::VectorXcd flow_unperturbed(Mode mode, const BrownianPath& path,
                                  PhaseConvention convention) {
  const double p = mode_phase_scale(convention);
  Eigen::VectorXcd out(path.steps + 1);
  double w1 = 0.0, w2 = 0.0;
  out(0) = Complex(1.0);
  for (int s = 0; s < path.steps; ++s) {
    w1 += path.increments(0, s);
    w2 += path.increments(1, s);
    out(s + 1) = std::polar(1.0, p * (mode.n1 * w1 + mode.n2 * w2));
  }
  return out;
}

FlowSample flow_magnetic(Mode mode, const GaugeConfig& cfg, const BrownianPath& path,
                         PhaseConvention convention) {
  FlowSample sample;
  sample.mode = mode;
  sample.tau = t0_symbol(cfg, mode);
  sample.path_values = flow_unperturbed(mode, path, convention);
  sample.correction = Eigen::VectorXcd(path.steps + 1);
  sample.correction(0) = Complex(0.0);
  for (int s = 0; s < path.steps; ++s) {
    const Complex f_s = sample.path_values(s) + sample.correction(s);
    sample.correction(s + 1) = sample.correction(s) + sample.tau * f_s * path.dt;
  }
  return sample;
}

MeanEstimate vacuum_expectation(const std::vector<FlowSample>& samples, int step) {
  if (samples.empty()) {
    throw std::invalid_argument("vacuum expectation of an empty ensemble");
  }
  Complex sum{0.0};
  double sumsq = 0.0;
  for (const auto& s : samples) {
    const Complex f = s.path_values(step) + s.correction(step);
    sum += f;
    sumsq += std::norm(f);
  }
  const int n = static_cast<int>(samples.size());
  const Complex mean = sum / static_cast<double>(n);
  MeanEstimate est{mean, 0.0, n};
  if (n > 1) {
    const double var = std::max(0.0, (sumsq - n * std::norm(mean)) / (n - 1.0));
    est.stderr_mean = std::sqrt(var / n);
  }
  return est;
}

Complex flow_mean_reference(double lambda0, Complex tau, double t) {
  const Complex d = Complex(lambda0) - tau;
  if (std::abs(d) < 1e-9) {
    return std::exp(lambda0 * t) * (1.0 + lambda0 * t);
  }
  return (lambda0 * std::exp(lambda0 * t) - tau * std::exp(tau * t)) / d;
}

Complex semigroup_reference(double lambda0, Complex tau, double t) {
  return std::exp((Complex(lambda0) + tau) * t);
}

FlowSeries run_flow_ensemble(const FlowRunConfig& cfg) {
  FlowSeries series;
  series.mode = cfg.mode;
  series.tau = cfg.magnetic ? t0_symbol(cfg.gauge, cfg.mode) : Complex(0.0);
  const double lambda0 = lambda0_of_mode(cfg.mode, cfg.convention);

  std::vector<int> steps;
  for (double t : cfg.report_times) {
    steps.push_back(step_of_time(t, cfg.dt, cfg.steps));
    series.times.push_back(t);
    series.flow_reference.push_back(flow_mean_reference(lambda0, series.tau, t));
    series.semigroup_reference_.push_back(semigroup_reference(lambda0, series.tau, t));
  }

  std::vector<Complex> sum(steps.size(), Complex(0.0));
  std::vector<double> sumsq(steps.size(), 0.0);
  for (int i = 0; i < cfg.n_paths; ++i) {
    const BrownianPath path =
        make_brownian_path(cfg.seed, static_cast<std::uint64_t>(i), cfg.dt, cfg.steps);
    if (cfg.magnetic) {
      const FlowSample s = flow_magnetic(cfg.mode, cfg.gauge, path, cfg.convention);
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const Complex f = s.path_values(steps[k]) + s.correction(steps[k]);
        sum[k] += f;
        sumsq[k] += std::norm(f);
      }
    } else {
      const Eigen::VectorXcd j = flow_unperturbed(cfg.mode, path, cfg.convention);
      for (std::size_t k = 0; k < steps.size(); ++k) {
        sum[k] += j(steps[k]);
        sumsq[k] += std::norm(j(steps[k]));
      }
    }
  }
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Complex mean = sum[k] / static_cast<double>(cfg.n_paths);
    MeanEstimate est{mean, 0.0, cfg.n_paths};
    if (cfg.n_paths > 1) {
      const double var =
          std::max(0.0, (sumsq[k] - cfg.n_paths * std::norm(mean)) / (cfg.n_paths - 1.0));
      est.stderr_mean = std::sqrt(var / cfg.n_paths);
    }
    series.estimates.push_back(est);
  }
  return series;
}

TorusElement apply_heat_semigroup(const Spectrum& spec, const LatticeWindow& w,
                                  const TorusElement& x, double t) {
  if (spec.eigenvectors.size() == 0) {
    throw std::invalid_argument("semigroup application needs eigenvectors");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(w.dim());
  for (const auto& [n, c] : x.coeffs()) {
    if (!w.contains(n)) {
      throw std::invalid_argument("element support exceeds the lattice window");
    }
    v(w.index(n)) = c;
  }
  const Eigen::VectorXcd coords = spec.eigenvectors.adjoint() * v;
  Eigen::VectorXcd scaled(coords.size());
  for (Eigen::Index k = 0; k < coords.size(); ++k) {
    scaled(k) = std::exp(t * spec.eigenvalues(k)) * coords(k);
  }
  const Eigen::VectorXcd out = spec.eigenvectors * scaled;
  TorusElement result(x.theta());
  for (int i = 0; i < w.dim(); ++i) {
    if (out(i) != Complex(0.0)) result.set_coeff(w.mode(i), out(i));
  }
  return result;
}

TorusElement perturbed_expectation(const GaugeConfig& cfg, const TorusElement& r1,
                                   const TorusElement& r2, const TorusElement& x,
                                   const LatticeWindow& w, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("negative time");
  }
  if (t == 0.0) return x;
  const Spectrum spec = sparse_hermitian_eigen(sparse_Lm(cfg, r1, r2, w), "Lm", true);
  return apply_heat_semigroup(spec, w, x, t);
}

namespace {

double uniform_spacing(const std::vector<double>& t_grid) {
  if (t_grid.size() < 3 || t_grid.front() != 0.0) {
    throw std::invalid_argument("moment grid must start at 0 with at least 3 points");
  }
  const double h = t_grid[1] - t_grid[0];
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (std::abs(t_grid[i] - t_grid[i - 1] - h) > 1e-12 * std::max(1.0, h)) {
      throw std::invalid_argument("moment grid must be uniform");
    }
  }
  return h;
}

}  // namespace

MomentReport moment_recursion(int r_order, double lambda, const std::vector<double>& t_grid) {
  if (r_order < 1) {
    throw std::invalid_argument("moment order must be >= 1");
  }
  if (lambda > 0.0) {
    throw std::invalid_argument("moment recursion expects lambda <= 0");
  }
  const double h = uniform_spacing(t_grid);
  const Eigen::Index n = static_cast<Eigen::Index>(t_grid.size());

  Eigen::VectorXd current(n);
  for (Eigen::Index i = 0; i < n; ++i) current(i) = std::exp(lambda * t_grid[i]);
  for (int r = 0; r < r_order; ++r) {
    const Eigen::VectorXd integral = cumulative_integral(current, h);
    for (Eigen::Index i = 0; i < n; ++i) current(i) = 1.0 + lambda * integral(i);
  }

  MomentReport report;
  report.order = r_order;
  report.times = t_grid;
  const double t_final = t_grid.back();
  const double quad_bound =
      std::pow(h, 4) / 180.0 * std::pow(std::abs(lambda), 5) * std::max(t_final, h) *
          static_cast<double>(r_order) +
      1e-15;
  for (Eigen::Index i = 0; i < n; ++i) {
    report.values.push_back(current(i));
    report.reference.push_back(std::exp(lambda * t_grid[i]));
    report.error_estimate.push_back(quad_bound);
  }
  return report;
}

VarianceReport variance_report(double lambda, const std::vector<double>& t_grid) {
  if (lambda >= 0.0) {
    throw std::invalid_argument("variance needs lambda < 0 (invertible generator)");
  }
  VarianceReport report;
  for (double t : t_grid) {
    const double first = std::exp(lambda * t);
    const double second = std::exp(lambda * t);  // recursion fixed point
    const double recursion = second - first * first;
    // scalar reading of the closed formula:
    // (1/lambda) e^{t lambda} lambda (1 - e^{-t lambda} - e^{t lambda})
    const double printed = first * (1.0 - std::exp(-lambda * t) - first);
    report.times.push_back(t);
    report.recursion_route.push_back(recursion);
    report.printed_route.push_back(printed);
    report.discrepancy.push_back(printed - recursion);
  }
  return report;
}

double variance_correction_m(double y, double expectation_j) {
  return y * y + 2.0 * y * (expectation_j + 1.0);
}

}  // namespace nctorus
