#include "nctorus/euclidean.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "nctorus/csv.hpp"

namespace nctorus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void require_common_grid(const SampledFunction& a, const SampledFunction& b) {
  if (a.dims != b.dims || a.axis.size() != b.axis.size() ||
      (a.axis - b.axis).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("sampled functions live on different grids");
  }
}

double norm_factor(int d) { return std::pow(2.0 * kPi, -d); }

}  // namespace

SampledFunction make_grid(int dims, double extent, double spacing) {
  if (dims != 1 && dims != 2) {
    throw std::invalid_argument("grids are 1-d or 2-d");
  }
  if (extent <= 0.0 || spacing <= 0.0) {
    throw std::invalid_argument("grid needs positive extent and spacing");
  }
  const int half = static_cast<int>(std::round(extent / (2.0 * spacing)));
  const int count = 2 * half + 1;
  SampledFunction g;
  g.dims = dims;
  g.axis.resize(count);
  for (int i = 0; i < count; ++i) g.axis(i) = spacing * (i - half);
  g.values =
      dims == 1 ? Eigen::MatrixXcd::Zero(count, 1) : Eigen::MatrixXcd::Zero(count, count);
  return g;
}

SampledFunction sample_gaussian(int dims, double extent, double spacing, double width) {
  SampledFunction g = make_grid(dims, extent, spacing);
  const double w2 = 2.0 * width * width;
  for (int i = 0; i < g.axis.size(); ++i) {
    if (dims == 1) {
      g.values(i, 0) = std::exp(-g.axis(i) * g.axis(i) / w2);
    } else {
      for (int j = 0; j < g.axis.size(); ++j) {
        g.values(i, j) = std::exp(-(g.axis(i) * g.axis(i) + g.axis(j) * g.axis(j)) / w2);
      }
    }
  }
  return g;
}

SampledFunction sample_bump(int dims, double extent, double spacing, double radius) {
  SampledFunction g = make_grid(dims, extent, spacing);
  auto bump = [radius](double r2) {
    const double s = r2 / (radius * radius);
    return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0;
  };
  for (int i = 0; i < g.axis.size(); ++i) {
    if (dims == 1) {
      g.values(i, 0) = bump(g.axis(i) * g.axis(i));
    } else {
      for (int j = 0; j < g.axis.size(); ++j) {
        g.values(i, j) = bump(g.axis(i) * g.axis(i) + g.axis(j) * g.axis(j));
      }
    }
  }
  return g;
}

bool decay_ok(const SampledFunction& g) {
  const double peak = g.values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return true;
  const int count = static_cast<int>(g.axis.size());
  const int shell = std::max(1, count / 20);
  double boundary = 0.0;
  if (g.dims == 1) {
    for (int i = 0; i < count; ++i) {
      if (i >= shell && i < count - shell) continue;
      boundary = std::max(boundary, std::abs(g.values(i, 0)));
    }
  } else {
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        if (i >= shell && i < count - shell && j >= shell && j < count - shell) continue;
        boundary = std::max(boundary, std::abs(g.values(i, j)));
      }
    }
  }
  return boundary < 1e-8 * peak;
}

Complex grid_integral(const SampledFunction& g) {
  const double h = g.spacing();
  const Complex sum = g.values.sum();
  return g.dims == 1 ? sum * h : sum * h * h;
}

namespace {

SampledFunction transform_impl(const SampledFunction& g, double sign, double scale) {
  SampledFunction out = make_grid(g.dims, g.extent(), g.spacing());
  out.decay_warning = !decay_ok(g);
  const int count = static_cast<int>(g.axis.size());
  const double h = g.spacing();
  if (g.dims == 1) {
    // phase table: e^{i sign eps_k u_i}
    for (int k = 0; k < count; ++k) {
      Complex acc{0.0};
      for (int i = 0; i < count; ++i) {
        acc += std::polar(1.0, sign * out.axis(k) * g.axis(i)) * g.values(i, 0);
      }
      out.values(k, 0) = scale * h * acc;
    }
    return out;
  }
  // 2-d transform factorizes into two 1-d passes
  Eigen::MatrixXcd phase(count, count);
  for (int k = 0; k < count; ++k) {
    for (int i = 0; i < count; ++i) {
      phase(k, i) = std::polar(1.0, sign * out.axis(k) * g.axis(i));
    }
  }
  out.values = (scale * h * h) * (phase * g.values * phase.transpose());
  return out;
}

}  // namespace

SampledFunction fourier_transform(const SampledFunction& g, int d) {
  return transform_impl(g, +1.0, norm_factor(d));
}

SampledFunction inverse_fourier(const SampledFunction& ghat, int d) {
  return transform_impl(ghat, -1.0, 1.0);
}

SampledFunction twisted_convolve_hat(const SampledFunction& ghat,
                                     const SampledFunction& hhat) {
  require_common_grid(ghat, hhat);
  SampledFunction out = make_grid(ghat.dims, ghat.extent(), ghat.spacing());
  const int count = static_cast<int>(ghat.axis.size());
  const double h = ghat.spacing();
  if (ghat.dims == 1) {
    // no second coordinate, the twist phase is identically 1
    for (int k = 0; k < count; ++k) {
      Complex acc{0.0};
      const double u = ghat.axis(k);
      for (int i = 0; i < count; ++i) {
        const double v = ghat.axis(i);
        const double diff = u - v;
        const int di = static_cast<int>(std::round((diff - ghat.axis(0)) / h));
        if (di < 0 || di >= count) continue;
        acc += ghat.values(di, 0) * hhat.values(i, 0);
      }
      out.values(k, 0) = h * acc;
    }
    return out;
  }
  for (int k1 = 0; k1 < count; ++k1) {
    for (int k2 = 0; k2 < count; ++k2) {
      const double u1 = ghat.axis(k1);
      const double u2 = ghat.axis(k2);
      Complex acc{0.0};
      for (int i1 = 0; i1 < count; ++i1) {
        const double v1 = ghat.axis(i1);
        const int d1 = static_cast<int>(std::round((u1 - v1 - ghat.axis(0)) / h));
        if (d1 < 0 || d1 >= count) continue;
        for (int i2 = 0; i2 < count; ++i2) {
          const double v2 = ghat.axis(i2);
          const int d2 = static_cast<int>(std::round((u2 - v2 - ghat.axis(0)) / h));
          if (d2 < 0 || d2 >= count) continue;
          const double twist = 0.5 * (u1 * v2 - u2 * v1);
          acc += ghat.values(d1, d2) * hhat.values(i1, i2) * std::polar(1.0, twist);
        }
      }
      out.values(k1, k2) = h * h * acc;
    }
  }
  return out;
}

SampledFunction twisted_convolve(const SampledFunction& g, const SampledFunction& h, int d) {
  require_common_grid(g, h);
  const SampledFunction ghat = fourier_transform(g, d);
  const SampledFunction hhat = fourier_transform(h, d);
  return inverse_fourier(twisted_convolve_hat(ghat, hhat), d);
}

SampledFunction involution(const SampledFunction& g) {
  SampledFunction out = make_grid(g.dims, g.extent(), g.spacing());
  const int count = static_cast<int>(g.axis.size());
  if (g.dims == 1) {
    for (int i = 0; i < count; ++i) {
      out.values(i, 0) = std::conj(g.values(count - 1 - i, 0));
    }
  } else {
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        out.values(i, j) = std::conj(g.values(count - 1 - i, count - 1 - j));
      }
    }
  }
  return out;
}

Complex phi_trace_euclidean(const SampledFunction& g, int d) {
  return norm_factor(d) * grid_integral(g);
}

SampledFunction weyl_operator(const SampledFunction& g, double u1, double u2) {
  if (g.dims != 1) {
    throw std::invalid_argument("Weyl operators act on 1-d samples here");
  }
  const double h = g.spacing();
  const double shift_steps = u1 / h;
  const int shift = static_cast<int>(std::round(shift_steps));
  if (std::abs(shift_steps - shift) > 1e-9) {
    throw std::invalid_argument("translation must be an integer number of grid steps");
  }
  const int count = static_cast<int>(g.axis.size());
  SampledFunction out = make_grid(1, g.extent(), h);
  // (Z_u g)(x) = e^{i u1 u2 / 2} e^{i u2 x} g(x + u1); this symmetrization
  // gives Z_u Z_v = Z_{u+v} e^{(i/2)(u1 v2 - u2 v1)}
  const Complex sym = std::polar(1.0, 0.5 * u1 * u2);
  for (int i = 0; i < count; ++i) {
    const int src = i + shift;
    const Complex val = (src >= 0 && src < count) ? g.values(src, 0) : Complex(0.0);
    out.values(i, 0) = sym * std::polar(1.0, u2 * g.axis(i)) * val;
  }
  return out;
}

void write_sampled_csv(const std::filesystem::path& path, const SampledFunction& g) {
  CsvWriter csv(path);
  csv.raw_row("# extent=" + format_g17(g.extent()) + " spacing=" + format_g17(g.spacing()) +
              " dims=" + std::to_string(g.dims));
  const int count = static_cast<int>(g.axis.size());
  if (g.dims == 1) {
    csv.header({"u", "re", "im"});
    for (int i = 0; i < count; ++i) {
      csv.row(std::array<double, 3>{g.axis(i), g.values(i, 0).real(), g.values(i, 0).imag()});
    }
  } else {
    csv.header({"u1", "u2", "re", "im"});
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        csv.row(std::array<double, 4>{g.axis(i), g.axis(j), g.values(i, j).real(),
                                      g.values(i, j).imag()});
      }
    }
  }
}

SampledFunction read_sampled_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open sampled-function file: " + path.string());
  }
  std::string line;
  std::getline(in, line);
  double extent = 0.0, spacing = 0.0;
  int dims = 0;
  if (std::sscanf(line.c_str(), "# extent=%lf spacing=%lf dims=%d", &extent, &spacing,
                  &dims) != 3) {
    throw std::runtime_error("malformed sampled-function header");
  }
  SampledFunction g = make_grid(dims, extent, spacing);
  std::getline(in, line);  // column names
  const int count = static_cast<int>(g.axis.size());
  double u1, u2, re, im;
  if (dims == 1) {
    for (int i = 0; i < count; ++i) {
      std::getline(in, line);
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &u1, &re, &im) != 3) {
        throw std::runtime_error("malformed sample row");
      }
      g.values(i, 0) = Complex(re, im);
    }
  } else {
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        std::getline(in, line);
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &u1, &u2, &re, &im) != 4) {
          throw std::runtime_error("malformed sample row");
        }
        g.values(i, j) = Complex(re, im);
      }
    }
  }
  return g;
}

HeatTraceComparison magnetic_heat_trace(const MagneticHeatParams& params,
                                        const SampledFunction& g) {
  if (params.t <= 0.0) {
    throw std::invalid_argument("heat trace needs t > 0");
  }
  if (params.d != 1 || g.dims != 2) {
    throw std::invalid_argument("quadrature implemented for d = 1 on 2-d grids");
  }
  const double t = params.t;
  const double g1 = params.G1;
  const double g2 = params.G2;
  const Complex tau = 0.5 * kPi * kI * g1 - kPi * kI * g2;
  const Complex sigma = 0.5 * kPi * kI * g2 - kPi * kI * g1;
  const double cross = 4.0 * kPi * kPi * g1 * g2;

  const SampledFunction ghat = fourier_transform(g, params.d);
  const int count = static_cast<int>(g.axis.size());
  const int center = count / 2;
  const Complex ghat0 = ghat.values(center, center);

  // kernel diagonal ghat(0) e^{-(t/2) w(u)} with
  // w(u) = (u1 + tau)^2 + (u2 + sigma)^2 - sigma^2 - tau^2 + 4 pi^2 G1 G2
  Complex quad{0.0};
  const double h = g.spacing();
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const Complex w = (g.axis(i) + tau) * (g.axis(i) + tau) +
                        (g.axis(j) + sigma) * (g.axis(j) + sigma) - sigma * sigma -
                        tau * tau + cross;
      quad += std::exp(-0.5 * t * w);
    }
  }
  quad *= ghat0 * h * h;

  const Complex analytic = ghat0 * std::exp(-0.5 * t * cross) *
                           std::exp(0.5 * t * (sigma * sigma + tau * tau)) * (2.0 * kPi / t);
  const Complex f_factor = std::exp(0.5 * t * (cross + sigma * sigma + tau * tau));

  HeatTraceComparison cmp;
  cmp.analytic = analytic.real();
  cmp.quadrature = quad.real();
  cmp.printed_form = ((2.0 * kPi / t) * f_factor).real();
  cmp.max_imag = std::max({std::abs(analytic.imag()), std::abs(quad.imag()),
                           std::abs(f_factor.imag())});
  return cmp;
}

}  // namespace nctorus
