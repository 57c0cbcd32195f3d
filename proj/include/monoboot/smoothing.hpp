#pragma once

// Log-scale kernel smoothing of a concave piecewise-linear CDF: the smoothed
// CDF F-check, its density and density derivative, the population smoother
// F-bar, and rate-valid bandwidth rules.
//
// All three evaluators reduce to integrals of the form
//   I_j = h^{-j} Int W_j(z) B(x e^{-hz}) dz,   W_0 = K, W_1 = K', W_2 = K'',
// with F-check = I_0, f-check = I_1 / x, f-check' = (I_2 - I_1) / x^2.
// The base B is piecewise linear, so the quadrature splits the z-axis at the
// images of its knots and uses Gauss-Legendre panels on the smooth pieces.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "monoboot/lcm.hpp"
#include "monoboot/model.hpp"
#include "monoboot/rng.hpp"

namespace monoboot {

struct Kernel {
  std::string name;
  std::function<double(double)> density;  // K, symmetric
  std::function<double(double)> deriv1;   // K'
  std::function<double(double)> deriv2;   // K''
  double eta;    // exponent with finite exp(eta|z|)-weighted moments
  double z_max;  // truncation with tail mass below 1e-12
  std::function<double(RngStream &)> sampler;
};

inline Kernel gaussian_kernel() {
  Kernel k;
  k.name = "gaussian";
  k.density = normal_pdf;
  k.deriv1 = [](double z) { return -z * normal_pdf(z); };
  k.deriv2 = [](double z) { return (z * z - 1.0) * normal_pdf(z); };
  k.eta = 1.0;
  k.z_max = 8.0;
  k.sampler = [](RngStream &rng) { return rng.normal(); };
  return k;
}

namespace detail {

// 12-point Gauss-Legendre nodes/weights on [-1,1].
inline constexpr double kGLNode[12] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
inline constexpr double kGLWeight[12] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

struct SmoothedIntegrals {
  double i0, i1, i2;
};

// One pass over the z-axis computing all three weighted integrals of
// B(x e^{-hz}). breaks must be sorted and interior to [-z_max, z_max].
template <typename BaseEval>
SmoothedIntegrals integrate(const Kernel &kernel, double h, double x,
                            BaseEval &&base, const std::vector<double> &breaks,
                            double max_panel = 0.5) {
  SmoothedIntegrals acc{0.0, 0.0, 0.0};
  std::vector<double> edges;
  edges.push_back(-kernel.z_max);
  for (double b : breaks)
    if (b > -kernel.z_max && b < kernel.z_max) edges.push_back(b);
  edges.push_back(kernel.z_max);
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    const int panels = std::max(1, int(std::ceil((b - a) / max_panel)));
    const double step = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * step;
      for (int g = 0; g < 12; ++g) {
        const double z = lo + 0.5 * step * (1.0 + kGLNode[g]);
        const double w = 0.5 * step * kGLWeight[g];
        const double bz = base(x * std::exp(-h * z));
        acc.i0 += w * kernel.density(z) * bz;
        acc.i1 += w * kernel.deriv1(z) * bz;
        acc.i2 += w * kernel.deriv2(z) * bz;
      }
    }
  }
  acc.i1 /= h;
  acc.i2 /= h * h;
  return acc;
}

}  // namespace detail

struct KernelCheck {
  double max_asymmetry;  // sup over grid of |K(z) - K(-z)|
  double mass;           // quadrature of K over [-z_max, z_max]
  double exp_moment;     // quadrature of (K + |K'| + |K''|) e^{eta|z|}
};

inline KernelCheck check_kernel(const Kernel &k, int grid = 2001) {
  KernelCheck c{0.0, 0.0, 0.0};
  const double step = 2.0 * k.z_max / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    const double z = -k.z_max + i * step;
    c.max_asymmetry =
        std::max(c.max_asymmetry, std::abs(k.density(z) - k.density(-z)));
    // trapezoid weights
    const double w = (i == 0 || i == grid - 1) ? 0.5 * step : step;
    c.mass += w * k.density(z);
    c.exp_moment += w *
                    (k.density(z) + std::abs(k.deriv1(z)) +
                     std::abs(k.deriv2(z))) *
                    std::exp(k.eta * std::abs(z));
  }
  return c;
}

struct BandwidthRule {
  double constant;
  double exponent;

  BandwidthRule(double c, double e) : constant(c), exponent(e) {
    // h_n = c n^{-e} must satisfy h_n^2 sqrt(n / loglog n) -> infinity,
    // which forces e < 1/4.
    if (!(c > 0.0)) throw std::invalid_argument("bandwidth constant <= 0");
    if (!(e > 0.0 && e < 0.25))
      throw std::invalid_argument(
          "bandwidth exponent must lie in (0, 1/4) for the consistency rate");
  }

  double bandwidth(std::size_t n) const {
    if (n < 2) throw std::domain_error("bandwidth: need n >= 2");
    return constant * std::pow(double(n), -exponent);
  }
};

inline BandwidthRule default_bandwidth_rule() {
  return BandwidthRule(0.5, 1.0 / 6.0);
}

// Kernel-smoothed version of a piecewise-linear concave CDF, smoothed on the
// log scale so the smoothed density stays nonincreasing on (0, inf).
struct SmoothedCDF {
  PiecewiseLinearCDF base;
  Kernel kernel;
  double h;

  // z-values at which the integrand loses smoothness.
  std::vector<double> kink_breaks(double x) const {
    std::vector<double> breaks;
    for (double u : base.hull.x)
      if (u > 0.0) breaks.push_back(std::log(x / u) / h);
    std::sort(breaks.begin(), breaks.end());
    return breaks;
  }

  detail::SmoothedIntegrals integrals(double x) const {
    if (!(x > 0.0)) throw std::domain_error("smoothed eval: x must be > 0");
    return detail::integrate(
        kernel, h, x, [this](double u) { return base.eval(u); },
        kink_breaks(x));
  }

  double cdf(double x) const { return integrals(x).i0; }
  double pdf(double x) const { return integrals(x).i1 / x; }
  double pdf_deriv(double x) const {
    const auto v = integrals(x);
    return (v.i2 - v.i1) / (x * x);
  }

  // Draw from F-check exactly: X-tilde from the base CDF, Z from the kernel.
  double draw(RngStream &rng) const {
    return base.invert(rng.uniform_pos()) * std::exp(h * kernel.sampler(rng));
  }
};

inline SmoothedCDF smoothed_cdf(PiecewiseLinearCDF base, Kernel kernel,
                                double h) {
  if (!(h > 0.0)) throw std::invalid_argument("smoothed_cdf: h must be > 0");
  return SmoothedCDF{std::move(base), std::move(kernel), h};
}

// Population smoother F-bar_h and its first two derivatives, same scheme
// with the analytic F in place of the base hull.
struct PopulationSmoother {
  TrueModel model;
  Kernel kernel;
  double h;

  detail::SmoothedIntegrals integrals(double x) const {
    if (!(x > 0.0)) throw std::domain_error("population smoother: x > 0");
    return detail::integrate(
        kernel, h, x, [this](double u) { return model.cdf(u); }, {}, 0.25);
  }

  double cdf(double x) const { return integrals(x).i0; }
  double pdf(double x) const { return integrals(x).i1 / x; }
  double pdf_deriv(double x) const {
    const auto v = integrals(x);
    return (v.i2 - v.i1) / (x * x);
  }
};

inline PopulationSmoother population_smoother(TrueModel model, Kernel kernel,
                                              double h) {
  if (!(h > 0.0))
    throw std::invalid_argument("population_smoother: h must be > 0");
  return PopulationSmoother{std::move(model), std::move(kernel), h};
}

}  // namespace monoboot
