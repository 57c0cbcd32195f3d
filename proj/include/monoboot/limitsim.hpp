#pragma once

// Discretized two-sided Brownian machinery: Chernoff-distribution draws,
// the drifted limit processes behind the bootstrap roots, slope-at-zero
// functionals of their least concave majorants, and the finite-n localized
// process Z_n.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "monoboot/empirical.hpp"
#include "monoboot/lcm.hpp"
#include "monoboot/rng.hpp"

namespace monoboot {

struct ProcessPath {
  std::vector<double> grid;    // symmetric arithmetic grid on [-c, c]
  std::vector<double> values;  // value at grid 0 fixed to 0 for noise paths

  std::size_t zero_index() const { return grid.size() / 2; }
};

// Two-sided Brownian motion h -> W[f_t0 * h] on a symmetric grid: two
// independent half-paths of Gaussian increments with variance f_t0 * delta.
inline ProcessPath brownian_path(double f_t0, double c, double delta,
                                 RngStream &rng) {
  if (!(f_t0 > 0.0)) throw std::domain_error("brownian_path: f(t0) must be > 0");
  if (!(c > 0.0 && delta > 0.0 && delta < c))
    throw std::domain_error("brownian_path: need 0 < delta < c");
  const auto k = std::size_t(std::llround(c / delta));
  ProcessPath path;
  path.grid.resize(2 * k + 1);
  path.values.resize(2 * k + 1);
  const double sd = std::sqrt(f_t0 * delta);
  for (std::size_t i = 0; i <= 2 * k; ++i)
    path.grid[i] = (double(i) - double(k)) * delta;
  path.values[k] = 0.0;
  for (std::size_t i = k + 1; i <= 2 * k; ++i)
    path.values[i] = path.values[i - 1] + sd * rng.normal();
  for (std::size_t i = k; i-- > 0;)
    path.values[i] = path.values[i + 1] + sd * rng.normal();
  return path;
}

// Grid argmax of W(s) - s^2; ties broken toward the smallest |s|.
inline double chernoff_draw(double c, double delta, RngStream &rng) {
  if (!(c >= 2.5))
    throw std::domain_error(
        "chernoff_draw: truncation c must be >= 2.5 for negligible tail mass");
  const ProcessPath w = brownian_path(1.0, c, delta, rng);
  double best = w.grid.front();
  double best_val = w.values.front() - w.grid.front() * w.grid.front();
  for (std::size_t i = 1; i < w.grid.size(); ++i) {
    const double v = w.values[i] - w.grid[i] * w.grid[i];
    if (v > best_val ||
        (v == best_val && std::abs(w.grid[i]) < std::abs(best))) {
      best_val = v;
      best = w.grid[i];
    }
  }
  return best;
}

struct LimitDraw {
  double slope_Z;    // (L_R Z)'(0)
  double slope_Z20;  // (L_R Z20)'(0)
};

// Draws the pair of LCM slopes at zero for
//   Z20(h) = W2[f(t0) h] + f'(t0) h^2 / 2,
//   Z2(h)  = L Z20(h) - L Z20(0) - (L Z20)'(0) h,
//   Z      = W1[f(t0) h] + Z2(h).
inline LimitDraw limit_pair_draw(double f_t0, double fprime_t0, double c,
                                 double delta, RngStream &rng) {
  if (!(fprime_t0 < 0.0))
    throw std::domain_error("limit_pair_draw: f'(t0) must be < 0");
  const ProcessPath w1 = brownian_path(f_t0, c, delta, rng);
  const ProcessPath w2 = brownian_path(f_t0, c, delta, rng);
  const std::size_t npts = w1.grid.size();

  std::vector<double> z20(npts);
  for (std::size_t i = 0; i < npts; ++i)
    z20[i] = w2.values[i] + 0.5 * fprime_t0 * w2.grid[i] * w2.grid[i];
  double lo = z20[0], hi = z20[0];
  for (double v : z20) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo)
    throw std::runtime_error("limit_pair_draw: degenerate path (grid misuse)");

  const ConcaveHull hull20 = lcm_of_points(w2.grid, z20);
  const double slope20 = hull20.left_slope_at(0.0);
  const double at0 = hull20.eval(0.0);

  std::vector<double> z(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    const double z2 = hull20.eval(w1.grid[i]) - at0 - slope20 * w1.grid[i];
    z[i] = w1.values[i] + z2;
  }
  const ConcaveHull hull = lcm_of_points(w1.grid, z);
  return LimitDraw{hull.left_slope_at(0.0), slope20};
}

// The localized, rescaled process
//   Z_n(h) = m^{2/3} { G(t0 + m^{-1/3} h) - G(t0) - f_n_t0 m^{-1/3} h }
// on a symmetric grid over [-a, a], for any CDF evaluator G (the resample
// EDF for Z_n itself, a fitted or analytic CDF for the companion Z_{n,2}).
inline ProcessPath finite_n_Z_process(
    const std::function<double(double)> &cdf_eval, double t0, double f_n_t0,
    std::size_t m, double a, double delta) {
  if (!(a > 0.0 && delta > 0.0 && delta < a))
    throw std::domain_error("finite_n_Z_process: need 0 < delta < a");
  const double rate = std::cbrt(double(m));
  if (t0 - a / rate < 0.0)
    throw std::domain_error("finite_n_Z_process: window leaves [0, inf)");
  const auto k = std::size_t(std::llround(a / delta));
  ProcessPath path;
  path.grid.resize(2 * k + 1);
  path.values.resize(2 * k + 1);
  const double g_t0 = cdf_eval(t0);
  for (std::size_t i = 0; i <= 2 * k; ++i) {
    const double h = (double(i) - double(k)) * delta;
    path.grid[i] = h;
    path.values[i] =
        rate * rate * (cdf_eval(t0 + h / rate) - g_t0 - f_n_t0 * h / rate);
  }
  path.values[k] = 0.0;  // exact by definition
  return path;
}

// Left slope at 0 of the LCM of Z_n built from a step CDF, using the exact
// corner points of the step function (so the hull is the affine image of
// the LCM of the EDF itself).
inline double delta_from_z_process(const StepCDF &fn, double t0,
                                   double f_n_t0, std::size_t m) {
  if (!(t0 > 0.0 && t0 < fn.jump_points.back()))
    throw std::domain_error("delta_from_z_process: t0 outside (0, max)");
  const double rate = std::cbrt(double(m));
  const double g_t0 = fn.eval(t0);
  std::vector<double> hs, zs;
  hs.reserve(fn.jump_points.size() + 1);
  zs.reserve(fn.jump_points.size() + 1);
  hs.push_back(-t0 * rate);
  zs.push_back(rate * rate * (0.0 - g_t0 + f_n_t0 * t0));
  for (std::size_t i = 0; i < fn.jump_points.size(); ++i) {
    const double x = fn.jump_points[i];
    hs.push_back((x - t0) * rate);
    zs.push_back(rate * rate *
                 (fn.cum_probs[i] - g_t0 - f_n_t0 * (x - t0)));
  }
  return lcm_of_points(hs, zs).left_slope_at(0.0);
}

}  // namespace monoboot
