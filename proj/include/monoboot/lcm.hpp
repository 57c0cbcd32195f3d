#pragma once

// Least concave majorant of a finite point set (upper concave hull) and the
// Grenander estimator as its left-hand derivative.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "monoboot/empirical.hpp"

namespace monoboot {

// Relative tolerance for merging collinear chords; bootstrap ties produce
// exactly-collinear slopes, so the comparison must not keep zero-length kinks.
inline constexpr double kCollinearTol = 1e-12;

// Piecewise-linear concave function given by its hull vertices.
// Chord slopes are strictly decreasing after collinear merging.
struct ConcaveHull {
  std::vector<double> x;  // strictly increasing
  std::vector<double> y;

  double x_min() const { return x.front(); }
  double x_max() const { return x.back(); }

  // Linear interpolant; defined on [x_min, x_max].
  double eval(double t) const {
    if (t < x.front() || t > x.back())
      throw std::domain_error("hull eval: point outside x-range");
    auto it = std::lower_bound(x.begin(), x.end(), t);
    const std::size_t i = std::size_t(it - x.begin());
    if (x[i] == t) return y[i];
    const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + w * (y[i] - y[i - 1]);
  }

  // Slope of the segment whose half-open interval (x[i-1], x[i]] contains t
  // (left-derivative convention at knots).
  double left_slope_at(double t) const {
    if (t <= x.front() || t > x.back())
      throw std::domain_error("left_slope_at: need x_min < t <= x_max");
    auto it = std::lower_bound(x.begin(), x.end(), t);
    std::size_t i = std::size_t(it - x.begin());
    if (i == 0) i = 1;
    return (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
  }
};

// Upper concave hull by a single monotone-chain pass. Input x must be
// strictly increasing. Hull vertices are a subset of the input points.
inline ConcaveHull lcm_of_points(const std::vector<double> &xs,
                                 const std::vector<double> &ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("lcm_of_points: size mismatch");
  if (xs.size() < 2)
    throw std::domain_error("lcm_of_points: need at least 2 points");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw std::domain_error("lcm_of_points: x not strictly increasing");

  ConcaveHull hull;
  hull.x.reserve(xs.size());
  hull.y.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Pop while the last vertex lies on or below the chord from the
    // second-to-last vertex to the new point.
    while (hull.x.size() >= 2) {
      const std::size_t k = hull.x.size();
      const double ax = hull.x[k - 2], ay = hull.y[k - 2];
      const double bx = hull.x[k - 1], by = hull.y[k - 1];
      // cross > 0 means b is strictly above chord a->(xs[i],ys[i]).
      const double cross =
          (by - ay) * (xs[i] - ax) - (ys[i] - ay) * (bx - ax);
      const double scale = std::abs(by - ay) * std::abs(xs[i] - ax) +
                           std::abs(ys[i] - ay) * std::abs(bx - ax);
      if (cross > kCollinearTol * std::max(1.0, scale)) break;
      hull.x.pop_back();
      hull.y.pop_back();
    }
    hull.x.push_back(xs[i]);
    hull.y.push_back(ys[i]);
  }
  return hull;
}

inline ConcaveHull lcm_of_points(
    const std::vector<std::pair<double, double>> &points) {
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto &[px, py] : points) {
    xs.push_back(px);
    ys.push_back(py);
  }
  return lcm_of_points(xs, ys);
}

// Hull of the restriction to x in [a, b].
inline ConcaveHull restricted_lcm(const std::vector<double> &xs,
                                  const std::vector<double> &ys, double a,
                                  double b) {
  std::vector<double> rx, ry;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] >= a && xs[i] <= b) {
      rx.push_back(xs[i]);
      ry.push_back(ys[i]);
    }
  if (rx.size() < 2)
    throw std::domain_error("restricted_lcm: window holds fewer than 2 points");
  return lcm_of_points(rx, ry);
}

// Concave piecewise-linear CDF (the LCM of an EDF): knots start at (0,0)
// and end at (x_max, 1).
struct PiecewiseLinearCDF {
  ConcaveHull hull;

  double eval(double x) const {
    if (x <= hull.x_min()) return 0.0;
    if (x >= hull.x_max()) return 1.0;
    return hull.eval(x);
  }

  // Generalized inverse on (0,1]; the CDF is continuous and strictly
  // increasing on its support, so this is plain inversion of a segment.
  double invert(double u) const {
    if (!(u > 0.0 && u <= 1.0))
      throw std::domain_error("invert: u must be in (0,1]");
    const auto &y = hull.y;
    auto it = std::lower_bound(y.begin(), y.end(), u);
    std::size_t i = std::size_t(it - y.begin());
    if (i == 0) return hull.x.front();
    const double slope =
        (y[i] - y[i - 1]) / (hull.x[i] - hull.x[i - 1]);
    return hull.x[i - 1] + (u - y[i - 1]) / slope;
  }
};

// Nonincreasing step density: height[i] on the piece (edges[i], edges[i+1]].
struct StepDensity {
  std::vector<double> edges;    // edges.front() == 0
  std::vector<double> heights;  // strictly decreasing, positive

  double eval(double t) const {
    if (t <= 0.0) throw std::domain_error("StepDensity: t must be > 0");
    if (t > edges.back()) return 0.0;
    auto it = std::lower_bound(edges.begin(), edges.end(), t);
    const std::size_t i = std::size_t(it - edges.begin());
    return heights[i - 1];
  }

  double integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i < heights.size(); ++i)
      s += heights[i] * (edges[i + 1] - edges[i]);
    return s;
  }
};

struct GrenanderFit {
  PiecewiseLinearCDF cdf;    // F-tilde
  StepDensity density;       // f-tilde, its left-hand derivative

  double density_at(double t) const { return density.eval(t); }
};

inline GrenanderFit grenander(const Sample &sample) {
  const StepCDF fn = edf(sample);
  std::vector<double> xs, ys;
  xs.reserve(fn.jump_points.size() + 1);
  ys.reserve(fn.jump_points.size() + 1);
  if (fn.jump_points.front() <= 0.0)
    throw std::domain_error("grenander: observation at 0 is degenerate");
  xs.push_back(0.0);
  ys.push_back(0.0);
  for (std::size_t i = 0; i < fn.jump_points.size(); ++i) {
    xs.push_back(fn.jump_points[i]);
    ys.push_back(fn.cum_probs[i]);
  }
  if (xs.size() < 2)
    throw std::domain_error("grenander: degenerate sample at 0");

  GrenanderFit fit;
  fit.cdf.hull = lcm_of_points(xs, ys);
  const auto &hx = fit.cdf.hull.x;
  const auto &hy = fit.cdf.hull.y;
  fit.density.edges = hx;
  fit.density.heights.resize(hx.size() - 1);
  for (std::size_t i = 0; i + 1 < hx.size(); ++i)
    fit.density.heights[i] = (hy[i + 1] - hy[i]) / (hx[i + 1] - hx[i]);
  return fit;
}

}  // namespace monoboot
