#pragma once

// Analytic decreasing-density models: (F, f, f') triples, the cube-root
// limit scale constant, and the regularity report used by the m-of-n
// NPMLE consistency conditions.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "monoboot/rng.hpp"

namespace monoboot {

struct TrueModel {
  std::string name;
  std::function<double(double)> cdf;        // F on [0,inf), F(0)=0
  std::function<double(double)> pdf;        // f, nonincreasing
  std::function<double(double)> pdf_deriv;  // f'
  double support_end;                       // alpha1(F), may be +inf
  std::function<double(RngStream &)> sampler;
};

struct ModelConditionsReport {
  bool alpha1_finite;
  double gamma_F;  // sup |f'| / inf f^2, may be +inf
  double beta_F;   // inf |-f'/f^2|
  bool satisfied;
};

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline TrueModel builtin_model(const std::string &name) {
  const double inf = std::numeric_limits<double>::infinity();
  if (name == "exp1") {
    TrueModel m;
    m.name = "exp1";
    m.cdf = [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); };
    m.pdf = [](double x) { return x < 0.0 ? 0.0 : std::exp(-x); };
    m.pdf_deriv = [](double x) { return x < 0.0 ? 0.0 : -std::exp(-x); };
    m.support_end = inf;
    m.sampler = [](RngStream &rng) { return rng.exponential(); };
    return m;
  }
  if (name == "half_normal") {
    TrueModel m;
    m.name = "half_normal";
    m.cdf = [](double x) {
      return x <= 0.0 ? 0.0 : 2.0 * normal_cdf(x) - 1.0;
    };
    m.pdf = [](double x) { return x < 0.0 ? 0.0 : 2.0 * normal_pdf(x); };
    m.pdf_deriv = [](double x) {
      return x < 0.0 ? 0.0 : -2.0 * x * normal_pdf(x);
    };
    m.support_end = inf;
    m.sampler = [](RngStream &rng) { return rng.half_normal(); };
    return m;
  }
  throw std::invalid_argument("unknown model: " + name);
}

// The constant 2 |f(t0) f'(t0)/2|^{1/3} scaling Chernoff's distribution in
// the limit law for the Grenander estimator at t0.
inline double limit_scale(const TrueModel &model, double t0) {
  const double f = model.pdf(t0);
  const double fp = model.pdf_deriv(t0);
  if (f <= 0.0 || fp >= 0.0)
    throw std::domain_error(
        "limit_scale: need f(t0) > 0 and f'(t0) < 0 for a nondegenerate "
        "limit law");
  return 2.0 * std::cbrt(0.5 * f * std::abs(fp));
}

// Upper quantile of F by bisection; used to truncate grids on infinite
// supports.
inline double model_quantile(const TrueModel &model, double p) {
  double hi = 1.0;
  while (model.cdf(hi) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (model.cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Grid evaluation of gamma(F) = sup|f'| / inf f^2 and
// beta(F) = inf |-f'/f^2| over (0, alpha1), truncated at the 1 - 1e-6
// quantile when the support is unbounded.
inline ModelConditionsReport check_conditions(const TrueModel &model,
                                              int grid_size = 10000) {
  ModelConditionsReport rep;
  rep.alpha1_finite = std::isfinite(model.support_end);
  const double upper = rep.alpha1_finite
                           ? model.support_end
                           : model_quantile(model, 1.0 - 1e-6);
  double sup_abs_fp = 0.0;
  double inf_f = std::numeric_limits<double>::infinity();
  double inf_ratio = std::numeric_limits<double>::infinity();
  for (int i = 1; i < grid_size; ++i) {
    const double x = upper * double(i) / double(grid_size);
    const double f = model.pdf(x);
    const double fp = model.pdf_deriv(x);
    sup_abs_fp = std::max(sup_abs_fp, std::abs(fp));
    inf_f = std::min(inf_f, f);
    if (f > 0.0)
      inf_ratio = std::min(inf_ratio, std::abs(-fp) / (f * f));
    else
      inf_ratio = 0.0;
  }
  rep.gamma_F = inf_f > 0.0 ? sup_abs_fp / (inf_f * inf_f)
                            : std::numeric_limits<double>::infinity();
  rep.beta_F = inf_ratio;
  rep.satisfied =
      rep.alpha1_finite && std::isfinite(rep.gamma_F) && rep.beta_F > 0.0;
  return rep;
}

}  // namespace monoboot
