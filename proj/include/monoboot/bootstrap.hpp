#pragma once

// Resampling engines for the four bootstrap schemes (naive EDF, naive NPMLE,
// log-kernel smoothed, m-of-n from either base), the root
// Delta* = m^{1/3} (f-tilde*(t0) - f-hat(t0)), and root-based confidence
// intervals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monoboot/empirical.hpp"
#include "monoboot/lcm.hpp"
#include "monoboot/parallel.hpp"
#include "monoboot/rng.hpp"
#include "monoboot/smoothing.hpp"

namespace monoboot {

enum class ResampleSource { Edf, Npmle, Smoothed };

struct MRule {
  enum class Kind { Full, Power, Custom };
  Kind kind = Kind::Full;
  double beta = 2.0 / 3.0;   // m = ceil(n^beta) for Power
  std::size_t custom_m = 0;  // for Custom

  std::size_t m_for(std::size_t n) const {
    switch (kind) {
      case Kind::Full:
        return n;
      case Kind::Power: {
        auto m = std::size_t(std::ceil(std::pow(double(n), beta)));
        return std::min(m, n);
      }
      case Kind::Custom:
        if (custom_m == 0 || custom_m > n)
          throw std::invalid_argument("MRule: custom m must be in [1, n]");
        return custom_m;
    }
    return n;
  }
};

struct BootstrapScheme {
  std::string name;
  ResampleSource source = ResampleSource::Edf;
  MRule m_rule;
  // Smoothed source only; m_rule must be Full there.
  Kernel kernel;
  std::optional<BandwidthRule> bandwidth_rule;
};

inline BootstrapScheme edf_scheme() {
  return BootstrapScheme{"edf", ResampleSource::Edf, {}, {}, std::nullopt};
}

inline BootstrapScheme npmle_scheme() {
  return BootstrapScheme{"npmle", ResampleSource::Npmle, {}, {}, std::nullopt};
}

inline BootstrapScheme smoothed_scheme(Kernel kernel,
                                       BandwidthRule rule) {
  BootstrapScheme s;
  s.name = "smoothed";
  s.source = ResampleSource::Smoothed;
  s.kernel = std::move(kernel);
  s.bandwidth_rule = rule;
  return s;
}

inline BootstrapScheme m_of_n_scheme(ResampleSource source,
                                     double beta = 2.0 / 3.0) {
  if (source == ResampleSource::Smoothed)
    throw std::invalid_argument("m-of-n is defined for EDF/NPMLE sources");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("m-of-n: beta must be in (0,1)");
  BootstrapScheme s;
  s.name = source == ResampleSource::Edf ? "m-of-n-edf" : "m-of-n-npmle";
  s.source = source;
  s.m_rule = MRule{MRule::Kind::Power, beta, 0};
  return s;
}

// Everything resampling needs, computed once per original sample.
struct FittedScheme {
  Sample sample;
  GrenanderFit grenander_fit;
  std::optional<SmoothedCDF> smoothed;
};

inline FittedScheme fit_scheme(const BootstrapScheme &scheme,
                               const Sample &sample) {
  FittedScheme f;
  f.sample = sample;
  f.grenander_fit = grenander(sample);
  if (scheme.source == ResampleSource::Smoothed) {
    if (scheme.m_rule.kind != MRule::Kind::Full)
      throw std::invalid_argument("smoothed scheme requires m = n");
    if (!scheme.bandwidth_rule)
      throw std::invalid_argument("smoothed scheme requires a bandwidth rule");
    const double h = scheme.bandwidth_rule->bandwidth(sample.n());
    f.smoothed = smoothed_cdf(f.grenander_fit.cdf, scheme.kernel, h);
  }
  return f;
}

inline Sample resample(const BootstrapScheme &scheme, const FittedScheme &fit,
                       std::size_t m, RngStream &rng) {
  if (m == 0) throw std::domain_error("resample: m must be >= 1");
  std::vector<double> values(m);
  switch (scheme.source) {
    case ResampleSource::Edf: {
      const auto &orig = fit.sample.values;
      for (std::size_t i = 0; i < m; ++i) {
        auto k = std::size_t(rng.uniform() * double(orig.size()));
        if (k >= orig.size()) k = orig.size() - 1;
        values[i] = orig[k];
      }
      break;
    }
    case ResampleSource::Npmle:
      for (std::size_t i = 0; i < m; ++i)
        values[i] = fit.grenander_fit.cdf.invert(rng.uniform_pos());
      break;
    case ResampleSource::Smoothed:
      for (std::size_t i = 0; i < m; ++i) values[i] = fit.smoothed->draw(rng);
      break;
  }
  return make_sample(std::move(values));
}

struct BootstrapDistribution {
  std::vector<double> roots;  // in replicate order (deterministic)
  std::size_t m = 0;
  std::size_t n = 0;
};

// Type-7 empirical quantile of a sorted vector.
inline double empirical_quantile(const std::vector<double> &sorted, double p) {
  if (sorted.empty()) throw std::domain_error("quantile of empty set");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double idx = p * double(sorted.size() - 1);
  const auto lo = std::size_t(idx);
  const double w = idx - double(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return (1.0 - w) * sorted[lo] + w * sorted[lo + 1];
}

inline double quantile(const BootstrapDistribution &dist, double p) {
  std::vector<double> sorted(dist.roots);
  std::sort(sorted.begin(), sorted.end());
  return empirical_quantile(sorted, p);
}

// One bootstrap root: m^{1/3} (f-tilde*(t0) - center). If t0 falls beyond
// the resample maximum, the left derivative of the flat hull tail is 0.
inline double bootstrap_root(const BootstrapScheme &scheme,
                             const FittedScheme &fit, double t0,
                             std::size_t m, double center, RngStream &rng) {
  const Sample star = resample(scheme, fit, m, rng);
  const GrenanderFit gstar = grenander(star);
  const double fstar = t0 > star.max() ? 0.0 : gstar.density_at(t0);
  return std::cbrt(double(m)) * (fstar - center);
}

inline BootstrapDistribution bootstrap_distribution(
    const Sample &sample, const BootstrapScheme &scheme, double t0,
    std::size_t B, std::uint64_t seed, int threads = 1,
    std::optional<double> center_override = std::nullopt) {
  if (B < 1) throw std::invalid_argument("bootstrap_distribution: B >= 1");
  if (!(t0 > 0.0 && t0 < sample.max()))
    throw std::domain_error("bootstrap_distribution: t0 outside (0, max)");
  const FittedScheme fit = fit_scheme(scheme, sample);
  // center the root at the density of the resampled population: the
  // smoothed density for the smoothed scheme, the Grenander estimate
  // otherwise (the EDF has no density; its natural center is the same)
  const double center = center_override ? *center_override
                        : fit.smoothed  ? fit.smoothed->pdf(t0)
                                        : fit.grenander_fit.density_at(t0);
  const std::size_t m = scheme.m_rule.m_for(sample.n());

  BootstrapDistribution dist;
  dist.roots.resize(B);
  dist.m = m;
  dist.n = sample.n();
  parallel_for(B, threads, [&](std::size_t b) {
    RngStream rng(seed, b);
    dist.roots[b] = bootstrap_root(scheme, fit, t0, m, center, rng);
  });
  return dist;
}

struct ConfidenceInterval {
  double lo;
  double hi;
};

// Root-based (basic) interval on the n^{-1/3} scale; the percentile variant
// is available behind a flag.
inline ConfidenceInterval confidence_interval(const BootstrapDistribution &dist,
                                              double estimate, std::size_t n,
                                              double level,
                                              bool percentile = false) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence_interval: level in (0,1)");
  if (dist.roots.size() < 100)
    throw std::invalid_argument(
        "confidence_interval: need B >= 100 bootstrap replicates");
  std::vector<double> sorted(dist.roots);
  std::sort(sorted.begin(), sorted.end());
  const double alpha = 1.0 - level;
  const double q_lo = empirical_quantile(sorted, alpha / 2.0);
  const double q_hi = empirical_quantile(sorted, 1.0 - alpha / 2.0);
  const double scale = 1.0 / std::cbrt(double(n));
  ConfidenceInterval ci;
  if (percentile) {
    ci.lo = estimate + scale * q_lo;
    ci.hi = estimate + scale * q_hi;
  } else {
    ci.lo = estimate - scale * q_hi;
    ci.hi = estimate - scale * q_lo;
  }
  ci.lo = std::max(0.0, ci.lo);
  return ci;
}

}  // namespace monoboot
