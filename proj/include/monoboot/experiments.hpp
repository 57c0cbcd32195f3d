#pragma once

// Batch studies: coverage of bootstrap confidence intervals across sample
// sizes, 0.95-quantile tracking along nested samples, histogram export, and
// the Delta_n simulator. Everything is a pure function of its config and
// master seed; replicate streams are derived by (role, index, n) so results
// do not depend on thread count or on which sample sizes run together.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "monoboot/bootstrap.hpp"
#include "monoboot/limitsim.hpp"
#include "monoboot/model.hpp"
#include "monoboot/parallel.hpp"

namespace monoboot {

namespace seed_role {
inline constexpr std::uint64_t kSample = 1;
inline constexpr std::uint64_t kBoot = 2;
inline constexpr std::uint64_t kTrack = 3;
inline constexpr std::uint64_t kDelta = 4;
inline constexpr std::uint64_t kLimit = 5;
}  // namespace seed_role

inline Sample sample_from_model(const TrueModel &model, std::size_t n,
                                RngStream &rng) {
  std::vector<double> values(n);
  for (auto &v : values) v = model.sampler(rng);
  return make_sample(std::move(values));
}

struct ExperimentConfig {
  std::string model = "exp1";
  double t0 = 1.0;
  std::string scheme = "edf";
  double m_beta = 2.0 / 3.0;       // m-of-n schemes
  double bandwidth_c = 0.5;        // smoothed scheme
  double bandwidth_exp = 1.0 / 6.0;
  std::vector<std::size_t> sample_sizes;
  std::size_t n_intervals = 1000;  // R
  std::size_t n_boot = 1000;       // B
  double level = 0.95;
  std::uint64_t master_seed = 1;
  int threads = 1;
  bool percentile = false;
};

inline BootstrapScheme scheme_by_name(const ExperimentConfig &cfg) {
  if (cfg.scheme == "edf") return edf_scheme();
  if (cfg.scheme == "npmle") return npmle_scheme();
  if (cfg.scheme == "smoothed")
    return smoothed_scheme(gaussian_kernel(),
                           BandwidthRule(cfg.bandwidth_c, cfg.bandwidth_exp));
  if (cfg.scheme == "m-of-n-edf")
    return m_of_n_scheme(ResampleSource::Edf, cfg.m_beta);
  if (cfg.scheme == "m-of-n-npmle")
    return m_of_n_scheme(ResampleSource::Npmle, cfg.m_beta);
  throw std::invalid_argument("unknown scheme: " + cfg.scheme);
}

struct CoveragePoint {
  std::size_t n;
  double coverage;
  double mc_stderr;
  double runtime_seconds;
};

using CoverageResult = std::vector<CoveragePoint>;

inline CoverageResult coverage_study(const ExperimentConfig &cfg) {
  if (cfg.sample_sizes.empty())
    throw std::invalid_argument("coverage_study: no sample sizes");
  if (!(cfg.level > 0.0 && cfg.level < 1.0))
    throw std::invalid_argument("coverage_study: level in (0,1)");
  const TrueModel model = builtin_model(cfg.model);
  const BootstrapScheme scheme = scheme_by_name(cfg);
  const double truth = model.pdf(cfg.t0);
  CoverageResult result;
  for (std::size_t n : cfg.sample_sizes) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<int> covered(cfg.n_intervals, 0);
    parallel_for(cfg.n_intervals, cfg.threads, [&](std::size_t r) {
      RngStream srng(derive_seed(cfg.master_seed, seed_role::kSample, r, n));
      const Sample sample = sample_from_model(model, n, srng);
      const double estimate = grenander(sample).density_at(cfg.t0);
      const auto dist = bootstrap_distribution(
          sample, scheme, cfg.t0, cfg.n_boot,
          derive_seed(cfg.master_seed, seed_role::kBoot, r, n), 1);
      const auto ci = confidence_interval(dist, estimate, n, cfg.level,
                                          cfg.percentile);
      covered[r] = (ci.lo <= truth && truth <= ci.hi) ? 1 : 0;
    });
    double hits = 0.0;
    for (int c : covered) hits += c;
    const double p = hits / double(cfg.n_intervals);
    const auto stop = std::chrono::steady_clock::now();
    result.push_back(CoveragePoint{
        n, p, std::sqrt(p * (1.0 - p) / double(cfg.n_intervals)),
        std::chrono::duration<double>(stop - start).count()});
  }
  return result;
}

// Oracle interval from the true limit law: estimate -+ n^{-1/3} * scale *
// Chernoff quantiles. Validates the coverage harness independently of any
// bootstrap code; chernoff_q975 comes from the limit simulator.
inline CoveragePoint oracle_coverage(const TrueModel &model, double t0,
                                     std::size_t n, std::size_t n_intervals,
                                     double chernoff_q975,
                                     std::uint64_t master_seed,
                                     int threads = 1) {
  const double scale = limit_scale(model, t0);
  const double truth = model.pdf(t0);
  const double half = scale * chernoff_q975 / std::cbrt(double(n));
  std::vector<int> covered(n_intervals, 0);
  parallel_for(n_intervals, threads, [&](std::size_t r) {
    RngStream srng(derive_seed(master_seed, seed_role::kSample, r, n));
    const Sample sample = sample_from_model(model, n, srng);
    const double estimate = grenander(sample).density_at(t0);
    covered[r] =
        (estimate - half <= truth && truth <= estimate + half) ? 1 : 0;
  });
  double hits = 0.0;
  for (int c : covered) hits += c;
  const double p = hits / double(n_intervals);
  return CoveragePoint{n, p,
                       std::sqrt(p * (1.0 - p) / double(n_intervals)), 0.0};
}

// Draws of Delta_n = n^{1/3} (f-tilde_n(t0) - f(t0)) for the exact-law
// histogram and the limit-law checks.
inline std::vector<double> simulate_delta_n(const TrueModel &model, double t0,
                                            std::size_t n, std::size_t draws,
                                            std::uint64_t master_seed,
                                            int threads = 1) {
  const double truth = model.pdf(t0);
  std::vector<double> deltas(draws);
  parallel_for(draws, threads, [&](std::size_t r) {
    RngStream rng(derive_seed(master_seed, seed_role::kDelta, r, n));
    const Sample sample = sample_from_model(model, n, rng);
    deltas[r] =
        std::cbrt(double(n)) * (grenander(sample).density_at(t0) - truth);
  });
  return deltas;
}

struct QuantilePoint {
  std::size_t n;
  std::string scheme;
  double q95;
};

// 0.95 bootstrap-root quantile along one nested data sequence: the sample
// at each n is a prefix of the same stream, as in the quantile-tracking
// diagnostic for nonconvergence.
inline std::vector<QuantilePoint> quantile_tracking(
    const ExperimentConfig &cfg, const std::vector<std::string> &schemes) {
  if (cfg.sample_sizes.empty())
    throw std::invalid_argument("quantile_tracking: no sample sizes");
  for (std::size_t i = 1; i < cfg.sample_sizes.size(); ++i)
    if (cfg.sample_sizes[i] <= cfg.sample_sizes[i - 1])
      throw std::invalid_argument(
          "quantile_tracking: sample sizes must be increasing");
  const TrueModel model = builtin_model(cfg.model);
  RngStream stream(derive_seed(cfg.master_seed, seed_role::kTrack, 0, 0));
  std::vector<double> pool(cfg.sample_sizes.back());
  for (auto &v : pool) v = model.sampler(stream);

  std::vector<QuantilePoint> out;
  for (std::size_t n : cfg.sample_sizes) {
    const Sample sample = make_sample(
        std::vector<double>(pool.begin(), pool.begin() + std::ptrdiff_t(n)));
    for (const auto &name : schemes) {
      ExperimentConfig sub = cfg;
      sub.scheme = name;
      const auto dist = bootstrap_distribution(
          sample, scheme_by_name(sub), cfg.t0, cfg.n_boot,
          derive_seed(cfg.master_seed, seed_role::kBoot, 0, n), cfg.threads);
      out.push_back(QuantilePoint{n, name, quantile(dist, 0.95)});
    }
  }
  return out;
}

struct Histogram {
  std::vector<double> bin_left;
  std::vector<double> bin_right;
  std::vector<std::size_t> count;
  std::vector<double> density;
};

inline Histogram histogram_export(const std::vector<double> &values,
                                  std::size_t bins) {
  if (values.size() < 100)
    throw std::invalid_argument("histogram_export: need at least 100 values");
  if (bins == 0) throw std::invalid_argument("histogram_export: bins >= 1");
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Histogram h;
  if (hi == lo) {
    // degenerate range: one unit-width bin around the common value
    const double w = 1.0;
    h.bin_left = {lo - w / 2};
    h.bin_right = {lo + w / 2};
    h.count = {values.size()};
    h.density = {1.0 / w};
    return h;
  }
  const double width = (hi - lo) / double(bins);
  h.bin_left.resize(bins);
  h.bin_right.resize(bins);
  h.count.assign(bins, 0);
  h.density.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.bin_left[b] = lo + double(b) * width;
    h.bin_right[b] = lo + double(b + 1) * width;
  }
  for (double v : values) {
    auto b = std::size_t((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++h.count[b];
  }
  for (std::size_t b = 0; b < bins; ++b)
    h.density[b] = double(h.count[b]) / (double(values.size()) * width);
  return h;
}

inline double sample_skewness(const std::vector<double> &v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= double(v.size());
  m3 /= double(v.size());
  return m3 / std::pow(m2, 1.5);
}

inline double sample_correlation(const std::vector<double> &a,
                                 const std::vector<double> &b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("sample_correlation: size mismatch");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= double(a.size());
  mb /= double(b.size());
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace monoboot
