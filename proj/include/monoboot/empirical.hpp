#pragma once

// Samples on [0,inf) and the empirical distribution function, with
// right-continuous evaluation and the generalized inverse.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace monoboot {

struct Sample {
  std::vector<double> values;  // sorted, nondecreasing, all >= 0

  std::size_t n() const { return values.size(); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

inline Sample make_sample(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sample must be nonempty");
  std::sort(values.begin(), values.end());
  if (values.front() < 0.0)
    throw std::invalid_argument("sample values must be >= 0");
  return Sample{std::move(values)};
}

inline Sample load_sample(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double v;
    if (!(ls >> v))
      throw std::runtime_error("bad value in data file: " + line);
    values.push_back(v);
  }
  return make_sample(std::move(values));
}

// Right-continuous step CDF: jumps at distinct points, ties merged.
struct StepCDF {
  std::vector<double> jump_points;  // sorted, distinct
  std::vector<double> cum_probs;    // strictly increasing, last = 1

  double eval(double x) const {
    auto it = std::upper_bound(jump_points.begin(), jump_points.end(), x);
    if (it == jump_points.begin()) return 0.0;
    return cum_probs[std::size_t(it - jump_points.begin()) - 1];
  }

  // Generalized inverse F#(u) = inf{x : F(x) >= u}, u in (0,1].
  double invert(double u) const {
    if (!(u > 0.0 && u <= 1.0))
      throw std::domain_error("invert_cdf: u must be in (0,1]");
    auto it = std::lower_bound(cum_probs.begin(), cum_probs.end(), u);
    return jump_points[std::size_t(it - cum_probs.begin())];
  }
};

inline StepCDF edf(const Sample &sample) {
  if (sample.values.empty()) throw std::domain_error("edf: empty sample");
  const double n = double(sample.n());
  StepCDF cdf;
  std::size_t i = 0;
  while (i < sample.n()) {
    std::size_t j = i;
    while (j < sample.n() && sample.values[j] == sample.values[i]) ++j;
    cdf.jump_points.push_back(sample.values[i]);
    cdf.cum_probs.push_back(double(j) / n);
    i = j;
  }
  cdf.cum_probs.back() = 1.0;  // guard against rounding in j/n
  return cdf;
}

// sup_x |Fn(x) - F(x)| for a continuous F; attained at jump points or
// their left limits.
template <typename Cdf>
double ks_distance(const StepCDF &fn, Cdf &&F) {
  double d = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < fn.jump_points.size(); ++i) {
    const double Fx = F(fn.jump_points[i]);
    d = std::max(d, std::abs(fn.cum_probs[i] - Fx));
    d = std::max(d, std::abs(prev - Fx));
    prev = fn.cum_probs[i];
  }
  return d;
}

}  // namespace monoboot
