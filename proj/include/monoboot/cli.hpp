#pragma once

// monoboot command-line front end. Every stochastic subcommand requires an
// explicit --seed and is a pure function of (flags, seed); effective configs
// are echoed to a metadata file next to the output.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monoboot/bootstrap.hpp"
#include "monoboot/experiments.hpp"
#include "monoboot/limitsim.hpp"
#include "monoboot/model.hpp"
#include "monoboot/parallel.hpp"

namespace monoboot::cli {

using nlohmann::json;

inline std::string git_describe() {
#if defined(_WIN32)
  return "unknown";
#else
  FILE *p = ::popen("git describe --always --dirty 2>/dev/null", "r");
  if (!p) return "unknown";
  char buf[128] = {0};
  std::string out;
  while (fgets(buf, sizeof buf, p)) out += buf;
  ::pclose(p);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r'))
    out.pop_back();
  return out.empty() ? "unknown" : out;
#endif
}

inline void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
}

inline void write_meta(const std::string &path, const json &config,
                       double runtime_seconds) {
  json meta;
  meta["config"] = config;
  meta["git"] = git_describe();
  meta["runtime_seconds"] = runtime_seconds;
  write_text(path, meta.dump(2) + "\n");
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline ExperimentConfig config_from_json(const json &j) {
  ExperimentConfig cfg;
  cfg.model = j.value("model", cfg.model);
  cfg.t0 = j.value("t0", cfg.t0);
  cfg.scheme = j.value("scheme", cfg.scheme);
  cfg.m_beta = j.value("m_beta", cfg.m_beta);
  cfg.bandwidth_c = j.value("bandwidth_c", cfg.bandwidth_c);
  cfg.bandwidth_exp = j.value("bandwidth_exp", cfg.bandwidth_exp);
  cfg.sample_sizes = j.value("sample_sizes", cfg.sample_sizes);
  cfg.n_intervals = j.value("n_intervals", cfg.n_intervals);
  cfg.n_boot = j.value("n_boot", cfg.n_boot);
  cfg.level = j.value("level", cfg.level);
  if (!j.contains("master_seed"))
    throw CLI::ValidationError("config", "master_seed is required");
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.threads = j.value("threads", cfg.threads);
  cfg.percentile = j.value("percentile", cfg.percentile);
  return cfg;
}

inline json config_to_json(const ExperimentConfig &cfg) {
  json j;
  j["model"] = cfg.model;
  j["t0"] = cfg.t0;
  j["scheme"] = cfg.scheme;
  j["m_beta"] = cfg.m_beta;
  j["bandwidth_c"] = cfg.bandwidth_c;
  j["bandwidth_exp"] = cfg.bandwidth_exp;
  j["sample_sizes"] = cfg.sample_sizes;
  j["n_intervals"] = cfg.n_intervals;
  j["n_boot"] = cfg.n_boot;
  j["level"] = cfg.level;
  j["master_seed"] = cfg.master_seed;
  j["threads"] = cfg.threads;
  j["percentile"] = cfg.percentile;
  return j;
}

inline int run(const std::vector<std::string> &args, std::ostream &out,
               std::ostream &err) {
  CLI::App app{"monoboot: Grenander estimator, bootstrap schemes, and "
               "limit-process simulation"};
  app.require_subcommand(1);

  // ---- estimate ----
  auto *estimate = app.add_subcommand(
      "estimate", "Grenander density estimate at t0 from a data file");
  std::string est_data, est_hull_csv;
  double est_t0 = 1.0;
  estimate->add_option("--data", est_data, "one value per line")->required();
  estimate->add_option("--t0", est_t0)->required();
  estimate->add_option("--hull-csv", est_hull_csv,
                       "dump LCM knots to this CSV");

  // ---- ci ----
  auto *ci = app.add_subcommand(
      "ci", "bootstrap confidence interval for f(t0)");
  std::string ci_data, ci_scheme = "edf", ci_out, ci_meta = "ci.meta.json";
  double ci_t0 = 1.0, ci_level = 0.95, ci_mbeta = 2.0 / 3.0;
  double ci_bw_c = 0.5, ci_bw_exp = 1.0 / 6.0;
  std::size_t ci_B = 1000;
  std::uint64_t ci_seed = 0;
  bool ci_percentile = false;
  int ci_threads = 1;
  ci->add_option("--data", ci_data)->required();
  ci->add_option("--t0", ci_t0)->required();
  ci->add_option("--scheme", ci_scheme)
      ->check(CLI::IsMember(
          {"edf", "npmle", "smoothed", "m-of-n-edf", "m-of-n-npmle"}));
  ci->add_option("--B", ci_B);
  ci->add_option("--level", ci_level);
  ci->add_option("--seed", ci_seed)->required();
  ci->add_option("--m-beta", ci_mbeta);
  ci->add_option("--bandwidth-c", ci_bw_c);
  ci->add_option("--bandwidth-exp", ci_bw_exp);
  ci->add_flag("--percentile", ci_percentile);
  ci->add_option("--threads", ci_threads);
  ci->add_option("--out", ci_out, "also write the JSON record here");
  ci->add_option("--meta", ci_meta);

  // ---- coverage ----
  auto *coverage = app.add_subcommand(
      "coverage", "coverage study driven by a JSON config");
  std::string cov_config, cov_dir = ".";
  coverage->add_option("--config", cov_config)->required();
  coverage->add_option("--out-dir", cov_dir);

  // ---- track-quantiles ----
  auto *track = app.add_subcommand(
      "track-quantiles",
      "0.95 bootstrap-root quantile along one nested data sequence");
  std::string tr_model = "exp1", tr_out = "quantiles.csv",
              tr_meta = "quantiles.meta.json";
  std::vector<std::size_t> tr_sizes;
  std::vector<std::string> tr_schemes = {"edf", "npmle"};
  double tr_t0 = 1.0;
  std::size_t tr_B = 1000;
  std::uint64_t tr_seed = 0;
  int tr_threads = 1;
  track->add_option("--model", tr_model);
  track->add_option("--t0", tr_t0);
  track->add_option("--sizes", tr_sizes, "increasing sample sizes")
      ->required();
  track->add_option("--schemes", tr_schemes);
  track->add_option("--B", tr_B);
  track->add_option("--seed", tr_seed)->required();
  track->add_option("--threads", tr_threads);
  track->add_option("--out", tr_out);
  track->add_option("--meta", tr_meta);

  // ---- histogram ----
  auto *hist = app.add_subcommand(
      "histogram", "equal-width histogram CSV from a file of values");
  std::string hi_input, hi_out = "hist.csv";
  std::size_t hi_bins = 30;
  hist->add_option("--input", hi_input)->required();
  hist->add_option("--bins", hi_bins);
  hist->add_option("--out", hi_out);

  // ---- limit ----
  auto *limit = app.add_subcommand(
      "limit", "draws of the LCM slope pair of the limit processes");
  double li_f = 1.0, li_fprime = -2.0, li_c = 4.0, li_delta = 0.001;
  std::size_t li_draws = 1000;
  std::uint64_t li_seed = 0;
  int li_threads = 1;
  std::string li_out = "limit.csv", li_meta = "limit.meta.json";
  limit->add_option("--f", li_f)->required();
  limit->add_option("--fprime", li_fprime)->required();
  limit->add_option("--draws", li_draws)->required();
  limit->add_option("--seed", li_seed)->required();
  limit->add_option("--c", li_c);
  limit->add_option("--delta", li_delta);
  limit->add_option("--threads", li_threads);
  limit->add_option("--out", li_out);
  limit->add_option("--meta", li_meta);

  // ---- chernoff ----
  auto *chern = app.add_subcommand(
      "chernoff", "draws from Chernoff's distribution with a quantile summary");
  double ch_c = 4.0, ch_delta = 0.001;
  std::size_t ch_draws = 1000;
  std::uint64_t ch_seed = 0;
  int ch_threads = 1;
  std::string ch_out = "chernoff.csv", ch_meta = "chernoff.meta.json";
  chern->add_option("--draws", ch_draws)->required();
  chern->add_option("--seed", ch_seed)->required();
  chern->add_option("--c", ch_c);
  chern->add_option("--delta", ch_delta);
  chern->add_option("--threads", ch_threads);
  chern->add_option("--out", ch_out);
  chern->add_option("--meta", ch_meta);

  // ---- check-model ----
  auto *check = app.add_subcommand(
      "check-model", "report the m-of-n NPMLE regularity conditions");
  std::string cm_model = "exp1";
  check->add_option("--model", cm_model);

  std::vector<std::string> argv(args);
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         started)
        .count();
  };

  try {
    if (*estimate) {
      Sample sample;
      try {
        sample = load_sample(est_data);
      } catch (const std::exception &e) {
        err << "data error: " << e.what() << "\n";
        return 2;
      }
      const GrenanderFit fit = grenander(sample);
      out << "f~(" << est_t0 << ") = " << fit.density_at(est_t0) << "\n";
      if (!est_hull_csv.empty()) {
        std::ostringstream csv;
        csv << "knot_x,knot_y\n";
        for (std::size_t i = 0; i < fit.cdf.hull.x.size(); ++i)
          csv << format_double(fit.cdf.hull.x[i]) << ","
              << format_double(fit.cdf.hull.y[i]) << "\n";
        write_text(est_hull_csv, csv.str());
      }
      return 0;
    }

    if (*ci) {
      Sample sample;
      try {
        sample = load_sample(ci_data);
      } catch (const std::exception &e) {
        err << "data error: " << e.what() << "\n";
        return 2;
      }
      ExperimentConfig cfg;
      cfg.scheme = ci_scheme;
      cfg.m_beta = ci_mbeta;
      cfg.bandwidth_c = ci_bw_c;
      cfg.bandwidth_exp = ci_bw_exp;
      const BootstrapScheme scheme = scheme_by_name(cfg);
      const double estimate_value = grenander(sample).density_at(ci_t0);
      const auto dist = bootstrap_distribution(sample, scheme, ci_t0, ci_B,
                                               ci_seed, ci_threads);
      const auto interval = confidence_interval(dist, estimate_value,
                                                sample.n(), ci_level,
                                                ci_percentile);
      json rec;
      rec["estimate"] = estimate_value;
      rec["lo"] = interval.lo;
      rec["hi"] = interval.hi;
      rec["scheme"] = ci_scheme;
      rec["B"] = ci_B;
      rec["seed"] = ci_seed;
      out << rec.dump() << "\n";
      if (!ci_out.empty()) write_text(ci_out, rec.dump(2) + "\n");
      json cj;
      cj["data"] = ci_data;
      cj["t0"] = ci_t0;
      cj["scheme"] = ci_scheme;
      cj["B"] = ci_B;
      cj["level"] = ci_level;
      cj["seed"] = ci_seed;
      cj["m_beta"] = ci_mbeta;
      cj["bandwidth_c"] = ci_bw_c;
      cj["bandwidth_exp"] = ci_bw_exp;
      cj["percentile"] = ci_percentile;
      cj["threads"] = ci_threads;
      write_meta(ci_meta, cj, elapsed());
      return 0;
    }

    if (*coverage) {
      std::ifstream in(cov_config);
      if (!in) {
        err << "cannot open config: " << cov_config << "\n";
        return 2;
      }
      json j;
      try {
        in >> j;
      } catch (const std::exception &e) {
        err << "bad config: " << e.what() << "\n";
        return 2;
      }
      ExperimentConfig cfg;
      try {
        cfg = config_from_json(j);
      } catch (const std::exception &e) {
        err << "bad config: " << e.what() << "\n";
        return 2;
      }
      const CoverageResult res = coverage_study(cfg);
      std::ostringstream csv;
      csv << "n,coverage,mc_stderr,runtime_seconds\n";
      for (const auto &p : res)
        csv << p.n << "," << format_double(p.coverage) << ","
            << format_double(p.mc_stderr) << "," << p.runtime_seconds << "\n";
      write_text(cov_dir + "/coverage.csv", csv.str());
      write_meta(cov_dir + "/meta.json", config_to_json(cfg), elapsed());
      for (const auto &p : res)
        out << "n=" << p.n << " coverage=" << p.coverage << "\n";
      return 0;
    }

    if (*track) {
      ExperimentConfig cfg;
      cfg.model = tr_model;
      cfg.t0 = tr_t0;
      cfg.sample_sizes = tr_sizes;
      cfg.n_boot = tr_B;
      cfg.master_seed = tr_seed;
      cfg.threads = tr_threads;
      const auto rows = quantile_tracking(cfg, tr_schemes);
      std::ostringstream csv;
      csv << "n,scheme,q95\n";
      for (const auto &r : rows)
        csv << r.n << "," << r.scheme << "," << format_double(r.q95) << "\n";
      write_text(tr_out, csv.str());
      json cj = config_to_json(cfg);
      cj["schemes"] = tr_schemes;
      write_meta(tr_meta, cj, elapsed());
      return 0;
    }

    if (*hist) {
      std::ifstream in(hi_input);
      if (!in) {
        err << "cannot open input: " << hi_input << "\n";
        return 2;
      }
      std::vector<double> values;
      double v;
      while (in >> v) values.push_back(v);
      const Histogram h = histogram_export(values, hi_bins);
      std::ostringstream csv;
      csv << "bin_left,bin_right,count,density\n";
      for (std::size_t b = 0; b < h.count.size(); ++b)
        csv << format_double(h.bin_left[b]) << ","
            << format_double(h.bin_right[b]) << "," << h.count[b] << ","
            << format_double(h.density[b]) << "\n";
      write_text(hi_out, csv.str());
      return 0;
    }

    if (*limit) {
      std::vector<LimitDraw> draws(li_draws);
      parallel_for(li_draws, li_threads, [&](std::size_t i) {
        RngStream rng(derive_seed(li_seed, seed_role::kLimit, i));
        draws[i] = limit_pair_draw(li_f, li_fprime, li_c, li_delta, rng);
      });
      std::ostringstream csv;
      csv << "slope_Z,slope_Z20\n";
      for (const auto &d : draws)
        csv << format_double(d.slope_Z) << "," << format_double(d.slope_Z20)
            << "\n";
      write_text(li_out, csv.str());
      json cj;
      cj["f"] = li_f;
      cj["fprime"] = li_fprime;
      cj["draws"] = li_draws;
      cj["seed"] = li_seed;
      cj["c"] = li_c;
      cj["delta"] = li_delta;
      cj["threads"] = li_threads;
      write_meta(li_meta, cj, elapsed());
      return 0;
    }

    if (*chern) {
      std::vector<double> draws(ch_draws);
      parallel_for(ch_draws, ch_threads, [&](std::size_t i) {
        RngStream rng(derive_seed(ch_seed, seed_role::kLimit, i));
        draws[i] = chernoff_draw(ch_c, ch_delta, rng);
      });
      std::ostringstream csv;
      csv << "draw\n";
      for (double d : draws) csv << format_double(d) << "\n";
      write_text(ch_out, csv.str());
      std::vector<double> sorted(draws);
      std::sort(sorted.begin(), sorted.end());
      for (double p : {0.5, 0.9, 0.95, 0.99})
        out << "q" << p << " = " << empirical_quantile(sorted, p) << "\n";
      json cj;
      cj["draws"] = ch_draws;
      cj["seed"] = ch_seed;
      cj["c"] = ch_c;
      cj["delta"] = ch_delta;
      cj["threads"] = ch_threads;
      write_meta(ch_meta, cj, elapsed());
      return 0;
    }

    if (*check) {
      const TrueModel model = builtin_model(cm_model);
      const ModelConditionsReport rep = check_conditions(model);
      json j;
      j["model"] = cm_model;
      j["alpha1_finite"] = rep.alpha1_finite;
      j["gamma_F"] = rep.gamma_F;
      j["beta_F"] = rep.beta_F;
      j["satisfied"] = rep.satisfied;
      out << j.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

inline int run_main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << "usage: monoboot <subcommand> [flags]; see monoboot --help\n";
    return 2;
  }
  return run(args, std::cout, std::cerr);
}

}  // namespace monoboot::cli
