#include "sgdlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sgdlab {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_number_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt17(xs[i]);
  }
  return out + "]";
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Vec default_start(const ConvexBody& body) {
  // deterministic member point: project the box midpoint
  const Box box = enclosing_box(body);
  Vec m(box.lower.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (box.lower[i] + box.upper[i]);
  return project(body, m);
}

struct TrialResult {
  double gap = 0.0;
  double max_abs_x = 0.0;
  bool has_martingale = false;
  bool diverged = false;
  std::string error;
};

}  // namespace

void write_trace_csv(const RunTrace& trace, const ConvexObjective& mean_f,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace file: " + path);
  const bool have_mean = static_cast<bool>(mean_f.value);
  out << "t,eps_t,f_u_t,dist_to_body,sampled_value_at_u,sampled_value_at_opt\n";
  for (std::size_t s = 0; s < trace.step_sizes.size(); ++s) {
    out << (s + 1) << ',' << fmt17(trace.step_sizes[s]) << ',';
    out << (have_mean ? fmt17(mean_f.value(trace.iterates[s])) : std::string{}) << ',';
    out << fmt17(trace.dist_to_body[s]) << ',';
    out << fmt17(trace.sampled_values_at_iterate[s]) << ',';
    if (s < trace.sampled_values_at_opt.size()) out << fmt17(trace.sampled_values_at_opt[s]);
    out << '\n';
  }
}

std::string summary_to_json(const EnsembleSummary& s) {
  // keys in ASCII order: T < algorithm < empirical_tails < ...
  std::ostringstream out;
  out << "{\n";
  out << "  \"T\": " << s.T << ",\n";
  out << "  \"algorithm\": \"" << s.algorithm << "\",\n";
  out << "  \"empirical_tails\": " << json_number_array(s.empirical_tails) << ",\n";
  out << "  \"eps\": " << fmt17(s.eps) << ",\n";
  out << "  \"hoeffding_bounds\": " << json_number_array(s.hoeffding_bounds) << ",\n";
  out << "  \"hoeffding_bounds_alt\": " << json_number_array(s.hoeffding_bounds_alt) << ",\n";
  out << "  \"median_gap\": " << fmt17(s.median_gap) << ",\n";
  out << "  \"problem\": \"" << s.problem << "\",\n";
  out << "  \"rate_slope\": " << (s.rate_slope ? fmt17(*s.rate_slope) : "null") << ",\n";
  out << "  \"thresholds\": " << json_number_array(s.thresholds) << ",\n";
  out << "  \"trials\": " << s.trial_count << ",\n";
  out << "  \"wilson_high\": " << json_number_array(s.wilson_high) << ",\n";
  out << "  \"wilson_low\": " << json_number_array(s.wilson_low) << "\n";
  out << "}\n";
  return out.str();
}

void write_results(const EnsembleSummary& summary, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open summary file: " + path);
  out << summary_to_json(summary);
}

EnsembleSummary run_experiment(const ExperimentConfig& cfg, int threads) {
  const StochasticObjective d = build_problem(cfg);
  const ConvexBody& body = cfg.body;
  const double G = d.grad_bound;
  const double diam = diameter(body);
  const Vec u1 = cfg.u1 ? *cfg.u1 : default_start(body);
  if (!cfg.trace_dir.empty()) std::filesystem::create_directories(cfg.trace_dir);

  RunOptions opts;
  opts.record_half_steps = cfg.record_half_steps;

  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};

  auto worker = [&]() {
    for (;;) {
      const int trial = next.fetch_add(1);
      if (trial >= cfg.trials) return;
      TrialResult& res = results[static_cast<std::size_t>(trial)];
      const std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial));
      Rng rng(seed);
      try {
        RunTrace trace;
        switch (cfg.algorithm) {
          case Algorithm::Rapgd:
            trace = run_rapgd(d.mean, body, cfg.schedule, u1, cfg.T, opts);
            break;
          case Algorithm::Ppgd:
            trace = run_ppgd(d.mean, body, cfg.schedule, u1, cfg.T, opts);
            break;
          case Algorithm::Raspgd:
            trace = run_raspgd(d, body, cfg.schedule, u1, cfg.T, rng, opts);
            break;
          case Algorithm::Ssgd:
            trace = run_ssgd(d, body, cfg.schedule, cfg.eps_sm.value_or(0.0), u1, cfg.T,
                             cfg.smooth, rng, opts);
            break;
        }
        trace.seed = seed;
        if (d.mean.optimum) res.gap = d.mean.value(trace.u_end) - d.mean.optimum->value;
        if (cfg.algorithm == Algorithm::Raspgd && d.mean.optimum) {
          MartingaleTrace mt = martingale_trace_raspgd(trace, d.mean, G, diam);
          res.max_abs_x = mt.max_abs();
          res.has_martingale = true;
        }
        if (!cfg.trace_dir.empty()) {
          write_trace_csv(trace, d.mean,
                          cfg.trace_dir + "/trial_" + std::to_string(trial) + ".csv");
        }
      } catch (const std::exception& e) {
        res.diverged = true;
        res.error = e.what();
      }
    }
  };

  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  EnsembleSummary s;
  s.algorithm = algorithm_name(cfg.algorithm);
  s.problem = cfg.problem_name;
  s.T = cfg.T;
  s.trial_count = cfg.trials;
  s.eps = cfg.eps.value_or(0.0);
  bool any_martingale = false;
  for (const TrialResult& r : results) {
    if (r.diverged) continue;  // recorded per trial, not fatal to the ensemble
    s.gaps.push_back(r.gap);
    if (r.has_martingale) {
      s.max_abs_X.push_back(r.max_abs_x);
      any_martingale = true;
    }
  }
  s.median_gap = median(s.gaps);

  if (any_martingale) {
    // thresholds: {0.5, 1, 2} x the theory-suggested eps_prob
    const double eps_prob = 2.0 * G * diam * (std::log(static_cast<double>(cfg.T)) + 1.0);
    std::vector<double> eps2;
    double sum_eps2 = 0.0;
    for (long long t = 1; t <= cfg.T; ++t) {
      const double e = schedule_at(cfg.schedule, t);
      eps2.push_back(2.0 * G * diam * e);
      sum_eps2 += e * e;
    }
    for (double mult : {0.5, 1.0, 2.0}) {
      const double a = mult * eps_prob;
      s.thresholds.push_back(a);
      TailEstimate te = empirical_tail(s, a, TailField::MaxAbsX);
      s.empirical_tails.push_back(te.fraction);
      s.wilson_low.push_back(te.wilson_low);
      s.wilson_high.push_back(te.wilson_high);
      s.hoeffding_bounds.push_back(hoeffding_doob_bound(a, eps2));
      // the displayed variant with denominator 4 G^2 diam^2 sum eps_t^2
      s.hoeffding_bounds_alt.push_back(std::min(
          1.0, 2.0 * std::exp(-a * a / (4.0 * G * G * diam * diam * sum_eps2))));
    }
  }
  if (!cfg.summary_path.empty()) write_results(s, cfg.summary_path);
  return s;
}

}  // namespace sgdlab
