// sgdlab: config-driven experiment runner for the projected / penalized
// subgradient algorithms in the core library.
//
//   sgdlab run   --config cfg.json [--out-dir d] [--threads N] [--verbose]
//   sgdlab check --config cfg.json            (per-run invariant suite)
//   sgdlab steps --alg {ssgd|raspgd} --G v --diam v --eps v [--lipschitz]

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sgdlab/analysis.hpp"
#include "sgdlab/config.hpp"
#include "sgdlab/runner.hpp"

namespace {

using namespace sgdlab;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CheckReport {
  int passed = 0;
  int failed = 0;

  void line(const std::string& name, bool ok, const std::string& detail = "") {
    (ok ? passed : failed) += 1;
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
  }
};

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads,
            bool verbose) {
  ExperimentConfig cfg = parse_config(slurp(config_path));
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    cfg.trace_dir = out_dir + "/traces";
    cfg.summary_path = out_dir + "/summary.json";
  }
  EnsembleSummary s = run_experiment(cfg, threads);
  if (verbose) {
    std::cout << summary_to_json(s);
  } else {
    std::printf("%s %s: T=%lld trials=%d median_gap=%.17g\n", s.algorithm.c_str(),
                s.problem.c_str(), s.T, s.trial_count, s.median_gap);
  }
  return 0;
}

int cmd_check(const std::string& config_path) {
  ExperimentConfig cfg = parse_config(slurp(config_path));
  cfg.trace_dir.clear();
  cfg.summary_path.clear();
  const StochasticObjective d = build_problem(cfg);
  const ConvexBody& body = cfg.body;
  const double G = d.grad_bound;
  const double diam = diameter(body);

  Vec u1;
  if (cfg.u1) {
    u1 = *cfg.u1;
  } else {
    const Box box = enclosing_box(body);
    Vec m(box.lower.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (box.lower[i] + box.upper[i]);
    u1 = project(body, m);
  }

  CheckReport rep;
  const int trials = std::min(cfg.trials, 32);  // bounded check budget
  for (int trial = 0; trial < trials; ++trial) {
    const std::string tag = " (trial " + std::to_string(trial) + ")";
    Rng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial)));
    RunTrace trace;
    switch (cfg.algorithm) {
      case Algorithm::Rapgd:
        trace = run_rapgd(d.mean, body, cfg.schedule, u1, cfg.T);
        break;
      case Algorithm::Ppgd:
        trace = run_ppgd(d.mean, body, cfg.schedule, u1, cfg.T);
        break;
      case Algorithm::Raspgd:
        trace = run_raspgd(d, body, cfg.schedule, u1, cfg.T, rng);
        break;
      case Algorithm::Ssgd:
        trace = run_ssgd(d, body, cfg.schedule, cfg.eps_sm.value_or(0.0), u1, cfg.T, cfg.smooth,
                         rng);
        break;
    }

    if (cfg.algorithm != Algorithm::Ssgd) {
      bool inside = true;
      for (const Vec& u : trace.iterates)
        if (!membership(body, u, 1e-9)) inside = false;
      rep.line("iterates stay in the body" + tag, inside);
    }

    switch (cfg.algorithm) {
      case Algorithm::Rapgd: {
        if (d.mean.optimum) {
          BoundCheck c = check_rapgd_bound(trace, d.mean);
          char buf[96];
          std::snprintf(buf, sizeof(buf), "lhs=%.6g rhs=%.6g", c.lhs, c.rhs);
          rep.line("running-average gap bound" + tag, c.holds, buf);
        }
        break;
      }
      case Algorithm::Ppgd: {
        bool mono = true;
        if (d.mean.lipschitz_grad) {
          double prev = d.mean.value(trace.iterates.front());
          for (std::size_t t = 1; t < trace.iterates.size(); ++t) {
            const double cur = d.mean.value(trace.iterates[t]);
            if (cur > prev + 1e-12) mono = false;
            prev = cur;
          }
          rep.line("monotone descent" + tag, mono);
        }
        break;
      }
      case Algorithm::Raspgd: {
        if (d.mean.optimum) {
          BoundCheck c = check_raspgd_per_run(trace, d.mean, G, diam);
          char buf[96];
          std::snprintf(buf, sizeof(buf), "lhs=%.6g rhs=%.6g", c.lhs, c.rhs);
          rep.line("per-run weighted-gap inequality" + tag, c.holds, buf);
          MartingaleTrace mt = martingale_trace_raspgd(trace, d.mean, G, diam);
          bool incr_ok = true;
          double prev = 0.0;
          for (std::size_t s = 0; s < mt.values.size(); ++s) {
            if (std::abs(mt.values[s] - prev) > mt.increment_bounds[s] + 1e-9) incr_ok = false;
            prev = mt.values[s];
          }
          rep.line("martingale increment bounds" + tag, incr_ok);
        }
        break;
      }
      case Algorithm::Ssgd: {
        bool disp_ok = true;
        for (std::size_t s = 0; s + 1 < trace.iterates.size(); ++s) {
          const double step = dist(trace.iterates[s + 1], trace.iterates[s]);
          if (step > 3.0 * G * trace.step_sizes[s] + 1e-9) disp_ok = false;
        }
        rep.line("step displacement <= 3 G eps_t" + tag, disp_ok);
        if (d.mean.optimum) {
          const Vec& last = trace.iterates.back();
          const double pen = d.mean.value(last) + 2.0 * G * gauge_value(body, last) -
                             d.mean.optimum->value;
          const double distc = distance_to_set(body, last);
          rep.line("distance recovery from penalized gap" + tag, distc <= pen / G + 1e-9);
        }
        break;
      }
    }
  }

  std::printf("%d passed, %d failed\n", rep.passed, rep.failed);
  return rep.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex stochastic-optimization lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir, alg;
  int threads = 1;
  bool verbose = false, lipschitz = false;
  double G = 0.0, diam = 0.0, eps = 0.0;

  CLI::App* run = app.add_subcommand("run", "execute a config's trial ensemble");
  run->add_option("--config", config_path, "JSON experiment config")->required();
  run->add_option("--out-dir", out_dir, "override output directory");
  run->add_option("--threads", threads, "worker pool size")->check(CLI::PositiveNumber);
  run->add_flag("--verbose", verbose, "print the summary JSON");

  CLI::App* check = app.add_subcommand("check", "run the per-run invariant suite");
  check->add_option("--config", config_path, "JSON experiment config")->required();

  CLI::App* steps = app.add_subcommand("steps", "print the required step count");
  steps->add_option("--alg", alg, "ssgd or raspgd")->required();
  steps->add_option("--G", G, "subgradient bound")->required();
  steps->add_option("--diam", diam, "body diameter")->required();
  steps->add_option("--eps", eps, "target accuracy")->required();
  steps->add_flag("--lipschitz", lipschitz, "smooth-gradient variant (ssgd)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, threads, verbose);
    if (check->parsed()) return cmd_check(config_path);
    if (steps->parsed()) {
      long long T = 0;
      if (alg == "ssgd") {
        T = sgdlab::required_steps_ssgd(G, diam, eps, lipschitz);
      } else if (alg == "raspgd") {
        T = sgdlab::required_steps_raspgd(G, diam, eps);
      } else {
        std::fprintf(stderr, "unknown --alg '%s' (want ssgd or raspgd)\n", alg.c_str());
        return 2;
      }
      std::printf("%lld\n", T);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
