#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgdlab/geometry.hpp"
#include "sgdlab/objectives.hpp"
#include "sgdlab/optimizers.hpp"

namespace sgdlab {

// Partial sums X_1..X_T of a bounded-increment martingale together with the
// per-step increment bounds c_t.
struct MartingaleTrace {
  std::vector<double> values;
  std::vector<double> increment_bounds;

  double max_abs() const;
};

struct EnsembleSummary {
  std::string algorithm;
  std::string problem;
  long long T = 0;
  int trial_count = 0;
  double eps = 0.0;
  std::vector<double> gaps;       // f(u_end) - f(u_opt) per trial
  std::vector<double> max_abs_X;  // per trial, when a martingale was built
  std::vector<double> thresholds;
  std::vector<double> empirical_tails;    // fraction per threshold (max_abs_X)
  std::vector<double> wilson_low;
  std::vector<double> wilson_high;
  std::vector<double> hoeffding_bounds;        // 2 exp(-a^2 / (2 sum c_t^2))
  std::vector<double> hoeffding_bounds_alt;    // tighter-constant denominator variant
  double median_gap = 0.0;
  std::optional<double> rate_slope;
};

// X_t = sum_{s<=t} eps_s [(fhat_s(u_s) - fhat_s(u_opt)) - (f(u_s) - f(u_opt))],
// reconstructed exactly from the recorded per-step scalars; increment bounds
// c_t = 2 G diam eps_t.
MartingaleTrace martingale_trace_raspgd(const RunTrace& trace, const ConvexObjective& mean_f,
                                        double G, double diam);

// Monte Carlo estimate of the subgradient of g = E[f + 2G psi] under the
// ball perturbation; fresh (sample, noise) pairs; norm <= 3G.
Vec estimate_g_subgradient(const StochasticObjective& d, const ConvexBody& body, double eps_sm,
                           const Vec& x, int n_mc, Rng& rng);

// X_t = -sum_{s<=t} eps_s [<dg(u_s), dg_{s+1/2}(u_s)> - ||dg(u_s)||^2] with
// dg estimated by estimate_g_subgradient; c_t = 18 G^2 eps_t.
MartingaleTrace martingale_trace_ssgd(const RunTrace& trace, const StochasticObjective& d,
                                      const ConvexBody& body, double eps_sm, int n_mc, Rng& rng);

// min(1, 2 exp(-eps_prob^2 / (2 sum c_t^2)))
double hoeffding_doob_bound(double eps_prob, const std::vector<double>& increment_bounds);

enum class TailField { Gaps, MaxAbsX };

struct TailEstimate {
  double fraction;
  double wilson_low;
  double wilson_high;  // 95% Wilson interval
};

// Fraction of trials with field value strictly above the threshold.
TailEstimate empirical_tail(const EnsembleSummary& summary, double threshold, TailField field);

// Least-squares slope of log(gap) against log(T); nonpositive gaps are
// excluded.
double fit_rate(const std::vector<long long>& T_values, const std::vector<double>& median_gaps);

struct BoundCheck {
  double lhs;
  double rhs;
  bool holds;
};

// f(u_end) - f(u_opt)  vs  (||u1 - u_opt||^2 + G^2 sum eps_t^2) / (2 sum eps_t)
BoundCheck check_rapgd_bound(const RunTrace& trace, const ConvexObjective& f);

// Per-run rearrangement for stochastic running-average runs:
// sum eps_t (f(u_t) - f(u_opt)) <= (||u1-u_opt||^2 + G^2 sum eps_t^2)/2 + |X_T|
BoundCheck check_raspgd_per_run(const RunTrace& trace, const ConvexObjective& mean_f, double G,
                                double diam);

enum class PpgdBranch { ErrorSmall, LocalNormSmall, Violation };

struct PpgdDichotomy {
  PpgdBranch branch;
  double gap;               // f(u_end) - f(u_opt)
  double threshold;         // local-norm threshold of the second branch
  double min_local_norm;    // smallest lower estimate seen over the scan
};

// Reports which branch of the PPGD dichotomy held. The local-norm scan uses
// lower estimates, so Violation is only an estimate-conditional verdict.
PpgdDichotomy check_ppgd_dichotomy(const RunTrace& trace, const ConvexObjective& f,
                                   const ConvexBody& body, double eps_err, double gamma,
                                   int ln_samples);

}  // namespace sgdlab
