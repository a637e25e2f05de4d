#include "sgdlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgdlab/smoothing.hpp"

namespace sgdlab {

double MartingaleTrace::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

MartingaleTrace martingale_trace_raspgd(const RunTrace& trace, const ConvexObjective& mean_f,
                                        double G, double diam) {
  if (!mean_f.optimum) throw std::invalid_argument("martingale_trace_raspgd: optimum unknown");
  const std::size_t T = trace.step_sizes.size();
  if (trace.sampled_values_at_iterate.size() != T || trace.sampled_values_at_opt.size() != T)
    throw std::invalid_argument("martingale_trace_raspgd: missing recorded samples");
  const Vec& uopt = mean_f.optimum->point;
  const double fopt = mean_f.optimum->value;

  MartingaleTrace mt;
  mt.values.reserve(T);
  mt.increment_bounds.reserve(T);
  double x = 0.0;
  for (std::size_t s = 0; s < T; ++s) {
    const double eps_s = trace.step_sizes[s];
    const double sampled_gap = trace.sampled_values_at_iterate[s] - trace.sampled_values_at_opt[s];
    const double mean_gap = mean_f.value(trace.iterates[s]) - fopt;
    x += eps_s * (sampled_gap - mean_gap);
    mt.values.push_back(x);
    mt.increment_bounds.push_back(2.0 * G * diam * eps_s);
  }
  (void)uopt;
  return mt;
}

Vec estimate_g_subgradient(const StochasticObjective& d, const ConvexBody& body, double eps_sm,
                           const Vec& x, int n_mc, Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("estimate_g_subgradient: n_mc must be >= 1");
  const double G = d.grad_bound;
  const BallNoise noise{static_cast<int>(body.dim()), eps_sm};
  Vec mean = zeros(x.size());
  for (int i = 0; i < n_mc; ++i) {
    ConvexObjective f_hat = d.draw(rng);
    Vec z = sub(x, sample_uniform_ball(noise, rng));
    Vec g = f_hat.subgrad(z);
    axpy(g, 2.0 * G, gauge_subgradient(body, z));
    axpy(mean, 1.0 / n_mc, g);
  }
  return mean;
}

MartingaleTrace martingale_trace_ssgd(const RunTrace& trace, const StochasticObjective& d,
                                      const ConvexBody& body, double eps_sm, int n_mc, Rng& rng) {
  if (!trace.realized_subgrads)
    throw std::invalid_argument("martingale_trace_ssgd: trace lacks realized subgradients");
  const std::size_t T = trace.step_sizes.size();
  const double G = d.grad_bound;

  MartingaleTrace mt;
  mt.values.reserve(T);
  mt.increment_bounds.reserve(T);
  double x = 0.0;
  for (std::size_t s = 0; s < T; ++s) {
    const double eps_s = trace.step_sizes[s];
    Vec dg = estimate_g_subgradient(d, body, eps_sm, trace.iterates[s], n_mc, rng);
    const double inner = dot(dg, (*trace.realized_subgrads)[s]);
    x -= eps_s * (inner - dot(dg, dg));
    mt.values.push_back(x);
    mt.increment_bounds.push_back(18.0 * G * G * eps_s);
  }
  return mt;
}

double hoeffding_doob_bound(double eps_prob, const std::vector<double>& increment_bounds) {
  if (!(eps_prob > 0.0)) throw std::invalid_argument("hoeffding_doob_bound: eps_prob must be positive");
  if (increment_bounds.empty())
    throw std::invalid_argument("hoeffding_doob_bound: empty increment list");
  double s2 = 0.0;
  for (double c : increment_bounds) {
    if (!(c > 0.0)) throw std::invalid_argument("hoeffding_doob_bound: increments must be positive");
    s2 += c * c;
  }
  return std::min(1.0, 2.0 * std::exp(-eps_prob * eps_prob / (2.0 * s2)));
}

namespace {

TailEstimate wilson(const std::vector<double>& xs, double threshold) {
  const double n = static_cast<double>(xs.size());
  double k = 0.0;
  for (double v : xs)
    if (v > threshold) k += 1.0;
  const double p = k / n;
  const double z = 1.959963984540054;  // 95%
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace

TailEstimate empirical_tail(const EnsembleSummary& summary, double threshold, TailField field) {
  if (summary.trial_count < 1) throw std::invalid_argument("empirical_tail: no trials");
  const std::vector<double>& xs = field == TailField::Gaps ? summary.gaps : summary.max_abs_X;
  if (xs.empty()) throw std::invalid_argument("empirical_tail: field not recorded");
  return wilson(xs, threshold);
}

double fit_rate(const std::vector<long long>& T_values, const std::vector<double>& median_gaps) {
  if (T_values.size() != median_gaps.size() || T_values.size() < 3)
    throw std::invalid_argument("fit_rate: need >= 3 matched points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < T_values.size(); ++i) {
    if (!(median_gaps[i] > 0.0)) continue;  // report-and-exclude
    lx.push_back(std::log(static_cast<double>(T_values[i])));
    ly.push_back(std::log(median_gaps[i]));
  }
  if (lx.size() < 2) throw std::invalid_argument("fit_rate: too few positive gaps");
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BoundCheck check_rapgd_bound(const RunTrace& trace, const ConvexObjective& f) {
  if (!f.optimum) throw std::invalid_argument("check_rapgd_bound: optimum unknown");
  const double lhs = f.value(trace.u_end) - f.optimum->value;
  double sum_eps = 0.0, sum_eps2 = 0.0;
  for (double e : trace.step_sizes) {
    sum_eps += e;
    sum_eps2 += e * e;
  }
  const double d0 = dist(trace.iterates.front(), f.optimum->point);
  const double G = f.grad_bound;
  const double rhs = (d0 * d0 + G * G * sum_eps2) / (2.0 * sum_eps);
  return {lhs, rhs, lhs <= rhs + 1e-9};
}

BoundCheck check_raspgd_per_run(const RunTrace& trace, const ConvexObjective& mean_f, double G,
                                double diam) {
  if (!mean_f.optimum) throw std::invalid_argument("check_raspgd_per_run: optimum unknown");
  MartingaleTrace mt = martingale_trace_raspgd(trace, mean_f, G, diam);
  const double fopt = mean_f.optimum->value;
  double lhs = 0.0, sum_eps2 = 0.0;
  for (std::size_t s = 0; s < trace.step_sizes.size(); ++s) {
    const double e = trace.step_sizes[s];
    lhs += e * (mean_f.value(trace.iterates[s]) - fopt);
    sum_eps2 += e * e;
  }
  const double d0 = dist(trace.iterates.front(), mean_f.optimum->point);
  const double rhs = (d0 * d0 + G * G * sum_eps2) / 2.0 + std::abs(mt.values.back());
  return {lhs, rhs, lhs <= rhs + 1e-9};
}

PpgdDichotomy check_ppgd_dichotomy(const RunTrace& trace, const ConvexObjective& f,
                                   const ConvexBody& body, double eps_err, double gamma,
                                   int ln_samples) {
  if (!f.optimum) throw std::invalid_argument("check_ppgd_dichotomy: optimum unknown");
  if (f.lipschitz_grad) {
    for (double e : trace.step_sizes)
      if (1.0 - e * *f.lipschitz_grad < gamma)
        throw std::invalid_argument("check_ppgd_dichotomy: schedule violates 1 - eps_t L >= gamma");
  }
  PpgdDichotomy out{};
  out.gap = f.value(trace.u_end) - f.optimum->value;
  double sum_eps = 0.0;
  for (double e : trace.step_sizes) sum_eps += e;
  const double head = f.value(trace.iterates.front()) - f.optimum->value - eps_err;
  out.threshold = head > 0.0 ? std::sqrt(2.0 * head / (gamma * sum_eps)) : 0.0;
  out.min_local_norm = std::numeric_limits<double>::infinity();

  if (out.gap <= eps_err) {
    out.branch = PpgdBranch::ErrorSmall;
    return out;
  }
  for (std::size_t t = 0; t < trace.step_sizes.size(); ++t) {
    Vec g = f.subgrad(trace.iterates[t]);
    const double gn = norm(g);
    if (gn <= 1e-15) {
      out.min_local_norm = 0.0;
      break;
    }
    // The dichotomy measures the descent direction: the projected step is
    // pi(p + r w) with w = -grad/|grad|, and at a constrained minimizer the
    // local norm of w vanishes while that of +grad generally does not.
    LocalNormQuery q{trace.iterates[t], scaled(g, -1.0 / gn), trace.step_sizes[t] * gn,
                     ln_samples};
    out.min_local_norm = std::min(out.min_local_norm, local_norm(body, q));
    if (out.min_local_norm <= out.threshold) break;
  }
  out.branch = out.min_local_norm <= out.threshold ? PpgdBranch::LocalNormSmall
                                                   : PpgdBranch::Violation;
  return out;
}

}  // namespace sgdlab
