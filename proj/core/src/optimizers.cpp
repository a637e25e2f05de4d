#include "sgdlab/optimizers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgdlab/smoothing.hpp"

namespace sgdlab {

namespace {

void check_start(const ConvexBody& body, const Vec& u1, long long T) {
  require_dim(u1, body.dim(), "u1");
  require_finite(u1, "u1");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (!membership(body, u1, 1e-9)) throw std::invalid_argument("u1 outside body");
}

[[noreturn]] void abort_nonfinite(long long t) {
  throw std::runtime_error("non-finite iterate at step " + std::to_string(t));
}

// Shared RAPGD/RASPGD loop; `sample` supplies the per-step objective.
template <typename SampleFn>
RunTrace run_running_average(const ConvexBody& body, const Schedule& s, const Vec& u1, long long T,
                             SampleFn&& sample, const std::optional<Optimum>& opt,
                             const RunOptions& opts) {
  RunTrace trace;
  trace.iterates.reserve(static_cast<std::size_t>(T) + 1);
  if (opts.record_half_steps) trace.half_steps.emplace();
  Vec u = u1;
  Vec running = zeros(u1.size());
  double rho = 0.0;
  for (long long t = 1; t <= T; ++t) {
    const double eps_t = schedule_at(s, t);
    const ConvexObjective& f_t = sample(t);
    trace.iterates.push_back(u);
    trace.dist_to_body.push_back(distance_to_set(body, u));
    trace.step_sizes.push_back(eps_t);
    trace.sampled_values_at_iterate.push_back(f_t.value(u));
    if (opt) trace.sampled_values_at_opt.push_back(f_t.value(opt->point));
    rho += eps_t;
    axpy(running, eps_t, u);
    Vec half = u;
    axpy(half, -eps_t, f_t.subgrad(u));
    if (!all_finite(half)) abort_nonfinite(t);
    if (opts.record_half_steps) trace.half_steps->push_back(half);
    u = project(body, half);
  }
  trace.iterates.push_back(u);
  trace.dist_to_body.push_back(distance_to_set(body, u));
  trace.u_end = scaled(std::move(running), 1.0 / rho);
  return trace;
}

}  // namespace

double schedule_at(const Schedule& s, long long t) {
  if (t < 1) throw std::invalid_argument("schedule_at: t must be >= 1");
  switch (s.kind) {
    case Schedule::Kind::Constant:
      return s.c;
    case Schedule::Kind::InverseSqrt:
      return s.c / std::sqrt(static_cast<double>(t));
  }
  throw std::logic_error("schedule_at: bad kind");
}

RunTrace run_rapgd(const ConvexObjective& f, const ConvexBody& body, const Schedule& s,
                   const Vec& u1, long long T, const RunOptions& opts) {
  check_start(body, u1, T);
  return run_running_average(
      body, s, u1, T, [&](long long) -> const ConvexObjective& { return f; }, f.optimum, opts);
}

RunTrace run_ppgd(const ConvexObjective& f, const ConvexBody& body, const Schedule& s,
                  const Vec& u1, long long T, const RunOptions& opts) {
  check_start(body, u1, T);
  RunTrace trace;
  trace.iterates.reserve(static_cast<std::size_t>(T) + 1);
  if (opts.record_half_steps) trace.half_steps.emplace();
  Vec u = u1;
  for (long long t = 1; t <= T; ++t) {
    const double eps_t = schedule_at(s, t);
    trace.iterates.push_back(u);
    trace.dist_to_body.push_back(distance_to_set(body, u));
    trace.step_sizes.push_back(eps_t);
    trace.sampled_values_at_iterate.push_back(f.value(u));
    if (f.optimum) trace.sampled_values_at_opt.push_back(f.value(f.optimum->point));
    Vec half = u;
    axpy(half, -eps_t, f.subgrad(u));
    if (!all_finite(half)) abort_nonfinite(t);
    if (opts.record_half_steps) trace.half_steps->push_back(half);
    u = project(body, half);
  }
  trace.iterates.push_back(u);
  trace.dist_to_body.push_back(distance_to_set(body, u));
  trace.u_end = u;
  return trace;
}

RunTrace run_raspgd(const StochasticObjective& d, const ConvexBody& body, const Schedule& s,
                    const Vec& u1, long long T, Rng& rng, const RunOptions& opts) {
  check_start(body, u1, T);
  ConvexObjective current;
  RunTrace trace = run_running_average(
      body, s, u1, T,
      [&](long long) -> const ConvexObjective& {
        current = d.draw(rng);
        return current;
      },
      d.mean.optimum, opts);
  return trace;
}

RunTrace run_ssgd(const StochasticObjective& d, const ConvexBody& body, const Schedule& s,
                  double eps_sm, const Vec& u1, long long T, bool smooth, Rng& rng,
                  const RunOptions& opts) {
  check_start(body, u1, T);
  if (smooth && !(eps_sm > 0.0))
    throw std::invalid_argument("run_ssgd: eps_sm must be positive when smooth");
  const double G = d.grad_bound;
  const BallNoise noise{static_cast<int>(body.dim()), smooth ? eps_sm : 1.0};

  RunTrace trace;
  trace.iterates.reserve(static_cast<std::size_t>(T) + 1);
  trace.realized_subgrads.emplace();
  Vec u = u1;
  for (long long t = 1; t <= T; ++t) {
    const double eps_t = schedule_at(s, t);
    const ConvexObjective f_t = d.draw(rng);
    Vec z = u;
    if (smooth) {
      Vec v = sample_uniform_ball(noise, rng);
      z = sub(std::move(z), v);
    }
    Vec gf = f_t.subgrad(z);
    if (norm(gf) > G * (1.0 + 1e-9))
      throw std::runtime_error("run_ssgd: sampled subgradient violates G at step " +
                               std::to_string(t));
    Vec step = gf;  // realized subgradient of the sampled penalized objective
    axpy(step, 2.0 * G, gauge_subgradient(body, z));

    trace.iterates.push_back(u);
    trace.dist_to_body.push_back(distance_to_set(body, u));
    trace.step_sizes.push_back(eps_t);
    trace.sampled_values_at_iterate.push_back(f_t.value(u));
    if (d.mean.optimum) trace.sampled_values_at_opt.push_back(f_t.value(d.mean.optimum->point));
    trace.realized_subgrads->push_back(step);

    axpy(u, -eps_t, step);
    if (!all_finite(u)) abort_nonfinite(t);
  }
  trace.iterates.push_back(u);
  trace.dist_to_body.push_back(distance_to_set(body, u));
  trace.u_end = project(body, u);
  return trace;
}

long long required_steps_ssgd(double G, double diam, double eps, bool lipschitz_case) {
  if (!(G > 0.0) || !(diam > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("required_steps_ssgd: arguments must be positive");
  const double p = lipschitz_case ? 2.0 : 3.0;
  const double inner = 3.0 * G * diam / (2.0 * std::pow(eps, p)) + 1.0;
  const double c = std::ceil(inner);
  return static_cast<long long>(c) * static_cast<long long>(c) - 1;
}

long long required_steps_raspgd(double G, double diam, double eps) {
  if (!(G > 0.0) || !(diam > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("required_steps_raspgd: arguments must be positive");
  const double c = std::ceil((2.0 * G * diam + G * G) / (4.0 * eps));
  return static_cast<long long>(c) * static_cast<long long>(c);
}

}  // namespace sgdlab
