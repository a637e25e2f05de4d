#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgdlab/geometry.hpp"
#include "sgdlab/objectives.hpp"
#include "sgdlab/rng.hpp"

namespace sgdlab {

struct Schedule {
  enum class Kind { Constant, InverseSqrt };
  Kind kind = Kind::InverseSqrt;
  double c = 1.0;

  static Schedule constant(double c) { return {Kind::Constant, c}; }
  static Schedule inverse_sqrt(double c) { return {Kind::InverseSqrt, c}; }
};

// eps_t: Constant -> c; InverseSqrt -> c / sqrt(t). t >= 1.
double schedule_at(const Schedule& s, long long t);

// Full history of one run. Iterates are u_1..u_{T+1}; per-step scalars are
// indexed by t = 1..T (position t-1).
struct RunTrace {
  std::vector<Vec> iterates;
  std::optional<std::vector<Vec>> half_steps;
  std::vector<double> sampled_values_at_iterate;  // f_{t+1/2}(u_t)
  std::vector<double> sampled_values_at_opt;      // f_{t+1/2}(u_opt), when known
  // Realized per-step subgradients of the sampled penalized objective at
  // u_t (SSGD only); lets analysis reconstruct the inner products of its
  // martingale.
  std::optional<std::vector<Vec>> realized_subgrads;
  std::vector<double> step_sizes;
  Vec u_end;
  std::vector<double> dist_to_body;  // dist(u_t, C), t = 1..T+1
  std::uint64_t seed = 0;

  long long steps() const { return static_cast<long long>(step_sizes.size()); }
};

struct RunOptions {
  bool record_half_steps = false;
};

// Gradient step, projection, learning-rate-weighted running average output.
RunTrace run_rapgd(const ConvexObjective& f, const ConvexBody& body, const Schedule& s,
                   const Vec& u1, long long T, const RunOptions& opts = {});

// Gradient step, projection; the final iterate is the output.
RunTrace run_ppgd(const ConvexObjective& f, const ConvexBody& body, const Schedule& s,
                  const Vec& u1, long long T, const RunOptions& opts = {});

// Per-step independent samples drive the updates; running-average output.
RunTrace run_raspgd(const StochasticObjective& d, const ConvexBody& body, const Schedule& s,
                    const Vec& u1, long long T, Rng& rng, const RunOptions& opts = {});

// Unprojected steps on the sampled penalized objective evaluated at a
// ball-perturbed point (perturbation off when smooth = false); the output
// is the projection of the final iterate.
RunTrace run_ssgd(const StochasticObjective& d, const ConvexBody& body, const Schedule& s,
                  double eps_sm, const Vec& u1, long long T, bool smooth, Rng& rng,
                  const RunOptions& opts = {});

// ceil(3 G diam / (2 eps^3) + 1)^2 - 1, exponent 2 in the Lipschitz case.
long long required_steps_ssgd(double G, double diam, double eps, bool lipschitz_case);

// ceil((2 G diam + G^2) / (4 eps))^2.
long long required_steps_raspgd(double G, double diam, double eps);

}  // namespace sgdlab
