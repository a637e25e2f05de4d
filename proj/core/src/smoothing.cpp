#include "sgdlab/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdlab {

Vec sample_uniform_ball(const BallNoise& noise, Rng& rng) {
  if (!(noise.radius > 0.0)) throw std::invalid_argument("sample_uniform_ball: radius must be positive");
  if (noise.dim < 1) throw std::invalid_argument("sample_uniform_ball: dim must be positive");
  Vec d = rng.unit_direction(static_cast<std::size_t>(noise.dim));
  const double u = rng.uniform();
  const double r = noise.radius * std::pow(u, 1.0 / static_cast<double>(noise.dim));
  return scaled(std::move(d), r);
}

McEstimate mollified_value(const ConvexObjective& f, const BallNoise& noise, const Vec& x,
                           int n_mc, Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("mollified_value: n_mc must be >= 1");
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n_mc; ++i) {
    Vec v = sample_uniform_ball(noise, rng);
    const double val = f.value(sub(x, v));
    sum += val;
    sumsq += val * val;
  }
  const double mean = sum / n_mc;
  const double var = std::max(0.0, sumsq / n_mc - mean * mean);
  return {mean, std::sqrt(var / n_mc)};
}

McVecEstimate mollified_subgradient(const ConvexObjective& f, const BallNoise& noise, const Vec& x,
                                    int n_mc, Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("mollified_subgradient: n_mc must be >= 1");
  Vec mean = zeros(x.size());
  double sumsq = 0.0;
  std::vector<Vec> draws;
  draws.reserve(static_cast<std::size_t>(n_mc));
  for (int i = 0; i < n_mc; ++i) {
    Vec v = sample_uniform_ball(noise, rng);
    Vec g = f.subgrad(sub(x, v));
    axpy(mean, 1.0 / n_mc, g);
    draws.push_back(std::move(g));
  }
  for (const Vec& g : draws) sumsq += dot(sub(g, mean), sub(g, mean));
  const double var = sumsq / n_mc;
  return {std::move(mean), std::sqrt(var / n_mc)};
}

std::pair<double, double> smoothed_abs_oracle(double eps, double x) {
  if (!(eps > 0.0)) throw std::invalid_argument("smoothed_abs_oracle: eps must be positive");
  if (std::abs(x) <= eps) return {x * x / (2.0 * eps) + eps / 2.0, x / eps};
  return {std::abs(x), x > 0.0 ? 1.0 : -1.0};
}

}  // namespace sgdlab
