#pragma once

#include <utility>

#include "sgdlab/objectives.hpp"
#include "sgdlab/rng.hpp"
#include "sgdlab/vec.hpp"

namespace sgdlab {

// Uniform perturbation on the solid ball B(0, radius).
struct BallNoise {
  int dim;
  double radius;
};

// Gaussian direction normalized, radius scaled by U^(1/dim).
Vec sample_uniform_ball(const BallNoise& noise, Rng& rng);

struct McEstimate {
  double value;
  double std_error;
};

struct McVecEstimate {
  Vec mean;
  double std_error;  // sqrt(trace of the sample covariance / n_mc)
};

// Monte Carlo estimate of the mollified value E f(x - v).
McEstimate mollified_value(const ConvexObjective& f, const BallNoise& noise, const Vec& x,
                           int n_mc, Rng& rng);

// Monte Carlo average of subgrad f(x - v); norm <= G.
McVecEstimate mollified_subgradient(const ConvexObjective& f, const BallNoise& noise, const Vec& x,
                                    int n_mc, Rng& rng);

// Exact uniform-ball mollification of |.| in 1D:
//   value      x^2/(2 eps) + eps/2   for |x| <= eps, |x| outside
//   derivative x/eps clipped to [-1, 1]
std::pair<double, double> smoothed_abs_oracle(double eps, double x);

}  // namespace sgdlab
