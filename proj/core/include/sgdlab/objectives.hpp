#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "sgdlab/geometry.hpp"
#include "sgdlab/rng.hpp"
#include "sgdlab/vec.hpp"

namespace sgdlab {

struct Optimum {
  Vec point;     // a minimizer on the associated body
  double value;  // objective value there
};

// A convex objective with a deterministic subgradient selection and a
// certified bound G on the subgradient norms over the working domain.
struct ConvexObjective {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> subgrad;
  double grad_bound = 0.0;                 // G
  std::optional<double> lipschitz_grad;    // L, smooth objectives only
  std::optional<Optimum> optimum;
};

// A seeded sampler of objective draws whose mean objective is known.
struct StochasticObjective {
  std::string name;
  std::function<ConvexObjective(Rng&)> draw;
  ConvexObjective mean;
  double grad_bound = 0.0;  // bound respected by every draw
};

// f(u) = 0.5 * ||u - a||^2. G from body extreme points with a 1% margin,
// L = 1, optimum at project(body, a).
ConvexObjective make_quadratic(const Vec& a, const ConvexBody& body);

// f(u) = sum_i |u_i - a_i|, subgradient sign with 0 at kinks, G = sqrt(N).
// Optimum by coordinatewise clamp on boxes, grid search otherwise.
ConvexObjective make_l1(const Vec& a, const ConvexBody& body);

// Draws f_i(u) = 0.5 * (<x_i, u> - y_i)^2 for a uniform dataset index; the
// mean is the exact dataset average.
StochasticObjective make_finite_dataset_regression(const std::vector<Vec>& X,
                                                   const std::vector<double>& y,
                                                   const ConvexBody& body);

// Draws f_i(u) = N * |u_i - a_i| for a uniform coordinate; the mean is the
// l1 objective. G = N.
StochasticObjective make_stochastic_l1(const Vec& a, const ConvexBody& body);

// h = f + 2G * psi_C, grad_bound 3G; same constrained optimum as f.
ConvexObjective penalized(const ConvexObjective& f, const ConvexBody& body);

// Bounded convex extension: max over a fixed seeded anchor set in the body
// of f(x) + <subgrad f(x), y - x>. G-Lipschitz by construction.
double convex_extension(const ConvexObjective& f_on_body, const ConvexBody& body, int anchors,
                        const Vec& y);

// Grid minimizer over the body (spacing 1e-3 in dim <= 2, 1e-2 in dim 3,
// coarser above); used to cache optima without a closed form.
Optimum grid_minimize(const std::function<double(const Vec&)>& f, const ConvexBody& body);

// Grid minimizer over an explicit box, no membership filter.
Optimum grid_minimize_box(const std::function<double(const Vec&)>& f, const Box& box,
                          double spacing);

}  // namespace sgdlab
