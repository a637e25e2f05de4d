#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "sgdlab/rng.hpp"
#include "sgdlab/vec.hpp"

namespace sgdlab {

// Compact convex bodies with exact (or iteratively exact) nearest-point
// projections. All operations are pure; bodies are immutable after
// construction and safe to share across threads.

struct Ball {
  Vec center;
  double radius;
};

struct Box {
  Vec lower;
  Vec upper;
};

// The corner simplex {x >= 0, sum(x) <= scale}. Full-dimensional, with
// vertices at the origin and at scale * e_i; diameter scale * sqrt(2) for
// dim >= 2.
struct Simplex {
  int dim;
  double scale;
};

struct Halfspace {
  Vec normal;  // unit vector
  double offset;  // <normal, x> <= offset
};

// Intersection of halfspaces with a bounding box. The caller supplies a
// certified interior point so nonemptiness is checked at construction.
struct HalfspaceIntersection {
  std::vector<Halfspace> constraints;
  Box bounding_box;
  Vec interior_point;
};

class ConvexBody {
 public:
  using Shape = std::variant<Ball, Box, Simplex, HalfspaceIntersection>;

  explicit ConvexBody(Ball b);
  explicit ConvexBody(Box b);
  explicit ConvexBody(Simplex s);
  explicit ConvexBody(HalfspaceIntersection h);

  std::size_t dim() const { return dim_; }
  const Shape& shape() const { return shape_; }

 private:
  Shape shape_;
  std::size_t dim_;
};

struct LocalNormQuery {
  Vec p;        // point in the body
  Vec u;        // direction
  double r;     // scale, > 0
  int samples;  // direction-sampling budget, >= 1
};

// Nearest point of the body to x. Exact for Ball/Box/Simplex; Dykstra
// alternating projections (cap 1e4 sweeps, tol 1e-9) for
// HalfspaceIntersection.
Vec project(const ConvexBody& body, const Vec& x);

// distance_to_set(x) <= tol
bool membership(const ConvexBody& body, const Vec& x, double tol = 0.0);

// ||x - project(x)||
double distance_to_set(const ConvexBody& body, const Vec& x);

// The penalization gauge psi_C. Equals Euclidean distance to the body: the
// defining supremum of support-plane affine functions is >= dist by taking
// the plane at the projection of x, and <= dist by Cauchy-Schwarz.
double gauge_value(const ConvexBody& body, const Vec& x);

// A subgradient choice for psi_C: zero on the body, the unit outward
// direction (x - project(x)) / dist outside. Norm <= 1 always.
Vec gauge_subgradient(const ConvexBody& body, const Vec& x);

// A unit outward normal-cone element at a boundary point x. At corners,
// tie-break: average of active-facet normals, renormalized. Throws if x is
// interior or exterior (boundary tolerance 1e-9).
Vec support_vector(const ConvexBody& body, const Vec& x);

// Certified lower estimate of the local norm sup_{v in C, |v-p|=r}
// max(<u, v-p>/r, 0). Dense direction sampling on the sphere (accepting a
// shell of relative thickness 1e-6) followed by ascent refinement from the
// best candidates. Returns 0 when no feasible v is found.
double local_norm(const ConvexBody& body, const LocalNormQuery& q);

// Exact for Ball/Box/Simplex; bounding-box diameter (an upper bound) for
// HalfspaceIntersection.
double diameter(const ConvexBody& body);

// --- helpers used by objectives and test harnesses ---

// Axis-aligned box containing the body, inflated by `margin` per side.
Box enclosing_box(const ConvexBody& body, double margin = 0.0);

// A member point; uniform-ish (rejection from the enclosing box with a
// projection fallback).
Vec sample_point(const ConvexBody& body, Rng& rng);

// A boundary point, by ray-casting from an interior anchor.
Vec sample_boundary_point(const ConvexBody& body, Rng& rng);

// Extreme-point samples: exact vertex sets where enumerable (Box with
// dim <= 12, Simplex), sampled boundary points otherwise.
std::vector<Vec> extreme_point_samples(const ConvexBody& body, int budget, Rng& rng);

}  // namespace sgdlab
