#include "sgdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sgdlab {

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kDykstraTol = 1e-9;
constexpr int kDykstraCap = 10000;

void check_point(const Vec& x, std::size_t dim, const char* what) {
  require_dim(x, dim, what);
  require_finite(x, what);
}

Vec project_box(const Box& b, const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = std::min(std::max(x[i], b.lower[i]), b.upper[i]);
  return y;
}

Vec project_ball(const Ball& b, const Vec& x) {
  Vec d = sub(x, b.center);
  const double r = norm(d);
  if (r <= b.radius) return x;
  return add(scaled(std::move(d), b.radius / r), b.center);
}

// Projection onto {x >= 0, sum(x) <= scale}: clamp to the orthant; if the
// clamp already satisfies the sum constraint we are done, otherwise project
// onto {x >= 0, sum(x) = scale} by sort-and-threshold.
Vec project_simplex(const Simplex& s, const Vec& x) {
  Vec clamped(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    clamped[i] = std::max(x[i], 0.0);
    sum += clamped[i];
  }
  if (sum <= s.scale) return clamped;

  Vec sorted = x;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double cand = (cumsum - s.scale) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= cand) {
      theta = cand;
      break;
    }
  }
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i] - theta, 0.0);
  return y;
}

Vec project_halfspace(const Halfspace& h, const Vec& x) {
  const double viol = dot(h.normal, x) - h.offset;
  if (viol <= 0.0) return x;
  Vec y = x;
  axpy(y, -viol, h.normal);
  return y;
}

// Dykstra's alternating projections over the bounding box and each
// halfspace.
Vec project_hsi(const HalfspaceIntersection& h, const Vec& x) {
  const std::size_t n = x.size();
  const std::size_t nsets = h.constraints.size() + 1;
  std::vector<Vec> increments(nsets, zeros(n));
  Vec y = x;
  for (int sweep = 0; sweep < kDykstraCap; ++sweep) {
    double change = 0.0;
    for (std::size_t k = 0; k < nsets; ++k) {
      Vec z = add(y, increments[k]);
      Vec proj = (k == 0) ? project_box(h.bounding_box, z)
                          : project_halfspace(h.constraints[k - 1], z);
      increments[k] = sub(std::move(z), proj);
      change = std::max(change, dist(proj, y));
      y = std::move(proj);
    }
    if (change <= kDykstraTol * 0.1) break;
  }
  return y;
}

struct FacetNormals {
  std::vector<Vec> active;
};

FacetNormals active_facets(const ConvexBody& body, const Vec& x) {
  FacetNormals out;
  const std::size_t n = body.dim();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          Vec d = sub(x, s.center);
          const double r = norm(d);
          if (std::abs(r - s.radius) <= kBoundaryTol && r > 0.0)
            out.active.push_back(scaled(std::move(d), 1.0 / r));
        } else if constexpr (std::is_same_v<T, Box>) {
          for (std::size_t i = 0; i < n; ++i) {
            if (x[i] >= s.upper[i] - kBoundaryTol) out.active.push_back(unit(n, i));
            if (x[i] <= s.lower[i] + kBoundaryTol) out.active.push_back(scaled(unit(n, i), -1.0));
          }
        } else if constexpr (std::is_same_v<T, Simplex>) {
          double sum = 0.0;
          for (double xi : x) sum += xi;
          if (sum >= s.scale - kBoundaryTol) {
            Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
            out.active.push_back(std::move(v));
          }
          for (std::size_t i = 0; i < n; ++i)
            if (x[i] <= kBoundaryTol) out.active.push_back(scaled(unit(n, i), -1.0));
        } else if constexpr (std::is_same_v<T, HalfspaceIntersection>) {
          for (const Halfspace& hs : s.constraints)
            if (dot(hs.normal, x) >= hs.offset - kBoundaryTol) out.active.push_back(hs.normal);
          for (std::size_t i = 0; i < n; ++i) {
            if (x[i] >= s.bounding_box.upper[i] - kBoundaryTol) out.active.push_back(unit(n, i));
            if (x[i] <= s.bounding_box.lower[i] + kBoundaryTol)
              out.active.push_back(scaled(unit(n, i), -1.0));
          }
        }
      },
      body.shape());
  return out;
}

}  // namespace

ConvexBody::ConvexBody(Ball b) : shape_(std::move(b)), dim_(0) {
  const Ball& s = std::get<Ball>(shape_);
  require_finite(s.center, "Ball center");
  if (!(s.radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
  dim_ = s.center.size();
}

ConvexBody::ConvexBody(Box b) : shape_(std::move(b)), dim_(0) {
  const Box& s = std::get<Box>(shape_);
  require_finite(s.lower, "Box lower");
  require_finite(s.upper, "Box upper");
  if (s.lower.size() != s.upper.size()) throw std::invalid_argument("Box: dimension mismatch");
  for (std::size_t i = 0; i < s.lower.size(); ++i)
    if (s.lower[i] > s.upper[i]) throw std::invalid_argument("Box: lower > upper");
  dim_ = s.lower.size();
}

ConvexBody::ConvexBody(Simplex s) : shape_(s), dim_(static_cast<std::size_t>(s.dim)) {
  if (s.dim < 1) throw std::invalid_argument("Simplex: dim must be positive");
  if (!(s.scale > 0.0)) throw std::invalid_argument("Simplex: scale must be positive");
}

ConvexBody::ConvexBody(HalfspaceIntersection h) : shape_(std::move(h)), dim_(0) {
  const HalfspaceIntersection& s = std::get<HalfspaceIntersection>(shape_);
  dim_ = s.bounding_box.lower.size();
  if (s.bounding_box.upper.size() != dim_)
    throw std::invalid_argument("HalfspaceIntersection: bounding box dimension mismatch");
  for (const Halfspace& hs : s.constraints) {
    if (hs.normal.size() != dim_)
      throw std::invalid_argument("HalfspaceIntersection: constraint dimension mismatch");
    if (std::abs(norm(hs.normal) - 1.0) > 1e-9)
      throw std::invalid_argument("HalfspaceIntersection: normals must be unit vectors");
  }
  check_point(s.interior_point, dim_, "HalfspaceIntersection interior point");
  for (const Halfspace& hs : s.constraints)
    if (dot(hs.normal, s.interior_point) > hs.offset)
      throw std::invalid_argument("HalfspaceIntersection: interior point violates a constraint");
  for (std::size_t i = 0; i < dim_; ++i)
    if (s.interior_point[i] < s.bounding_box.lower[i] ||
        s.interior_point[i] > s.bounding_box.upper[i])
      throw std::invalid_argument("HalfspaceIntersection: interior point outside bounding box");
}

Vec project(const ConvexBody& body, const Vec& x) {
  check_point(x, body.dim(), "project");
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) return project_ball(s, x);
        else if constexpr (std::is_same_v<T, Box>) return project_box(s, x);
        else if constexpr (std::is_same_v<T, Simplex>) return project_simplex(s, x);
        else return project_hsi(s, x);
      },
      body.shape());
}

double distance_to_set(const ConvexBody& body, const Vec& x) {
  return dist(x, project(body, x));
}

bool membership(const ConvexBody& body, const Vec& x, double tol) {
  return distance_to_set(body, x) <= tol;
}

double gauge_value(const ConvexBody& body, const Vec& x) { return distance_to_set(body, x); }

Vec gauge_subgradient(const ConvexBody& body, const Vec& x) {
  Vec p = project(body, x);
  Vec d = sub(x, p);
  const double r = norm(d);
  if (r <= kBoundaryTol) return zeros(body.dim());
  return scaled(std::move(d), 1.0 / r);
}

Vec support_vector(const ConvexBody& body, const Vec& x) {
  check_point(x, body.dim(), "support_vector");
  if (distance_to_set(body, x) > kBoundaryTol)
    throw std::invalid_argument("support_vector: interior or exterior point (exterior)");
  FacetNormals facets = active_facets(body, x);
  if (facets.active.empty())
    throw std::invalid_argument("support_vector: interior or exterior point (interior)");
  Vec v = zeros(body.dim());
  for (const Vec& nrm : facets.active) axpy(v, 1.0 / facets.active.size(), nrm);
  const double r = norm(v);
  if (r <= 1e-12)
    throw std::invalid_argument("support_vector: degenerate facet normals");
  return scaled(std::move(v), 1.0 / r);
}

double local_norm(const ConvexBody& body, const LocalNormQuery& q) {
  check_point(q.p, body.dim(), "local_norm p");
  check_point(q.u, body.dim(), "local_norm u");
  if (!(q.r > 0.0)) throw std::invalid_argument("local_norm: r must be positive");
  if (q.samples < 1) throw std::invalid_argument("local_norm: samples must be >= 1");
  if (!membership(body, q.p, kBoundaryTol))
    throw std::invalid_argument("local_norm: p not in body");

  const double shell = 1e-6 * q.r;
  const double unorm = norm(q.u);
  if (unorm <= 1e-15) return 0.0;

  // Deterministic direction sampling: the estimate is a pure function of
  // the query.
  Rng rng(0x51a7e57ULL);
  struct Cand {
    double val;
    Vec dir;
  };
  std::vector<Cand> best;
  auto consider = [&](const Vec& d) {
    Vec v = q.p;
    axpy(v, q.r, d);
    if (distance_to_set(body, v) > shell) return;
    const double val = std::max(dot(q.u, d), 0.0);
    best.push_back({val, d});
    std::sort(best.begin(), best.end(), [](const Cand& a, const Cand& b) { return a.val > b.val; });
    if (best.size() > 10) best.pop_back();
  };

  for (int i = 0; i < q.samples; ++i) consider(rng.unit_direction(body.dim()));

  if (best.empty()) return 0.0;

  // Ascent refinement: nudge the best directions toward u, rescale to the
  // sphere, keep feasible improvements.
  Vec uhat = scaled(q.u, 1.0 / unorm);
  double result = best.front().val;
  for (const Cand& c : best) {
    Vec d = c.dir;
    double cur = c.val;
    double step = 1.0;
    for (int it = 0; it < 60; ++it) {
      Vec nd = d;
      axpy(nd, step, uhat);
      const double nn = norm(nd);
      if (nn <= 1e-15) {
        step *= 0.5;
        continue;
      }
      nd = scaled(std::move(nd), 1.0 / nn);
      Vec v = q.p;
      axpy(v, q.r, nd);
      const double val = std::max(dot(q.u, nd), 0.0);
      if (val > cur && distance_to_set(body, v) <= shell) {
        d = std::move(nd);
        cur = val;
      } else {
        step *= 0.5;
        if (step < 1e-10) break;
      }
    }
    result = std::max(result, cur);
  }
  // The shell acceptance can overshoot the exact sup by O(shell); never
  // beyond the global bound ||u||.
  return std::min(result, unorm);
}

double diameter(const ConvexBody& body) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) return 2.0 * s.radius;
        else if constexpr (std::is_same_v<T, Box>) return dist(s.upper, s.lower);
        else if constexpr (std::is_same_v<T, Simplex>) return s.scale * std::sqrt(2.0);
        else return dist(s.bounding_box.upper, s.bounding_box.lower);
      },
      body.shape());
}

Box enclosing_box(const ConvexBody& body, double margin) {
  Box out = std::visit(
      [&](const auto& s) -> Box {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          Box b{s.center, s.center};
          for (std::size_t i = 0; i < s.center.size(); ++i) {
            b.lower[i] -= s.radius;
            b.upper[i] += s.radius;
          }
          return b;
        } else if constexpr (std::is_same_v<T, Box>) {
          return s;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          return Box{zeros(static_cast<std::size_t>(s.dim)),
                     Vec(static_cast<std::size_t>(s.dim), s.scale)};
        } else {
          return s.bounding_box;
        }
      },
      body.shape());
  for (std::size_t i = 0; i < out.lower.size(); ++i) {
    out.lower[i] -= margin;
    out.upper[i] += margin;
  }
  return out;
}

Vec sample_point(const ConvexBody& body, Rng& rng) {
  const Box box = enclosing_box(body);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Vec x(body.dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lower[i], box.upper[i]);
    if (membership(body, x, 0.0)) return x;
  }
  Vec x(body.dim());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lower[i], box.upper[i]);
  return project(body, x);
}

Vec sample_boundary_point(const ConvexBody& body, Rng& rng) {
  // Ray-cast from an interior anchor: bisect the largest feasible step along
  // a random direction.
  Vec anchor = std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) return s.center;
        else if constexpr (std::is_same_v<T, Box>) {
          Vec m(s.lower.size());
          for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (s.lower[i] + s.upper[i]);
          return m;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          return Vec(static_cast<std::size_t>(s.dim),
                     s.scale / (2.0 * static_cast<double>(s.dim)));
        } else {
          return s.interior_point;
        }
      },
      body.shape());
  Vec d = rng.unit_direction(body.dim());
  double lo = 0.0, hi = diameter(body) + 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    Vec x = anchor;
    axpy(x, mid, d);
    if (membership(body, x, 0.0)) lo = mid;
    else hi = mid;
  }
  Vec x = anchor;
  axpy(x, lo, d);
  return x;
}

std::vector<Vec> extreme_point_samples(const ConvexBody& body, int budget, Rng& rng) {
  std::vector<Vec> out;
  const std::size_t n = body.dim();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          for (int i = 0; i < budget; ++i) {
            Vec x = s.center;
            axpy(x, s.radius, rng.unit_direction(n));
            out.push_back(std::move(x));
          }
        } else if constexpr (std::is_same_v<T, Box>) {
          if (n <= 12) {
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
              Vec x(n);
              for (std::size_t i = 0; i < n; ++i)
                x[i] = (mask >> i) & 1 ? s.upper[i] : s.lower[i];
              out.push_back(std::move(x));
            }
          } else {
            for (int k = 0; k < budget; ++k) {
              Vec x(n);
              for (std::size_t i = 0; i < n; ++i)
                x[i] = rng.next_u64() & 1 ? s.upper[i] : s.lower[i];
              out.push_back(std::move(x));
            }
          }
        } else if constexpr (std::is_same_v<T, Simplex>) {
          out.push_back(zeros(n));
          for (std::size_t i = 0; i < n; ++i) out.push_back(scaled(unit(n, i), s.scale));
        } else {
          for (int i = 0; i < budget; ++i) out.push_back(sample_boundary_point(body, rng));
        }
      },
      body.shape());
  return out;
}

}  // namespace sgdlab
