#include "sgdlab/objectives.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace sgdlab {

namespace {

constexpr double kGradBoundMargin = 1.01;

double sup_over_samples(const std::vector<Vec>& pts, const std::function<double(const Vec&)>& f) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& p : pts) best = std::max(best, f(p));
  return best;
}

// Van der Corput radical inverse; bases 2,3,5,... per coordinate give a
// Halton sequence for the extension anchors.
double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double x = 0.0;
  while (i > 0) {
    x += static_cast<double>(i % base) * f;
    i /= base;
    f *= inv;
  }
  return x;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                                     53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
                                     109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167,
                                     173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
                                     233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283,
                                     293, 307, 311};

double grid_spacing_for_dim(std::size_t n) {
  if (n <= 2) return 1e-3;
  if (n == 3) return 1e-2;
  return 5e-2;
}

// Solve A w = b by Gaussian elimination with partial pivoting; empty on
// (near-)singular systems.
std::optional<Vec> solve_dense(std::vector<Vec> A, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-12) return std::nullopt;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= m * A[col][c];
      b[r] -= m * b[col];
    }
  }
  Vec w(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * w[c];
    w[i] = s / A[i][i];
  }
  return w;
}

}  // namespace

Optimum grid_minimize_box(const std::function<double(const Vec&)>& f, const Box& box,
                          double spacing) {
  const std::size_t n = box.lower.size();
  std::vector<std::size_t> counts(n);
  for (std::size_t i = 0; i < n; ++i)
    counts[i] = static_cast<std::size_t>(std::floor((box.upper[i] - box.lower[i]) / spacing)) + 1;

  Vec x = box.lower;
  std::vector<std::size_t> idx(n, 0);
  Optimum best{box.lower, std::numeric_limits<double>::infinity()};
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) x[i] = box.lower[i] + spacing * static_cast<double>(idx[i]);
    const double v = f(x);
    if (v < best.value) best = {x, v};
    std::size_t k = 0;
    while (k < n && ++idx[k] >= counts[k]) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

Optimum grid_minimize(const std::function<double(const Vec&)>& f, const ConvexBody& body) {
  const Box box = enclosing_box(body);
  // Spacing is relative to the body scale: unit-scale bodies keep the
  // nominal per-dim spacing, large bodies coarsen proportionally so the
  // grid stays bounded.
  double extent = 0.0;
  for (std::size_t i = 0; i < box.lower.size(); ++i)
    extent = std::max(extent, box.upper[i] - box.lower[i]);
  const double spacing = grid_spacing_for_dim(body.dim()) * std::max(1.0, 0.5 * extent);
  // Evaluate on projected grid points so the reported minimizer is a member.
  auto fp = [&](const Vec& x) { return f(project(body, x)); };
  Optimum coarse = grid_minimize_box(fp, box, spacing);
  Vec p = project(body, coarse.point);
  return {p, f(p)};
}

ConvexObjective make_quadratic(const Vec& a, const ConvexBody& body) {
  require_finite(a, "make_quadratic a");
  require_dim(a, body.dim(), "make_quadratic a");
  ConvexObjective f;
  f.name = "quadratic";
  Rng grng(0xa11ceULL);
  auto pts = extreme_point_samples(body, 512, grng);
  const double R =
      kGradBoundMargin * sup_over_samples(pts, [&](const Vec& u) { return dist(u, a); });
  // Huberized beyond radius R: agrees with 0.5 ||u-a||^2 wherever ||u-a|| <= R
  // (in particular on the body) and continues linearly outside, which keeps
  // the gradient norm globally <= R. This is the bounded convex extension
  // unprojected algorithms need when iterates step outside the body.
  f.value = [a, R](const Vec& u) {
    const double r = dist(u, a);
    return r <= R ? 0.5 * r * r : R * r - 0.5 * R * R;
  };
  f.subgrad = [a, R](const Vec& u) {
    Vec g = sub(u, a);
    const double r = norm(g);
    if (r > R) g = scaled(std::move(g), R / r);
    return g;
  };
  f.lipschitz_grad = 1.0;
  f.grad_bound = R;
  Vec p = project(body, a);
  f.optimum = Optimum{p, f.value(p)};
  return f;
}

ConvexObjective make_l1(const Vec& a, const ConvexBody& body) {
  require_finite(a, "make_l1 a");
  require_dim(a, body.dim(), "make_l1 a");
  ConvexObjective f;
  f.name = "l1";
  f.value = [a](const Vec& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - a[i]);
    return s;
  };
  // subgradient 0 at kinks: a valid, deterministic selection
  f.subgrad = [a](const Vec& u) {
    Vec g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double d = u[i] - a[i];
      g[i] = (d > 0.0) ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
    return g;
  };
  f.grad_bound = std::sqrt(static_cast<double>(a.size()));
  if (const Box* box = std::get_if<Box>(&body.shape())) {
    Vec p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      p[i] = std::min(std::max(a[i], box->lower[i]), box->upper[i]);
    f.optimum = Optimum{p, f.value(p)};
  } else {
    f.optimum = grid_minimize(f.value, body);
  }
  return f;
}

StochasticObjective make_finite_dataset_regression(const std::vector<Vec>& X,
                                                   const std::vector<double>& y,
                                                   const ConvexBody& body) {
  if (X.empty() || X.size() != y.size())
    throw std::invalid_argument("make_finite_dataset_regression: empty or mismatched dataset");
  const std::size_t n = body.dim();
  for (const Vec& row : X) require_dim(row, n, "make_finite_dataset_regression row");

  // Per-row residual caps: each draw is Huberized beyond the largest
  // residual the row can attain on the body (1% margin), so draw gradients
  // are globally bounded and still exact on the body.
  Rng cap_rng(0xca9f00dULL);
  auto cap_pts = extreme_point_samples(body, 512, cap_rng);
  std::vector<double> caps(X.size());
  for (std::size_t i = 0; i < X.size(); ++i)
    caps[i] = kGradBoundMargin * sup_over_samples(cap_pts, [&](const Vec& u) {
                return std::abs(dot(X[i], u) - y[i]);
              });

  auto row_objective = [X, y, caps](std::size_t i) {
    ConvexObjective fi;
    fi.name = "dataset_regression[" + std::to_string(i) + "]";
    const Vec xi = X[i];
    const double yi = y[i];
    const double R = caps[i];
    fi.value = [xi, yi, R](const Vec& u) {
      const double r = std::abs(dot(xi, u) - yi);
      return r <= R ? 0.5 * r * r : R * r - 0.5 * R * R;
    };
    fi.subgrad = [xi, yi, R](const Vec& u) {
      const double r = dot(xi, u) - yi;
      return scaled(xi, std::min(std::max(r, -R), R));
    };
    fi.lipschitz_grad = dot(xi, xi);
    fi.grad_bound = norm(xi) * R;
    return fi;
  };

  StochasticObjective d;
  d.name = "dataset_regression";
  const std::size_t count = X.size();
  d.draw = [row_objective, count](Rng& rng) {
    return row_objective(static_cast<std::size_t>(rng.uniform_below(count)));
  };

  // Mean = exact average of the (Huberized) rows, so E[f_t] = f holds
  // globally, not only on the body.
  d.mean.name = "dataset_regression_mean";
  d.mean.value = [X, y, caps, count](const Vec& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double r = std::abs(dot(X[i], u) - y[i]);
      const double R = caps[i];
      s += r <= R ? 0.5 * r * r : R * r - 0.5 * R * R;
    }
    return s / static_cast<double>(count);
  };
  d.mean.subgrad = [X, y, caps, count](const Vec& u) {
    Vec g = zeros(u.size());
    for (std::size_t i = 0; i < count; ++i) {
      const double r = dot(X[i], u) - y[i];
      const double R = caps[i];
      axpy(g, std::min(std::max(r, -R), R) / static_cast<double>(count), X[i]);
    }
    return g;
  };
  double lip = 0.0;
  for (const Vec& row : X) lip += dot(row, row);
  d.mean.lipschitz_grad = lip / static_cast<double>(X.size());

  // G: worst draw subgradient norm (Huber-capped, exact).
  double g = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) g = std::max(g, norm(X[i]) * caps[i]);
  d.grad_bound = g;
  d.mean.grad_bound = g;

  // Closed-form least squares on the normal equations; fall back to (and in
  // low dims verify with) the grid oracle when unconstrained optimum is
  // infeasible or the system is singular.
  std::vector<Vec> A(n, zeros(n));
  Vec b = zeros(n);
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      b[r] += X[i][r] * y[i];
      for (std::size_t c = 0; c < n; ++c) A[r][c] += X[i][r] * X[i][c];
    }
  }
  std::optional<Vec> w = solve_dense(A, b);
  if (w && membership(body, *w, 1e-9)) {
    d.mean.optimum = Optimum{*w, d.mean.value(*w)};
  } else {
    Optimum o = grid_minimize(d.mean.value, body);
    if (w) {
      // Polish: projected closed-form point may beat the grid.
      Vec pw = project(body, *w);
      if (d.mean.value(pw) < o.value) o = {pw, d.mean.value(pw)};
    }
    d.mean.optimum = o;
  }
  return d;
}

StochasticObjective make_stochastic_l1(const Vec& a, const ConvexBody& body) {
  require_finite(a, "make_stochastic_l1 a");
  require_dim(a, body.dim(), "make_stochastic_l1 a");
  const std::size_t n = a.size();
  const double N = static_cast<double>(n);

  StochasticObjective d;
  d.name = "stochastic_l1";
  d.draw = [a, n, N](Rng& rng) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform_below(n));
    ConvexObjective fi;
    fi.name = "stochastic_l1[" + std::to_string(i) + "]";
    const double ai = a[i];
    fi.value = [i, ai, N](const Vec& u) { return N * std::abs(u[i] - ai); };
    fi.subgrad = [i, ai, N](const Vec& u) {
      Vec g = zeros(u.size());
      const double di = u[i] - ai;
      g[i] = (di > 0.0) ? N : (di < 0.0 ? -N : 0.0);
      return g;
    };
    fi.grad_bound = N;
    return fi;
  };
  d.mean = make_l1(a, body);
  d.grad_bound = N;
  d.mean.grad_bound = N;  // every draw is bounded by N; so is the mean
  return d;
}

ConvexObjective penalized(const ConvexObjective& f, const ConvexBody& body) {
  if (!std::isfinite(f.grad_bound))
    throw std::invalid_argument("penalized: grad_bound must be finite");
  const double G = f.grad_bound;
  ConvexObjective h;
  h.name = f.name + "+penalty";
  auto fv = f.value;
  auto fg = f.subgrad;
  // Copy the body by value so the penalized objective owns its geometry.
  ConvexBody b = body;
  h.value = [fv, b, G](const Vec& x) { return fv(x) + 2.0 * G * gauge_value(b, x); };
  h.subgrad = [fg, b, G](const Vec& x) {
    Vec g = fg(x);
    axpy(g, 2.0 * G, gauge_subgradient(b, x));
    return g;
  };
  h.grad_bound = 3.0 * G;
  h.optimum = f.optimum;
  return h;
}

double convex_extension(const ConvexObjective& f, const ConvexBody& body, int anchors,
                        const Vec& y) {
  if (anchors < 1) throw std::invalid_argument("convex_extension: anchors must be >= 1");
  const Box box = enclosing_box(body);
  const std::size_t n = body.dim();
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < anchors; ++k) {
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = radical_inverse(static_cast<std::uint64_t>(k + 1), kPrimes[i % 64]);
      x[i] = box.lower[i] + t * (box.upper[i] - box.lower[i]);
    }
    x = project(body, x);
    const double a = f.value(x) + dot(f.subgrad(x), sub(y, x));
    best = std::max(best, a);
  }
  return best;
}

}  // namespace sgdlab
