#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgdlab {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Vec add(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec sub(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vec scaled(Vec a, double c) {
  for (double& x : a) x *= c;
  return a;
}

// a += c * b
inline void axpy(Vec& a, double c, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

inline Vec unit(std::size_t n, std::size_t i) {
  Vec e(n, 0.0);
  e[i] = 1.0;
  return e;
}

inline bool all_finite(const Vec& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void require_finite(const Vec& a, const char* what) {
  if (!all_finite(a)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

inline void require_dim(const Vec& a, std::size_t n, const char* what) {
  if (a.size() != n)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(a.size()) + ", want " + std::to_string(n) + ")");
}

}  // namespace sgdlab
