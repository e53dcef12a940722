#pragma once

// Hyperboloid model of hyperbolic space with curvature -1.
//
// A point of H^n is stored as n+1 ambient coordinates with the time-like
// coordinate last: <x,x>_L = -1 and x[n] > 0. Functions take spans so they
// work on both owned points and rows of an embedding table.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hyperwalk/error.hpp"

namespace hyperwalk::lorentz {

using Vector = std::vector<double>;

class DegenerateGradient : public Error {
 public:
  DegenerateGradient() : Error("distance gradient undefined for coincident points") {}
};

namespace detail {
inline void check_same_size(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()));
  if (x.size() < 2) throw Error("ambient dimension must be at least 2");
}
}  // namespace detail

/// <x,y>_L = sum_{i<n} x_i y_i - x_n y_n.
inline double minkowski_inner(std::span<const double> x, std::span<const double> y) {
  detail::check_same_size(x, y);
  const std::size_t n = x.size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s - x[n] * y[n];
}

// Minkowski norm of a tangent vector; clamps tiny negative round-off to zero.
inline double tangent_norm(std::span<const double> u) {
  return std::sqrt(std::max(0.0, minkowski_inner(u, u)));
}

/// arccosh for a >= 1 (clamped), written to avoid overflow of a*a - 1.
inline double arccosh(double a) {
  a = std::max(a, 1.0);
  return std::log(a + std::sqrt(a - 1.0) * std::sqrt(a + 1.0));
}

/// arccosh(1 + delta) without forming 1 + delta.
inline double arccosh1p(double delta) {
  delta = std::max(delta, 0.0);
  return std::log1p(delta + std::sqrt(delta) * std::sqrt(delta + 2.0));
}

/// Geodesic distance arccosh(-<x,y>_L). Nearby points go through the
/// equivalent chord form 2 asinh(|x-y|_L / 2), which keeps full relative
/// precision where -<x,y> is within rounding of 1.
inline double distance(std::span<const double> x, std::span<const double> y) {
  const double a = -minkowski_inner(x, y);
  if (a >= 2.0) return arccosh(a);
  const std::size_t n = x.size() - 1;
  double chord = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    chord += d * d;
  }
  const double dt = x[n] - y[n];
  chord -= dt * dt;
  return 2.0 * std::asinh(0.5 * std::sqrt(std::max(chord, 0.0)));
}

/// Ambient gradient of d(x, y) in x: -y / sqrt(<x,y>^2 - 1).
/// Throws DegenerateGradient when x and y (nearly) coincide.
inline Vector ambient_distance_gradient(std::span<const double> x, std::span<const double> y) {
  detail::check_same_size(x, y);
  const double s = std::sinh(distance(x, y));
  if (s * s < 1e-18) throw DegenerateGradient();
  Vector g(y.begin(), y.end());
  for (double& v : g) v = -v / s;
  return g;
}

/// Pi_x(u) = u + <u,x>_L x, written into out (may alias u).
inline void project_to_tangent(std::span<const double> x, std::span<const double> u,
                               std::span<double> out) {
  const double c = minkowski_inner(u, x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = u[i] + c * x[i];
}

inline Vector project_to_tangent(std::span<const double> x, std::span<const double> u) {
  Vector out(x.size());
  project_to_tangent(x, u, out);
  return out;
}

/// Converts Euclidean partial derivatives at x into the Riemannian gradient:
/// raise the index with the Minkowski metric (flip the time sign), then
/// project onto T_x.
inline void riemannian_gradient(std::span<const double> x, std::span<const double> euclidean_grad,
                                std::span<double> out) {
  detail::check_same_size(x, euclidean_grad);
  const std::size_t n = x.size() - 1;
  for (std::size_t i = 0; i < n; ++i) out[i] = euclidean_grad[i];
  out[n] = -euclidean_grad[n];
  project_to_tangent(x, std::span<const double>(out.data(), out.size()), out);
}

inline Vector riemannian_gradient(std::span<const double> x, std::span<const double> euclidean_grad) {
  Vector out(x.size());
  riemannian_gradient(x, euclidean_grad, out);
  return out;
}

// Sets the time coordinate from the spatial ones, restoring <x,x>_L = -1.
inline void renormalize(std::span<double> x) {
  const std::size_t n = x.size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  x[n] = std::sqrt(1.0 + s);
}

inline bool is_tangent(std::span<const double> x, std::span<const double> u, double tol = 1e-9) {
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) scale += std::abs(u[i] * x[i]);
  return std::abs(minkowski_inner(u, x)) <= tol * (1.0 + scale);
}

inline bool on_manifold(std::span<const double> x, double tol = 1e-9) {
  return x.size() >= 2 && x.back() > 0.0 && std::abs(minkowski_inner(x, x) + 1.0) <= tol;
}

/// exp_x(u) = cosh(|u|) x + sinh(|u|) u/|u|, first-order series below |u| < 1e-8.
/// out may alias x.
inline void exp_map(std::span<const double> x, std::span<const double> u, std::span<double> out) {
  detail::check_same_size(x, u);
  if (!is_tangent(x, u)) throw Error("exp_map: vector is not tangent at the base point");
  const double norm = tangent_norm(u);
  if (norm < 1e-8) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + u[i];
    return;
  }
  const double c = std::cosh(norm);
  const double s = std::sinh(norm) / norm;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i] + s * u[i];
}

inline Vector exp_map(std::span<const double> x, std::span<const double> u) {
  Vector out(x.size());
  exp_map(x, u, out);
  return out;
}

/// Stereographic image in the Poincare ball: p_i = x_i / (1 + x_n).
inline Vector to_poincare(std::span<const double> x) {
  const std::size_t n = x.size() - 1;
  Vector p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = x[i] / (1.0 + x[n]);
  return p;
}

/// Poincare-ball distance arccosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2))).
inline double poincare_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("poincare_distance: dimension mismatch");
  double uu = 0.0, vv = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uu += u[i] * u[i];
    vv += v[i] * v[i];
    diff += (u[i] - v[i]) * (u[i] - v[i]);
  }
  if (uu >= 1.0 || vv >= 1.0) throw Error("poincare_distance: point outside the unit ball");
  return arccosh1p(2.0 * diff / ((1.0 - uu) * (1.0 - vv)));
}

/// Owned point on H^n.
class LorentzPoint {
 public:
  static LorentzPoint origin(std::size_t n) {
    Vector c(n + 1, 0.0);
    c[n] = 1.0;
    return LorentzPoint(std::move(c));
  }

  /// Lifts spatial coordinates onto the upper sheet.
  static LorentzPoint from_spatial(std::span<const double> spatial) {
    Vector c(spatial.begin(), spatial.end());
    c.push_back(0.0);
    renormalize(c);
    return LorentzPoint(std::move(c));
  }

  /// Adopts ambient coordinates; throws if they are not on the manifold.
  static LorentzPoint from_ambient(Vector coords, double tol = 1e-9) {
    if (!on_manifold(coords, tol)) throw Error("coordinates are not on the hyperboloid");
    return LorentzPoint(std::move(coords));
  }

  std::size_t dim() const noexcept { return coords_.size() - 1; }
  std::span<const double> coords() const noexcept { return coords_; }
  operator std::span<const double>() const noexcept { return coords_; }

 private:
  explicit LorentzPoint(Vector coords) : coords_(std::move(coords)) {}
  Vector coords_;
};

/// Minkowski-orthonormal basis of T_x (n vectors), by Gram-Schmidt on the
/// projected spatial axes.
inline std::vector<Vector> tangent_basis(std::span<const double> x) {
  const std::size_t n = x.size() - 1;
  std::vector<Vector> basis;
  for (std::size_t k = 0; k < n; ++k) {
    Vector e(n + 1, 0.0);
    e[k] = 1.0;
    Vector v = project_to_tangent(x, e);
    for (const auto& b : basis) {
      const double c = minkowski_inner(v, b);
      for (std::size_t i = 0; i <= n; ++i) v[i] -= c * b[i];
    }
    const double norm = tangent_norm(v);
    for (double& c : v) c /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace hyperwalk::lorentz
