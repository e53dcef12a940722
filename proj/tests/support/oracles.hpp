#pragma once

// Reference computations for tests. Everything here is written from the
// definitions with the most direct (slow) method and shares no code path with
// the library beyond the graph container and exp_map (used only to move
// along geodesics for finite differences).

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "hyperwalk/graph.hpp"
#include "hyperwalk/lorentz.hpp"

namespace oracle {

using hyperwalk::NodeIndex;
using Vec = std::vector<double>;

inline double minkowski(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += x[i] * y[i];
  return s - x.back() * y.back();
}

inline double distance(const Vec& x, const Vec& y) {
  return std::acosh(std::max(1.0, -minkowski(x, y)));
}

// Random point: Gaussian spatial part scaled by `spread`, lifted to the sheet.
inline Vec random_point(std::mt19937_64& rng, std::size_t n, double spread) {
  std::normal_distribution<double> normal(0.0, spread);
  Vec x(n + 1);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = normal(rng);
    s += x[i] * x[i];
  }
  x[n] = std::sqrt(1.0 + s);
  return x;
}

// Random tangent vector at x with Minkowski norm `norm`.
inline Vec random_tangent(std::mt19937_64& rng, const Vec& x, double norm) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec u(x.size());
  for (double& c : u) c = normal(rng);
  const double c = minkowski(u, x);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += c * x[i];
  const double len = std::sqrt(minkowski(u, u));
  for (double& v : u) v *= norm / len;
  return u;
}

// Softmax loss over squared distances, written out directly.
inline double pair_loss(const Vec& u, const Vec& v, const std::vector<Vec>& negs) {
  double denom = std::exp(-std::pow(distance(u, v), 2));
  for (const auto& w : negs) denom += std::exp(-std::pow(distance(u, w), 2));
  return -std::log(std::exp(-std::pow(distance(u, v), 2)) / denom);
}

// Per-neighbor transition probabilities from a raw edge scan:
// weight(w) = exp(-N_type(w)) / #{neighbors of current with type(w)}.
inline std::map<NodeIndex, double> transition(const hyperwalk::TypedGraph& g, NodeIndex current,
                                              const std::vector<std::size_t>& counts) {
  std::vector<NodeIndex> nbrs;
  for (const auto& e : g.edges()) {
    if (e.u == current) nbrs.push_back(e.v);
    if (e.v == current) nbrs.push_back(e.u);
  }
  std::map<NodeIndex, double> weight;
  double total = 0.0;
  for (NodeIndex w : nbrs) {
    std::size_t same = 0;
    for (NodeIndex x : nbrs) same += g.type_of(x) == g.type_of(w);
    const double wt = std::exp(-static_cast<double>(counts[g.type_of(w)])) / static_cast<double>(same);
    weight[w] = wt;
    total += wt;
  }
  for (auto& [node, p] : weight) p /= total;
  return weight;
}

inline double auc(std::span<const double> pos, std::span<const double> neg) {
  double wins = 0.0;
  for (double p : pos)
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  std::size_t count() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) c += find(i) == i;
    return c;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::size_t component_count(std::size_t n, std::span<const hyperwalk::Edge> edges) {
  UnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.u, e.v);
  return uf.count();
}

// Geodesic central difference of f at x along tangent direction v.
template <typename F>
double geodesic_derivative(F&& f, const Vec& x, const Vec& v, double eps = 1e-5) {
  Vec plus(v.size()), minus(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    plus[i] = eps * v[i];
    minus[i] = -eps * v[i];
  }
  const Vec xp = hyperwalk::lorentz::exp_map(x, plus);
  const Vec xm = hyperwalk::lorentz::exp_map(x, minus);
  return (f(xp) - f(xm)) / (2.0 * eps);
}

// Minkowski-orthonormal tangent basis at x via Gram-Schmidt on projected axes.
inline std::vector<Vec> tangent_basis(const Vec& x) {
  std::vector<Vec> basis;
  const std::size_t n = x.size() - 1;
  for (std::size_t k = 0; k < n; ++k) {
    Vec e(n + 1, 0.0);
    e[k] = 1.0;
    const double c = minkowski(e, x);
    for (std::size_t i = 0; i <= n; ++i) e[i] += c * x[i];
    for (const auto& b : basis) {
      const double d = minkowski(e, b);
      for (std::size_t i = 0; i <= n; ++i) e[i] -= d * b[i];
    }
    const double len = std::sqrt(minkowski(e, e));
    for (double& v : e) v /= len;
    basis.push_back(e);
  }
  return basis;
}

}  // namespace oracle
