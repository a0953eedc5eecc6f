#pragma once

#include <cmath>
#include <vector>

#include "gnnkit/gnnkit.hpp"

namespace gnnkit::testing {

inline Graph five_vertex_graph() { return build_graph(5, {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 4}}); }

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return build_graph(n, e);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return build_graph(leaves + 1, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return build_graph(n, e);
}

/// Random spanning tree plus Bernoulli(p) extra edges: always connected.
inline Graph random_connected_graph(std::size_t n, double p, Rng& rng, GraphOptions opt = {}) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(rng.below(i), i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) e.emplace_back(i, j);
  return build_graph(n, e, std::move(opt));
}

/// Erdos-Renyi graph; may be disconnected or have isolated vertices.
inline Graph random_graph(std::size_t n, double p, Rng& rng, GraphOptions opt = {}) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) e.emplace_back(i, j);
  return build_graph(n, e, std::move(opt));
}

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  DenseMatrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

inline Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng, bool grad = false) {
  return Tensor::from_matrix(random_matrix(r, c, rng), grad);
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  rng.shuffle(p);
  return p;
}

/// Plain triple loop, independent of the library's product.
inline DenseMatrix naive_product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

/// Rows of m reordered so row i moves to perm[i].
inline DenseMatrix permute_rows(const DenseMatrix& m, const std::vector<std::size_t>& perm) {
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(perm[i], j) = m(i, j);
  return out;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace gnnkit::testing
