#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnnkit/error.hpp"
#include "gnnkit/matrix.hpp"

namespace gnnkit {

using Edge = std::pair<std::size_t, std::size_t>;

enum class LaplacianKind { unnormalized, symmetric, random_walk };

/// Optional attributes accepted by build_graph.
struct GraphOptions {
  std::optional<DenseMatrix> vertex_features;  // N x F
  std::optional<DenseMatrix> edge_features;    // one row per input edge
  std::optional<std::vector<double>> weights;  // one per input edge, > 0
  bool directed = false;
  /// Count self-loops in the degree (and hence the Laplacian).
  bool self_loops_in_degree = false;
};

/// Immutable vertex/edge structure.
///
/// Undirected edges are stored once as (i, j) with i <= j, sorted
/// lexicographically. Directed edges keep their orientation and are sorted
/// the same way. Edge features and weights follow the stored edge order.
class Graph {
 public:
  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool directed() const noexcept { return directed_; }
  bool self_loops_in_degree() const noexcept { return self_loops_in_degree_; }

  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_vertex_features() const noexcept { return vertex_features_.has_value(); }
  bool has_edge_features() const noexcept { return edge_features_.has_value(); }
  bool weighted() const noexcept { return weights_.has_value(); }

  const std::optional<DenseMatrix>& vertex_features() const noexcept { return vertex_features_; }
  const std::optional<DenseMatrix>& edge_features() const noexcept { return edge_features_; }
  const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }

  std::size_t vertex_feature_dim() const { return vertex_features_ ? vertex_features_->cols() : 0; }
  std::size_t edge_feature_dim() const { return edge_features_ ? edge_features_->cols() : 0; }

  double weight(std::size_t e) const { return weights_ ? (*weights_)[e] : 1.0; }

  /// Sorted neighbor set of vertex i (out-neighbors for directed graphs).
  const std::vector<std::size_t>& neighbors(std::size_t i) const {
    check_vertex(i);
    return out_[i];
  }
  const std::vector<std::size_t>& out_neighbors(std::size_t i) const { return neighbors(i); }
  const std::vector<std::size_t>& in_neighbors(std::size_t i) const {
    check_vertex(i);
    return in_[i];
  }

  /// Stored edge index for each (i, neighbors(i)[k]) pair.
  const std::vector<std::size_t>& incident_edges(std::size_t i) const {
    check_vertex(i);
    return out_edge_[i];
  }

  bool has_edge(std::size_t i, std::size_t j) const {
    check_vertex(i);
    check_vertex(j);
    return std::binary_search(out_[i].begin(), out_[i].end(), j);
  }

  friend Graph build_graph(std::size_t n, const std::vector<Edge>& edges, GraphOptions options);

 private:
  void check_vertex(std::size_t i) const {
    if (i >= n_) {
      throw GraphError("vertex index " + std::to_string(i) + " out of range [0, " + std::to_string(n_) + ")", i);
    }
  }

  std::size_t n_ = 0;
  bool directed_ = false;
  bool self_loops_in_degree_ = false;
  std::vector<Edge> edges_;
  std::optional<DenseMatrix> vertex_features_;
  std::optional<DenseMatrix> edge_features_;
  std::optional<std::vector<double>> weights_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_edge_;
};

/// Validates and canonicalizes a graph. For undirected graphs, (i, j) and
/// (j, i) collapse to one edge; the first occurrence keeps its features and
/// weight.
inline Graph build_graph(std::size_t n, const std::vector<Edge>& edges, GraphOptions options = {}) {
  if (n == 0) throw GraphError("graph must have at least one vertex");
  if (options.vertex_features && options.vertex_features->rows() != n) {
    throw GraphError("vertex feature rows " + std::to_string(options.vertex_features->rows()) +
                         " != vertex count " + std::to_string(n),
                     options.vertex_features->rows());
  }
  if (options.edge_features && options.edge_features->rows() != edges.size()) {
    throw GraphError("edge feature rows " + std::to_string(options.edge_features->rows()) +
                         " != edge count " + std::to_string(edges.size()),
                     options.edge_features->rows());
  }
  if (options.weights) {
    if (options.weights->size() != edges.size()) {
      throw GraphError("weight count " + std::to_string(options.weights->size()) + " != edge count " +
                           std::to_string(edges.size()),
                       options.weights->size());
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const double w = (*options.weights)[e];
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw GraphError("edge " + std::to_string(e) + " has non-positive weight", e);
      }
    }
  }
  if (options.vertex_features && !options.vertex_features->all_finite()) {
    throw GraphError("vertex features contain non-finite values");
  }
  if (options.edge_features && !options.edge_features->all_finite()) {
    throw GraphError("edge features contain non-finite values");
  }

  // canonical edge -> first input position
  std::map<Edge, std::size_t> first;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    if (u >= n || v >= n) {
      throw GraphError("edge " + std::to_string(e) + " endpoint out of range [0, " + std::to_string(n) + ")", e);
    }
    if (!options.directed && u > v) std::swap(u, v);
    first.emplace(Edge{u, v}, e);
  }

  Graph g;
  g.n_ = n;
  g.directed_ = options.directed;
  g.self_loops_in_degree_ = options.self_loops_in_degree;
  g.vertex_features_ = std::move(options.vertex_features);
  g.edges_.reserve(first.size());
  std::vector<std::size_t> source_row;
  source_row.reserve(first.size());
  for (const auto& [edge, pos] : first) {
    g.edges_.push_back(edge);
    source_row.push_back(pos);
  }
  if (options.edge_features) {
    DenseMatrix ef(g.edges_.size(), options.edge_features->cols());
    for (std::size_t e = 0; e < source_row.size(); ++e) {
      auto src = options.edge_features->row(source_row[e]);
      std::copy(src.begin(), src.end(), ef.row(e).begin());
    }
    g.edge_features_ = std::move(ef);
  }
  if (options.weights) {
    std::vector<double> w(g.edges_.size());
    for (std::size_t e = 0; e < source_row.size(); ++e) w[e] = (*options.weights)[source_row[e]];
    g.weights_ = std::move(w);
  }

  g.out_.assign(n, {});
  g.in_.assign(n, {});
  g.out_edge_.assign(n, {});
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    const auto [u, v] = g.edges_[e];
    adj[u].emplace_back(v, e);
    g.in_[v].push_back(u);
    if (!g.directed_ && u != v) {
      adj[v].emplace_back(u, e);
      g.in_[u].push_back(v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    for (const auto& [j, e] : adj[i]) {
      g.out_[i].push_back(j);
      g.out_edge_[i].push_back(e);
    }
    std::sort(g.in_[i].begin(), g.in_[i].end());
  }
  return g;
}

/// Same structure and attributes with vertex i renamed to perm[i].
inline Graph permute(const Graph& g, const std::vector<std::size_t>& perm) {
  const std::size_t n = g.num_vertices();
  if (perm.size() != n) throw GraphError("permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw GraphError("not a permutation", p);
    seen[p] = true;
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  GraphOptions opt;
  opt.directed = g.directed();
  opt.self_loops_in_degree = g.self_loops_in_degree();
  if (g.vertex_features()) {
    const auto& x = *g.vertex_features();
    DenseMatrix px(n, x.cols());
    for (std::size_t i = 0; i < n; ++i) std::copy(x.row(i).begin(), x.row(i).end(), px.row(perm[i]).begin());
    opt.vertex_features = std::move(px);
  }
  opt.edge_features = g.edge_features();
  opt.weights = g.weights();
  return build_graph(n, edges, std::move(opt));
}

/// N x N adjacency; entries are edge weights (1 when unweighted).
inline DenseMatrix adjacency(const Graph& g) {
  DenseMatrix a(g.num_vertices(), g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edges()[e];
    a(u, v) = g.weight(e);
    if (!g.directed()) a(v, u) = g.weight(e);
  }
  return a;
}

inline SparseMatrix sparse_adjacency(const Graph& g) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  t.reserve(2 * g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edges()[e];
    t.emplace_back(u, v, g.weight(e));
    if (!g.directed() && u != v) t.emplace_back(v, u, g.weight(e));
  }
  return SparseMatrix::from_triplets(g.num_vertices(), g.num_vertices(), std::move(t));
}

/// Per-vertex (out-)degree; weighted sums when the graph carries weights.
inline std::vector<double> degree_vector(const Graph& g) {
  std::vector<double> d(g.num_vertices(), 0.0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edges()[e];
    if (u == v) {
      if (g.self_loops_in_degree()) d[u] += g.weight(e);
      continue;
    }
    d[u] += g.weight(e);
    if (!g.directed()) d[v] += g.weight(e);
  }
  return d;
}

inline DenseMatrix degree(const Graph& g) {
  const auto d = degree_vector(g);
  return DenseMatrix::diagonal(d);
}

inline DenseMatrix laplacian(const Graph& g, LaplacianKind kind = LaplacianKind::unnormalized) {
  if (g.directed()) throw GraphError("laplacian is defined for undirected graphs only");
  const std::size_t n = g.num_vertices();
  const auto d = degree_vector(g);
  DenseMatrix w = adjacency(g);
  if (!g.self_loops_in_degree()) {
    for (std::size_t i = 0; i < n; ++i) w(i, i) = 0.0;
  }
  if (kind != LaplacianKind::unnormalized) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(d[i] > 0.0)) {
        throw GraphError("vertex " + std::to_string(i) + " is isolated; normalized Laplacian undefined", i);
      }
    }
  }
  DenseMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = (i == j) ? d[i] : 0.0;
      switch (kind) {
        case LaplacianKind::unnormalized:
          l(i, j) = dij - w(i, j);
          break;
        case LaplacianKind::symmetric:
          l(i, j) = (i == j ? 1.0 : 0.0) - w(i, j) / std::sqrt(d[i] * d[j]);
          break;
        case LaplacianKind::random_walk:
          l(i, j) = (i == j ? 1.0 : 0.0) - w(i, j) / d[i];
          break;
      }
    }
  }
  return l;
}

inline const std::vector<std::size_t>& neighbors(const Graph& g, std::size_t i) { return g.neighbors(i); }

/// Connected-component count via union-find (undirected view).
inline std::size_t connected_components(const Graph& g) {
  std::vector<std::size_t> parent(g.num_vertices());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t count = g.num_vertices();
  for (const auto& [u, v] : g.edges()) {
    const auto a = find(u), b = find(v);
    if (a != b) {
      parent[a] = b;
      --count;
    }
  }
  return count;
}

}  // namespace gnnkit
