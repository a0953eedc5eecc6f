#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gnnkit/autograd.hpp"
#include "gnnkit/error.hpp"
#include "gnnkit/graph.hpp"
#include "gnnkit/random.hpp"
#include "gnnkit/spectral.hpp"

namespace gnnkit {

enum class Activation { identity, relu, tanh, sigmoid };

inline Tensor activate(Tape& tape, const Tensor& x, Activation act) {
  switch (act) {
    case Activation::relu:
      return tape.relu(x);
    case Activation::tanh:
      return tape.tanh(x);
    case Activation::sigmoid:
      return tape.sigmoid(x);
    case Activation::identity:
      break;
  }
  return x;
}

/// Named, shaped collection of trainable tensors.
///
/// Iteration order is by name, so optimizer updates and serialization are
/// deterministic.
class ModelParams {
 public:
  /// Glorot-uniform weights in (-s, s), s = sqrt(6 / (fan_in + fan_out)).
  Tensor& add_glorot(const std::string& name, std::size_t rows, std::size_t cols, Rng& rng) {
    Tensor t(rows, cols, 0.0, true);
    const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : t.value()) v = rng.uniform(-s, s);
    return add(name, std::move(t));
  }

  Tensor& add_zeros(const std::string& name, std::size_t rows, std::size_t cols) {
    return add(name, Tensor(rows, cols, 0.0, true));
  }

  Tensor& add(const std::string& name, Tensor t) {
    if (params_.count(name)) throw ConfigError("duplicate parameter name '" + name + "'");
    t.set_requires_grad(true);
    return params_.emplace(name, std::move(t)).first->second;
  }

  bool contains(const std::string& name) const { return params_.count(name) != 0; }

  const Tensor& at(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("unknown parameter '" + name + "'");
    return it->second;
  }
  Tensor& at(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("unknown parameter '" + name + "'");
    return it->second;
  }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  std::size_t size() const noexcept { return params_.size(); }

  std::size_t scalar_count() const {
    std::size_t n = 0;
    for (const auto& [_, t] : params_) n += t.size();
    return n;
  }

  void zero_grad() {
    for (auto& [_, t] : params_) t.zero_grad();
  }

 private:
  std::map<std::string, Tensor> params_;
};

/// Vertex states h_i^k stacked as rows, plus the iteration that produced them.
struct HiddenStates {
  Tensor values;
  std::size_t iteration = 0;
};

// ------------------------------------------------------------------ RGNN

/// Size of the learned constant vertex embedding used when a graph carries
/// no vertex features.
inline constexpr std::size_t kVertexEmbeddingDim = 8;

/// Declared input widths for the recurrent transition and output maps.
struct RgnnDims {
  std::size_t vertex_dim = 0;  // 0 -> learned constant embedding
  std::size_t edge_dim = 0;    // 0 -> edge block omitted
  std::size_t state_dim = 16;
  std::size_t classes = 2;

  std::size_t effective_vertex_dim() const { return vertex_dim ? vertex_dim : kVertexEmbeddingDim; }
  std::size_t transition_input() const { return 2 * effective_vertex_dim() + edge_dim + state_dim; }
};

inline RgnnDims rgnn_dims_for(const Graph& g, std::size_t state_dim, std::size_t classes) {
  return RgnnDims{g.vertex_feature_dim(), g.edge_feature_dim(), state_dim, classes};
}

/// Transition f (affine + tanh), plus vertex/edge/graph output maps.
inline void init_rgnn_params(ModelParams& p, const RgnnDims& d, Rng& rng) {
  const std::size_t fv = d.effective_vertex_dim();
  if (d.vertex_dim == 0) p.add_glorot("rgnn.vertex_embedding", 1, kVertexEmbeddingDim, rng);
  p.add_glorot("rgnn.W", d.transition_input(), d.state_dim, rng);
  p.add_zeros("rgnn.b", 1, d.state_dim);
  p.add_glorot("out_vertex.W", fv + d.state_dim, d.classes, rng);
  p.add_zeros("out_vertex.b", 1, d.classes);
  p.add_glorot("out_edge.W", d.edge_dim + 2 * (fv + d.state_dim), d.classes, rng);
  p.add_zeros("out_edge.b", 1, d.classes);
  p.add_glorot("out_graph.W", d.state_dim, d.classes, rng);
  p.add_zeros("out_graph.b", 1, d.classes);
}

/// Vertex feature matrix f^v, or the learned embedding broadcast to every
/// vertex when the graph has none.
inline Tensor vertex_inputs(Tape& tape, const Graph& g, const ModelParams& p) {
  if (g.has_vertex_features()) return Tensor::from_matrix(*g.vertex_features());
  if (!p.contains("rgnn.vertex_embedding")) {
    throw ShapeError("graph has no vertex features and the model has no vertex embedding");
  }
  return tape.gather_rows(p.at("rgnn.vertex_embedding"), std::vector<std::size_t>(g.num_vertices(), 0));
}

/// Directed message list: one entry per (center i, neighbor j) pair.
struct MessageIndex {
  std::vector<std::size_t> center;
  std::vector<std::size_t> neighbor;
  std::vector<std::size_t> edge;

  explicit MessageIndex(const Graph& g) {
    for (std::size_t i = 0; i < g.num_vertices(); ++i) {
      const auto& nb = g.neighbors(i);
      const auto& inc = g.incident_edges(i);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        center.push_back(i);
        neighbor.push_back(nb[k]);
        edge.push_back(inc[k]);
      }
    }
  }
};

/// h_i^k = sum_{j in ne[i]} tanh(W [f_i, f_ij, f_j, h_j^{k-1}] + b).
/// The edge block is skipped when the graph has no edge features; vertices
/// with no neighbors get the zero vector.
inline Tensor rgnn_transition(Tape& tape, const Graph& g, const Tensor& h_prev, const ModelParams& p,
                              const MessageIndex& msgs, const Tensor& xv) {
  const std::size_t n = g.num_vertices();
  if (h_prev.rows() != n) throw ShapeError("rgnn_transition: H rows != vertex count");
  const Tensor& w = p.at("rgnn.W");
  std::vector<Tensor> parts;
  parts.push_back(tape.gather_rows(xv, msgs.center));
  if (g.has_edge_features()) parts.push_back(tape.gather_rows(Tensor::from_matrix(*g.edge_features()), msgs.edge));
  parts.push_back(tape.gather_rows(xv, msgs.neighbor));
  parts.push_back(tape.gather_rows(h_prev, msgs.neighbor));
  Tensor input = tape.concat_cols(parts);
  if (input.cols() != w.rows()) {
    throw ShapeError("rgnn_transition: message width " + std::to_string(input.cols()) + " != W rows " +
                     std::to_string(w.rows()));
  }
  Tensor m = tape.tanh(tape.add(tape.matmul(input, w), p.at("rgnn.b")));
  return tape.scatter_add_rows(m, msgs.center, n);
}

inline HiddenStates rgnn_transition(Tape& tape, const Graph& g, const HiddenStates& h_prev, const ModelParams& p) {
  MessageIndex msgs(g);
  const Tensor xv = vertex_inputs(tape, g, p);
  return HiddenStates{rgnn_transition(tape, g, h_prev.values, p, msgs, xv), h_prev.iteration + 1};
}

struct RgnnRunResult {
  HiddenStates states;
  std::size_t iterations = 0;
  bool converged = false;
  /// Upper bound on the transition's Lipschitz constant in the state
  /// argument: ||W_h||_2 * max degree. Below 1 guarantees a contraction.
  double lipschitz_bound = 0.0;
};

/// Spectral norm by power iteration on M^T M.
inline double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  return std::sqrt(std::max(0.0, lambda_max(m.transpose() * m)));
}

/// Applies the transition up to max_iterations times from h^0 = 0, stopping
/// early once the largest state change is below eps.
inline RgnnRunResult rgnn_run(Tape& tape, const Graph& g, const ModelParams& p, std::size_t max_iterations,
                              double eps = 0.0) {
  if (max_iterations == 0) throw ConfigError("rgnn_run: at least one iteration required");
  const Tensor& w = p.at("rgnn.W");
  const std::size_t d = w.cols();
  RgnnRunResult result;
  {
    DenseMatrix wh(d, d);
    const std::size_t offset = w.rows() - d;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) wh(i, j) = w(offset + i, j);
    double maxdeg = 0.0;
    for (std::size_t i = 0; i < g.num_vertices(); ++i)
      maxdeg = std::max(maxdeg, static_cast<double>(g.neighbors(i).size()));
    result.lipschitz_bound = spectral_norm(wh) * maxdeg;
  }
  MessageIndex msgs(g);
  const Tensor xv = vertex_inputs(tape, g, p);
  Tensor h(g.num_vertices(), d);
  for (std::size_t k = 0; k < max_iterations; ++k) {
    Tensor next = rgnn_transition(tape, g, h, p, msgs, xv);
    double change = 0.0;
    for (std::size_t q = 0; q < next.size(); ++q) change = std::max(change, std::abs(next.value()[q] - h.value()[q]));
    h = next;
    result.iterations = k + 1;
    if (change < eps) {
      result.converged = true;
      break;
    }
  }
  result.states = HiddenStates{h, result.iterations};
  return result;
}

/// o_i = W [f_i, h_i] + b
inline Tensor output_vertex(Tape& tape, const HiddenStates& h, const Graph& g, const ModelParams& p) {
  const Tensor xv = vertex_inputs(tape, g, p);
  Tensor in = tape.concat_cols({xv, h.values});
  const Tensor& w = p.at("out_vertex.W");
  if (in.cols() != w.rows()) throw ShapeError("output_vertex: input width != W rows");
  return tape.add(tape.matmul(in, w), p.at("out_vertex.b"));
}

/// o_ij = W [f_ij, f_i, h_i, f_j, h_j] + b, one row per stored edge.
inline Tensor output_edge(Tape& tape, const HiddenStates& h, const Graph& g, const ModelParams& p) {
  const Tensor xv = vertex_inputs(tape, g, p);
  std::vector<std::size_t> src, dst, ids;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    src.push_back(g.edges()[e].first);
    dst.push_back(g.edges()[e].second);
    ids.push_back(e);
  }
  std::vector<Tensor> parts;
  if (g.has_edge_features()) parts.push_back(tape.gather_rows(Tensor::from_matrix(*g.edge_features()), ids));
  parts.push_back(tape.gather_rows(xv, src));
  parts.push_back(tape.gather_rows(h.values, src));
  parts.push_back(tape.gather_rows(xv, dst));
  parts.push_back(tape.gather_rows(h.values, dst));
  Tensor in = tape.concat_cols(parts);
  const Tensor& w = p.at("out_edge.W");
  if (in.cols() != w.rows()) throw ShapeError("output_edge: input width != W rows");
  return tape.add(tape.matmul(in, w), p.at("out_edge.b"));
}

/// Mean of the rows of `x` grouped by `segment` (one output row per segment).
inline Tensor segment_mean(Tape& tape, const Tensor& x, const std::vector<std::size_t>& segment,
                           std::size_t num_segments) {
  std::vector<double> counts(num_segments, 0.0);
  for (std::size_t s : segment) counts.at(s) += 1.0;
  Tensor sums = tape.scatter_add_rows(x, segment, num_segments);
  Tensor inv(num_segments, x.cols());
  for (std::size_t s = 0; s < num_segments; ++s) {
    if (counts[s] == 0.0) throw ShapeError("segment_mean: empty segment " + std::to_string(s));
    for (std::size_t j = 0; j < x.cols(); ++j) inv(s, j) = 1.0 / counts[s];
  }
  return tape.mul(sums, inv);
}

/// Graph-level logits from the mean of the vertex states.
inline Tensor output_graph(Tape& tape, const HiddenStates& h, const ModelParams& p) {
  if (h.values.rows() == 0) throw ShapeError("output_graph: empty graph");
  Tensor readout = segment_mean(tape, h.values, std::vector<std::size_t>(h.values.rows(), 0), 1);
  return tape.add(tape.matmul(readout, p.at("out_graph.W")), p.at("out_graph.b"));
}

// ------------------------------------------------------- spatial layers

/// sigma(Anorm * H * W). Anorm is normally gcn_norm_adjacency(g).
inline Tensor gcn_layer(Tape& tape, std::shared_ptr<const SparseMatrix> anorm, const Tensor& h_prev,
                        const Tensor& w, Activation act) {
  if (anorm->cols() != h_prev.rows()) throw ShapeError("gcn_layer: Anorm columns != H rows");
  if (h_prev.cols() != w.rows()) throw ShapeError("gcn_layer: H columns != W rows");
  return activate(tape, tape.spmm(std::move(anorm), tape.matmul(h_prev, w)), act);
}

/// Neighborhood structures reused across epochs by the GraphSAGE layers.
struct NeighborhoodIndex {
  std::shared_ptr<const SparseMatrix> mean_operator;  // row i averages ne[i]
  Segments segments;                                  // ne[i] as segments

  explicit NeighborhoodIndex(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::tuple<std::size_t, std::size_t, double>> t;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nb = g.neighbors(i);
      for (std::size_t j : nb) t.emplace_back(i, j, 1.0 / static_cast<double>(nb.size()));
      segments.indices.insert(segments.indices.end(), nb.begin(), nb.end());
      segments.offsets.push_back(segments.indices.size());
    }
    mean_operator = std::make_shared<const SparseMatrix>(SparseMatrix::from_triplets(n, n, std::move(t)));
  }
};

/// sigma(H W_self + mean_{j in ne[i]}(h_j) W_neigh [+ b]).
inline Tensor sage_mean_layer(Tape& tape, const NeighborhoodIndex& nbr, const Tensor& h_prev, const Tensor& w_self,
                              const Tensor& w_neigh, Activation act, const std::optional<Tensor>& bias = {}) {
  if (h_prev.rows() != nbr.segments.count()) throw ShapeError("sage_mean_layer: H rows != vertex count");
  Tensor agg = tape.spmm(nbr.mean_operator, h_prev);
  Tensor out = tape.add(tape.matmul(h_prev, w_self), tape.matmul(agg, w_neigh));
  if (bias) out = tape.add(out, *bias);
  return activate(tape, out, act);
}

/// Neighbor messages relu(H W_pool + b_pool) are max-pooled per
/// neighborhood, then combined as in sage_mean_layer.
inline Tensor sage_pool_layer(Tape& tape, const NeighborhoodIndex& nbr, const Tensor& h_prev, const Tensor& w_pool,
                              const Tensor& b_pool, const Tensor& w_self, const Tensor& w_neigh, Activation act,
                              const std::optional<Tensor>& bias = {}) {
  if (h_prev.rows() != nbr.segments.count()) throw ShapeError("sage_pool_layer: H rows != vertex count");
  Tensor messages = tape.relu(tape.add(tape.matmul(h_prev, w_pool), b_pool));
  Tensor pooled = tape.segment_max(messages, nbr.segments);
  Tensor out = tape.add(tape.matmul(h_prev, w_self), tape.matmul(pooled, w_neigh));
  if (bias) out = tape.add(out, *bias);
  return activate(tape, out, act);
}

/// Trainable spectral convolution. `theta` is N x (in * out); column
/// i * out + j holds the diagonal filter from input channel i to output
/// channel j. Output column j = sigma(sum_i U diag(theta_ij) U^T H[:, i]).
inline Tensor spectral_conv_layer(Tape& tape, const Eigensystem& es, const Tensor& h_prev, const Tensor& theta,
                                  std::size_t out_channels, Activation act) {
  const std::size_t n = es.size(), in = h_prev.cols();
  if (h_prev.rows() != n) throw ShapeError("spectral_conv_layer: H rows != N");
  if (theta.rows() != n || theta.cols() != in * out_channels) {
    throw ShapeError("spectral_conv_layer: theta must be N x (in*out)");
  }
  const Tensor u = Tensor::from_matrix(es.eigenvectors);
  const Tensor ut = Tensor::from_matrix(es.eigenvectors.transpose());
  Tensor hhat = tape.matmul(ut, h_prev);

  Tensor mixed(n, out_channels);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < in; ++i)
      for (std::size_t j = 0; j < out_channels; ++j) mixed(k, j) += theta(k, i * out_channels + j) * hhat(k, i);
  mixed = tape.record("spectral_mix", {hhat, theta}, mixed, [hhat, theta, mixed, n, in, out_channels]() mutable {
    auto g = mixed.grad();
    const bool dh = hhat.requires_grad(), dt = theta.requires_grad();
    std::span<double> gh, gt;
    if (dh) gh = hhat.grad();
    if (dt) gt = theta.grad();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < in; ++i)
        for (std::size_t j = 0; j < out_channels; ++j) {
          const double gk = g[k * out_channels + j];
          if (dh) gh[k * in + i] += gk * theta(k, i * out_channels + j);
          if (dt) gt[k * in * out_channels + i * out_channels + j] += gk * hhat(k, i);
        }
  });
  return activate(tape, tape.matmul(u, mixed), act);
}

}  // namespace gnnkit
