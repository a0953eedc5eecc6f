#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gnnkit/autoencoder.hpp"
#include "gnnkit/autograd.hpp"
#include "gnnkit/layers.hpp"
#include "gnnkit/losses.hpp"
#include "gnnkit/random.hpp"

namespace gnnkit {

/// One random instance of a gradient check: the leaves to differentiate
/// and a scalar program over them.
struct GradInstance {
  std::vector<Tensor> leaves;
  std::function<Tensor(Tape&)> program;
};

struct GradCase {
  std::string name;
  std::function<GradInstance(Rng&)> make;
};

struct GradCaseResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t resampled = 0;
  double worst_rel_error = 0.0;
  bool passed = true;
};

/// Checks every leaf of `instances` random draws against central
/// differences. Draws whose tape reports an input within `kink` of a
/// non-differentiable point (relu at 0, max ties) are redrawn.
inline GradCaseResult run_grad_case(const GradCase& c, std::size_t instances, std::uint64_t seed,
                                    double tol = 1e-4, double kink = 1e-3) {
  GradCaseResult r;
  r.name = c.name;
  Rng rng(seed);
  for (std::size_t k = 0; k < instances; ++k) {
    GradInstance inst;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw Error("gradcheck " + c.name + ": no kink-free instance in 1000 draws");
      inst = c.make(rng);
      for (auto& t : inst.leaves) t.set_requires_grad(true);
      Tape probe;
      inst.program(probe);
      if (probe.kink_margin() >= kink) break;
      ++r.resampled;
    }
    for (auto& leaf : inst.leaves) {
      const auto rep = finite_diff_check(inst.program, leaf, 1e-5, tol);
      r.worst_rel_error = std::max(r.worst_rel_error, rep.max_rel_error);
      r.passed = r.passed && rep.passed;
    }
    ++r.instances;
  }
  return r;
}

namespace detail {

inline Tensor uniform_tensor(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(r, c);
  for (double& v : t.value()) v = rng.uniform(lo, hi);
  return t;
}

/// Contracts `out` with fixed random weights so every output entry gets a
/// distinct upstream gradient.
inline Tensor contract(Tape& tape, const Tensor& out, const Tensor& weights) {
  return tape.sum(tape.mul(out, weights));
}

/// Spanning tree plus Bernoulli(p) extra edges.
inline Graph random_check_graph(std::size_t n, double p, Rng& rng, std::size_t vdim = 0, std::size_t edim = 0) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(rng.below(i), i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) e.emplace_back(i, j);
  GraphOptions opt;
  if (vdim) opt.vertex_features = uniform_tensor(n, vdim, rng).to_matrix();
  if (edim) opt.edge_features = uniform_tensor(e.size(), edim, rng).to_matrix();
  return build_graph(n, e, std::move(opt));
}

/// Unary op over an r x c input drawn from [lo, hi].
inline GradCase unary_case(std::string name, std::function<Tensor(Tape&, const Tensor&)> op, double lo = -1.0,
                           double hi = 1.0) {
  return {std::move(name), [op, lo, hi](Rng& rng) {
            const std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
            Tensor a = uniform_tensor(r, c, rng, lo, hi);
            Tensor probe;
            {
              Tape t;
              probe = op(t, a);
            }
            Tensor w = uniform_tensor(probe.rows(), probe.cols(), rng);
            return GradInstance{{a}, [op, a, w](Tape& t) { return contract(t, op(t, a), w); }};
          }};
}

inline std::vector<std::size_t> random_indices(std::size_t count, std::size_t bound, Rng& rng) {
  std::vector<std::size_t> v(count);
  for (auto& x : v) x = rng.below(bound);
  return v;
}

}  // namespace detail

/// Every differentiable op, loss, layer and encoder in the library.
inline std::vector<GradCase> standard_grad_cases() {
  using detail::contract;
  using detail::uniform_tensor;
  std::vector<GradCase> cases;

  cases.push_back({"matmul", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), k = 1 + rng.below(4), m = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, k, rng), b = uniform_tensor(k, m, rng), w = uniform_tensor(n, m, rng);
                     return GradInstance{{a, b}, [=](Tape& t) { return contract(t, t.matmul(a, b), w); }};
                   }});
  cases.push_back({"spmm", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(5), m = 1 + rng.below(3);
                     auto s = std::make_shared<const SparseMatrix>(
                         gcn_norm_adjacency(detail::random_check_graph(n, 0.3, rng)));
                     Tensor b = uniform_tensor(n, m, rng), w = uniform_tensor(n, m, rng);
                     return GradInstance{{b}, [=](Tape& t) { return contract(t, t.spmm(s, b), w); }};
                   }});
  cases.push_back({"add", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), m = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng), b = uniform_tensor(n, m, rng), w = uniform_tensor(n, m, rng);
                     return GradInstance{{a, b}, [=](Tape& t) { return contract(t, t.add(a, b), w); }};
                   }});
  cases.push_back({"add_row_broadcast", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(4), m = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng), b = uniform_tensor(1, m, rng), w = uniform_tensor(n, m, rng);
                     return GradInstance{{a, b}, [=](Tape& t) { return contract(t, t.add(a, b), w); }};
                   }});
  cases.push_back({"sub", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), m = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng), b = uniform_tensor(n, m, rng), w = uniform_tensor(n, m, rng);
                     return GradInstance{{a, b}, [=](Tape& t) { return contract(t, t.sub(a, b), w); }};
                   }});
  cases.push_back({"mul", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), m = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng), b = uniform_tensor(n, m, rng), w = uniform_tensor(n, m, rng);
                     return GradInstance{{a, b}, [=](Tape& t) { return contract(t, t.mul(a, b), w); }};
                   }});
  cases.push_back({"concat_cols", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, 1 + rng.below(3), rng), b = uniform_tensor(n, 1 + rng.below(3), rng);
                     Tensor w = uniform_tensor(n, a.cols() + b.cols(), rng);
                     return GradInstance{{a, b}, [=](Tape& t) { return contract(t, t.concat_cols({a, b}), w); }};
                   }});
  cases.push_back(detail::unary_case("scale", [](Tape& t, const Tensor& a) { return t.scale(a, -2.5); }));
  cases.push_back(detail::unary_case("transpose", [](Tape& t, const Tensor& a) { return t.transpose(a); }));
  cases.push_back(detail::unary_case("row_sum", [](Tape& t, const Tensor& a) { return t.row_sum(a); }));
  cases.push_back(detail::unary_case("row_mean", [](Tape& t, const Tensor& a) { return t.row_mean(a); }));
  cases.push_back(detail::unary_case("row_max", [](Tape& t, const Tensor& a) { return t.row_max(a); }));
  cases.push_back(detail::unary_case("sum", [](Tape& t, const Tensor& a) { return t.sum(a); }));
  cases.push_back(detail::unary_case("mean", [](Tape& t, const Tensor& a) { return t.mean(a); }));
  cases.push_back(detail::unary_case("sigmoid", [](Tape& t, const Tensor& a) { return t.sigmoid(a); }, -4, 4));
  cases.push_back(detail::unary_case("tanh", [](Tape& t, const Tensor& a) { return t.tanh(a); }, -2, 2));
  cases.push_back(detail::unary_case("exp", [](Tape& t, const Tensor& a) { return t.exp(a); }, -2, 2));
  cases.push_back(detail::unary_case("log", [](Tape& t, const Tensor& a) { return t.log(a); }, 0.2, 3));
  cases.push_back(detail::unary_case("relu", [](Tape& t, const Tensor& a) { return t.relu(a); }));
  cases.push_back(detail::unary_case("softmax_rows", [](Tape& t, const Tensor& a) { return t.softmax_rows(a); }, -3, 3));
  cases.push_back({"clamp", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), m = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng, -2, 2), w = uniform_tensor(n, m, rng);
                     // keep entries away from the clamp bounds
                     for (double& v : a.value())
                       while (std::abs(std::abs(v) - 1.0) < 1e-2) v = rng.uniform(-2, 2);
                     return GradInstance{{a}, [=](Tape& t) { return contract(t, t.clamp(a, -1.0, 1.0), w); }};
                   }});
  cases.push_back({"gather_rows", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), m = 1 + rng.below(3), r = 1 + rng.below(6);
                     Tensor a = uniform_tensor(n, m, rng), w = uniform_tensor(r, m, rng);
                     auto idx = detail::random_indices(r, n, rng);
                     return GradInstance{{a}, [=](Tape& t) { return contract(t, t.gather_rows(a, idx), w); }};
                   }});
  cases.push_back({"scatter_add_rows", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(6), m = 1 + rng.below(3), out = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng), w = uniform_tensor(out, m, rng);
                     auto idx = detail::random_indices(n, out, rng);
                     return GradInstance{{a}, [=](Tape& t) { return contract(t, t.scatter_add_rows(a, idx, out), w); }};
                   }});
  cases.push_back({"segment_max", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(5), m = 1 + rng.below(3), segs = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng), w = uniform_tensor(segs, m, rng);
                     Segments s;
                     for (std::size_t i = 0; i < segs; ++i) {
                       const auto members = detail::random_indices(rng.below(4), n, rng);
                       s.indices.insert(s.indices.end(), members.begin(), members.end());
                       s.offsets.push_back(s.indices.size());
                     }
                     return GradInstance{{a}, [=](Tape& t) { return contract(t, t.segment_max(a, s), w); }};
                   }});

  cases.push_back({"cross_entropy", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(5), c = 2 + rng.below(3);
                     Tensor a = uniform_tensor(n, c, rng, -2, 2);
                     std::vector<int> labels(n);
                     for (int& l : labels) l = static_cast<int>(rng.below(c));
                     std::vector<std::size_t> rows;
                     for (std::size_t i = 0; i < n; ++i)
                       if (rng.bernoulli(0.6)) rows.push_back(i);
                     return GradInstance{{a}, [=](Tape& t) { return cross_entropy(t, a, labels, rows); }};
                   }});
  cases.push_back({"mse", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), m = 1 + rng.below(4);
                     Tensor a = uniform_tensor(n, m, rng), b = uniform_tensor(n, m, rng);
                     return GradInstance{{a, b}, [=](Tape& t) { return mse(t, a, b); }};
                   }});
  cases.push_back({"bce", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), m = 1 + rng.below(4);
                     Tensor p = uniform_tensor(n, m, rng, 0.05, 0.95), y(n, m);
                     for (double& v : y.value()) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
                     const double w = rng.uniform(0.5, 4.0);
                     return GradInstance{{p}, [=](Tape& t) { return bce(t, p, y, w); }};
                   }});

  cases.push_back({"rgnn_transition", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(2 + rng.below(5), 0.3, rng, 3, 2);
                     ModelParams p;
                     init_rgnn_params(p, rgnn_dims_for(g, 4, 2), rng);
                     Tensor h = uniform_tensor(g.num_vertices(), 4, rng), w = uniform_tensor(g.num_vertices(), 4, rng);
                     return GradInstance{{p.at("rgnn.W"), p.at("rgnn.b"), h}, [=](Tape& t) {
                                           return contract(t, rgnn_transition(t, g, HiddenStates{h, 0}, p).values, w);
                                         }};
                   }});
  cases.push_back({"rgnn_run_featureless", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(2 + rng.below(5), 0.3, rng);
                     ModelParams p;
                     init_rgnn_params(p, rgnn_dims_for(g, 4, 3), rng);
                     Tensor w = uniform_tensor(g.num_vertices(), 3, rng);
                     return GradInstance{{p.at("rgnn.W"), p.at("rgnn.vertex_embedding"), p.at("out_vertex.W")},
                                         [=](Tape& t) {
                                           const auto run = rgnn_run(t, g, p, 3);
                                           return contract(t, output_vertex(t, run.states, g, p), w);
                                         }};
                   }});
  cases.push_back({"output_vertex", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(2 + rng.below(5), 0.3, rng, 3);
                     ModelParams p;
                     init_rgnn_params(p, rgnn_dims_for(g, 4, 2), rng);
                     Tensor h = uniform_tensor(g.num_vertices(), 4, rng), w = uniform_tensor(g.num_vertices(), 2, rng);
                     return GradInstance{{p.at("out_vertex.W"), p.at("out_vertex.b"), h}, [=](Tape& t) {
                                           return contract(t, output_vertex(t, HiddenStates{h, 1}, g, p), w);
                                         }};
                   }});
  cases.push_back({"output_edge", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(2 + rng.below(5), 0.3, rng, 3, 2);
                     ModelParams p;
                     init_rgnn_params(p, rgnn_dims_for(g, 4, 2), rng);
                     Tensor h = uniform_tensor(g.num_vertices(), 4, rng), w = uniform_tensor(g.num_edges(), 2, rng);
                     return GradInstance{{p.at("out_edge.W"), p.at("out_edge.b"), h}, [=](Tape& t) {
                                           return contract(t, output_edge(t, HiddenStates{h, 1}, g, p), w);
                                         }};
                   }});
  cases.push_back({"output_graph", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(2 + rng.below(5), 0.3, rng, 3);
                     ModelParams p;
                     init_rgnn_params(p, rgnn_dims_for(g, 4, 3), rng);
                     Tensor h = uniform_tensor(g.num_vertices(), 4, rng), w = uniform_tensor(1, 3, rng);
                     return GradInstance{{p.at("out_graph.W"), p.at("out_graph.b"), h}, [=](Tape& t) {
                                           return contract(t, output_graph(t, HiddenStates{h, 1}, p), w);
                                         }};
                   }});
  cases.push_back({"gcn_layer", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(6), f = 1 + rng.below(4), o = 1 + rng.below(4);
                     auto a = std::make_shared<const SparseMatrix>(
                         gcn_norm_adjacency(detail::random_check_graph(n, 0.3, rng)));
                     Tensor h = uniform_tensor(n, f, rng), wt = uniform_tensor(f, o, rng), w = uniform_tensor(n, o, rng);
                     return GradInstance{{h, wt}, [=](Tape& t) {
                                           return contract(t, gcn_layer(t, a, h, wt, Activation::relu), w);
                                         }};
                   }});
  cases.push_back({"sage_mean_layer", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(6), f = 1 + rng.below(4), o = 1 + rng.below(4);
                     const NeighborhoodIndex nbr(detail::random_check_graph(n, 0.3, rng));
                     Tensor h = uniform_tensor(n, f, rng), ws = uniform_tensor(f, o, rng), wn = uniform_tensor(f, o, rng);
                     Tensor b = uniform_tensor(1, o, rng), w = uniform_tensor(n, o, rng);
                     return GradInstance{{h, ws, wn, b}, [=](Tape& t) {
                                           return contract(t, sage_mean_layer(t, nbr, h, ws, wn, Activation::tanh, b), w);
                                         }};
                   }});
  cases.push_back({"sage_pool_layer", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(6), f = 1 + rng.below(4), pd = 1 + rng.below(4),
                                       o = 1 + rng.below(4);
                     const NeighborhoodIndex nbr(detail::random_check_graph(n, 0.3, rng));
                     Tensor h = uniform_tensor(n, f, rng), wp = uniform_tensor(f, pd, rng);
                     // mostly positive pre-activations: pooling ties between
                     // relu-zeroed messages are flat, but they read as kinks
                     Tensor bp = uniform_tensor(1, pd, rng, 0.0, 2.0 * static_cast<double>(f));
                     Tensor ws = uniform_tensor(f, o, rng), wn = uniform_tensor(pd, o, rng);
                     Tensor w = uniform_tensor(n, o, rng);
                     return GradInstance{{h, wp, bp, ws, wn}, [=](Tape& t) {
                                           return contract(
                                               t, sage_pool_layer(t, nbr, h, wp, bp, ws, wn, Activation::identity), w);
                                         }};
                   }});
  cases.push_back({"spectral_conv_layer", [](Rng& rng) {
                     const std::size_t n = 2 + rng.below(6), in = 1 + rng.below(3), out = 1 + rng.below(3);
                     const auto es = laplacian_eigensystem(detail::random_check_graph(n, 0.3, rng));
                     Tensor h = uniform_tensor(n, in, rng), theta = uniform_tensor(n, in * out, rng);
                     Tensor w = uniform_tensor(n, out, rng);
                     return GradInstance{{h, theta}, [=](Tape& t) {
                                           return contract(t, spectral_conv_layer(t, es, h, theta, out, Activation::tanh),
                                                           w);
                                         }};
                   }});

  cases.push_back({"reconstruction_loss", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(2 + rng.below(7), 0.3, rng);
                     auto target = std::make_shared<const AdjacencyTarget>(AdjacencyTarget::from_graph(g));
                     Tensor z = uniform_tensor(g.num_vertices(), 1 + rng.below(4), rng, -1.5, 1.5);
                     return GradInstance{{z}, [=](Tape& t) { return reconstruction_loss(t, z, target); }};
                   }});
  cases.push_back({"kl_loss", [](Rng& rng) {
                     const std::size_t n = 1 + rng.below(4), d = 1 + rng.below(4);
                     Tensor mu = uniform_tensor(n, d, rng), lv = uniform_tensor(n, d, rng, -2, 2);
                     return GradInstance{{mu, lv}, [=](Tape& t) { return kl_loss(t, mu, lv); }};
                   }});
  cases.push_back({"vgae_encode", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(3 + rng.below(5), 0.3, rng);
                     const std::size_t n = g.num_vertices(), f = 1 + rng.below(4);
                     auto a = std::make_shared<const SparseMatrix>(gcn_norm_adjacency(g));
                     auto target = std::make_shared<const AdjacencyTarget>(AdjacencyTarget::from_graph(g));
                     Tensor x = uniform_tensor(n, f, rng);
                     ModelParams p;
                     init_autoencoder_params(p, f, 4, 2, true, rng);
                     const std::uint64_t noise_seed = rng.next();
                     return GradInstance{{p.at("enc.W1"), p.at("enc.W_mu"), p.at("enc.W_logvar")}, [=](Tape& t) {
                                           Rng noise(noise_seed);
                                           const auto emb = vgae_encode(t, a, x, p, noise);
                                           return t.add(reconstruction_loss(t, emb.z, target),
                                                        kl_loss(t, *emb.mu, *emb.logvar));
                                         }};
                   }});
  cases.push_back({"gae_encode", [](Rng& rng) {
                     const Graph g = detail::random_check_graph(3 + rng.below(5), 0.3, rng);
                     const std::size_t n = g.num_vertices(), f = 1 + rng.below(4);
                     auto a = std::make_shared<const SparseMatrix>(gcn_norm_adjacency(g));
                     auto target = std::make_shared<const AdjacencyTarget>(AdjacencyTarget::from_graph(g));
                     Tensor x = uniform_tensor(n, f, rng);
                     ModelParams p;
                     init_autoencoder_params(p, f, 4, 2, false, rng);
                     return GradInstance{{p.at("enc.W1"), p.at("enc.W2")}, [=](Tape& t) {
                                           return reconstruction_loss(t, gae_encode(t, a, x, p).z, target);
                                         }};
                   }});
  return cases;
}

}  // namespace gnnkit
