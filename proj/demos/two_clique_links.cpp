// Trains a graph autoencoder on two dense blocks joined by a few edges and
// scores held-out links with the library API directly (no config file).
#include <iostream>

#include "gnnkit/gnnkit.hpp"

using namespace gnnkit;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 0;
  const Graph g = data::synth_two_clique(12, 0.05, seed);
  const auto split = data::split_edges(g, {}, seed);

  const auto anorm = std::make_shared<const SparseMatrix>(gcn_norm_adjacency(split.train));
  const auto target = std::make_shared<const AdjacencyTarget>(AdjacencyTarget::from_graph(split.train));
  const Tensor x = Tensor::from_matrix(DenseMatrix::identity(g.num_vertices()));

  Rng rng(seed);
  ModelParams params;
  init_autoencoder_params(params, g.num_vertices(), 16, 8, false, rng);
  Optimizer adam({OptimizerKind::adam, 0.01});
  for (int epoch = 0; epoch < 200; ++epoch) {
    Tape tape;
    const Tensor loss = reconstruction_loss(tape, gae_encode(tape, anorm, x, params).z, target);
    params.zero_grad();
    tape.backward(loss);
    adam.step(params);
    if (epoch % 50 == 0) std::cout << "epoch " << epoch << " loss " << loss.item() << '\n';
  }

  Tape tape;
  const DenseMatrix z = gae_encode(tape, anorm, x, params).z.to_matrix();
  std::vector<int> labels;
  std::vector<double> scores;
  for (const auto& [u, v] : split.test_pos) {
    labels.push_back(1);
    scores.push_back(link_score(z, u, v));
  }
  for (const auto& [u, v] : split.test_neg) {
    labels.push_back(0);
    scores.push_back(link_score(z, u, v));
  }
  std::cout << "test AUC " << metrics::roc_auc(labels, scores).auc << ", AP "
            << metrics::average_precision(labels, scores) << '\n';
}
