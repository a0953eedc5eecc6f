#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gnnkit/autoencoder.hpp"
#include "gnnkit/autograd.hpp"
#include "gnnkit/data.hpp"
#include "gnnkit/error.hpp"
#include "gnnkit/graph.hpp"
#include "gnnkit/layers.hpp"
#include "gnnkit/losses.hpp"
#include "gnnkit/metrics.hpp"
#include "gnnkit/optim.hpp"
#include "gnnkit/random.hpp"
#include "gnnkit/spectral.hpp"

namespace gnnkit {

enum class TaskKind { graph, node, link };

/// Flat experiment configuration. JSON keys match the field names; unknown
/// keys are rejected.
struct TrainConfig {
  TaskKind task = TaskKind::graph;
  std::string dataset = "synthetic-structural";
  std::string data_dir = "data";
  std::size_t epochs = 16;
  double learning_rate = 0.01;
  OptimizerKind optimizer = OptimizerKind::adam;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  std::size_t hidden = 16;
  /// RGNN transition applications (graph task) or SAGE layers (node task).
  std::size_t transitions = 1;
  std::size_t layers = 2;
  std::size_t latent = 16;
  std::string model = "gae";        // link task: gae | vgae
  std::string kl_norm = "vertex";   // vgae: vertex (1/N) | entry (1/N^2)
  std::string aggregator = "mean";  // node task: mean | pool
  /// Width of the pooling layer's hidden messages; 0 means the input width.
  std::size_t pool_dim = 0;
  std::size_t batch_size = 32;
  /// Graph task: held-out fraction, or absolute sizes when nonzero.
  double test_fraction = 0.2;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  /// Synthetic generators.
  std::size_t num_graphs = 400;
  std::size_t min_vertices = 12;
  std::size_t max_vertices = 30;
  std::size_t block_size = 10;
  double p_cross = 0.05;
  std::size_t repeats = 1;

  void validate() const {
    auto positive = [](const char* key, std::size_t v) {
      if (v < 1) throw ConfigError(std::string("config key '") + key + "' must be >= 1");
    };
    positive("epochs", epochs);
    positive("hidden", hidden);
    positive("transitions", transitions);
    positive("layers", layers);
    positive("latent", latent);
    positive("batch_size", batch_size);
    positive("repeats", repeats);
    if (!(learning_rate > 0.0)) throw ConfigError("config key 'learning_rate' must be > 0");
    if (weight_decay < 0.0) throw ConfigError("config key 'weight_decay' must be >= 0");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("config key 'test_fraction' must be in (0, 1)");
    if (model != "gae" && model != "vgae") throw ConfigError("config key 'model' must be 'gae' or 'vgae'");
    if (kl_norm != "vertex" && kl_norm != "entry") throw ConfigError("config key 'kl_norm' must be 'vertex' or 'entry'");
    if (aggregator != "mean" && aggregator != "pool") throw ConfigError("config key 'aggregator' must be 'mean' or 'pool'");
    if (layers != 2 && task == TaskKind::node) throw ConfigError("config key 'layers': only 2-layer SAGE is supported");
  }
};

inline std::string to_string(TaskKind t) {
  switch (t) {
    case TaskKind::graph:
      return "graph";
    case TaskKind::node:
      return "node";
    case TaskKind::link:
      return "link";
  }
  return "graph";
}

inline TaskKind task_from_string(const std::string& s) {
  if (s == "graph") return TaskKind::graph;
  if (s == "node") return TaskKind::node;
  if (s == "link") return TaskKind::link;
  throw ConfigError("config key 'task' must be graph, node or link; got '" + s + "'");
}

inline nlohmann::json to_json(const TrainConfig& c) {
  return nlohmann::json{{"task", to_string(c.task)},
                        {"dataset", c.dataset},
                        {"data_dir", c.data_dir},
                        {"epochs", c.epochs},
                        {"learning_rate", c.learning_rate},
                        {"optimizer", c.optimizer == OptimizerKind::adam ? "adam" : "sgd"},
                        {"weight_decay", c.weight_decay},
                        {"seed", c.seed},
                        {"hidden", c.hidden},
                        {"transitions", c.transitions},
                        {"layers", c.layers},
                        {"latent", c.latent},
                        {"model", c.model},
                        {"kl_norm", c.kl_norm},
                        {"aggregator", c.aggregator},
                        {"pool_dim", c.pool_dim},
                        {"batch_size", c.batch_size},
                        {"test_fraction", c.test_fraction},
                        {"train_size", c.train_size},
                        {"test_size", c.test_size},
                        {"num_graphs", c.num_graphs},
                        {"min_vertices", c.min_vertices},
                        {"max_vertices", c.max_vertices},
                        {"block_size", c.block_size},
                        {"p_cross", c.p_cross},
                        {"repeats", c.repeats}};
}

/// Sets one key from a JSON value, with type checking by key name.
inline void set_config_value(TrainConfig& c, const std::string& key, const nlohmann::json& v) {
  auto count = [&](std::size_t& dst) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("config key '" + key + "' must be a non-negative integer");
    }
    dst = v.get<std::size_t>();
  };
  auto real = [&](double& dst) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    dst = v.get<double>();
  };
  auto text = [&](std::string& dst) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    dst = v.get<std::string>();
  };
  if (key == "task") {
    std::string s;
    text(s);
    c.task = task_from_string(s);
  } else if (key == "optimizer") {
    std::string s;
    text(s);
    if (s == "adam") c.optimizer = OptimizerKind::adam;
    else if (s == "sgd") c.optimizer = OptimizerKind::sgd;
    else throw ConfigError("config key 'optimizer' must be 'adam' or 'sgd'; got '" + s + "'");
  } else if (key == "seed") {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("config key 'seed' must be a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  } else if (key == "dataset") text(c.dataset);
  else if (key == "data_dir") text(c.data_dir);
  else if (key == "model") text(c.model);
  else if (key == "kl_norm") text(c.kl_norm);
  else if (key == "aggregator") text(c.aggregator);
  else if (key == "epochs") count(c.epochs);
  else if (key == "hidden") count(c.hidden);
  else if (key == "transitions") count(c.transitions);
  else if (key == "layers") count(c.layers);
  else if (key == "latent") count(c.latent);
  else if (key == "pool_dim") count(c.pool_dim);
  else if (key == "batch_size") count(c.batch_size);
  else if (key == "train_size") count(c.train_size);
  else if (key == "test_size") count(c.test_size);
  else if (key == "num_graphs") count(c.num_graphs);
  else if (key == "min_vertices") count(c.min_vertices);
  else if (key == "max_vertices") count(c.max_vertices);
  else if (key == "block_size") count(c.block_size);
  else if (key == "repeats") count(c.repeats);
  else if (key == "learning_rate") real(c.learning_rate);
  else if (key == "weight_decay") real(c.weight_decay);
  else if (key == "test_fraction") real(c.test_fraction);
  else if (key == "p_cross") real(c.p_cross);
  else throw ConfigError("unknown config key '" + key + "'");
}

/// `key=value` override; the value is parsed as JSON when possible and as a
/// bare string otherwise.
inline void apply_override(TrainConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq), raw = assignment.substr(eq + 1);
  nlohmann::json v = nlohmann::json::parse(raw, nullptr, false);
  if (v.is_discarded()) v = raw;
  set_config_value(c, key, v);
}

inline TrainConfig config_from_json(const nlohmann::json& j, TrainConfig base = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) set_config_value(base, it.key(), it.value());
  return base;
}

/// Per-run record: loss per epoch, final metrics, wall time, config echo.
struct EvalReport {
  TaskKind task = TaskKind::graph;
  std::vector<double> losses;
  std::map<std::string, double> metrics;
  double wall_seconds = 0.0;
  TrainConfig config;
  /// Link task: final vertex embeddings (mu for the variational model).
  std::optional<DenseMatrix> embeddings;
  /// Free-form dataset facts (vertex/edge counts, dropped lines).
  std::map<std::string, double> dataset_info;

  double metric(const std::string& name) const {
    auto it = metrics.find(name);
    if (it == metrics.end()) throw Error("report has no metric '" + name + "'");
    return it->second;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["task"] = to_string(task);
    j["losses"] = losses;
    j["metrics"] = metrics;
    j["wall_seconds"] = wall_seconds;
    j["config"] = gnnkit::to_json(config);
    j["dataset_info"] = dataset_info;
    return j;
  }

  static std::string csv_header() { return "task,dataset,model,seed,epochs,final_loss,accuracy,auc,ap,wall_seconds"; }

  std::string csv_row() const {
    auto get = [&](const char* k) {
      auto it = metrics.find(k);
      if (it == metrics.end()) return std::string();
      std::ostringstream s;
      s << std::setprecision(10) << it->second;
      return s.str();
    };
    std::string model = config.task == TaskKind::link   ? config.model
                         : config.task == TaskKind::node ? "sage-" + config.aggregator
                                                         : "rgnn-k" + std::to_string(config.transitions);
    std::ostringstream s;
    s << std::setprecision(10) << to_string(task) << ',' << config.dataset << ',' << model << ',' << config.seed << ','
      << config.epochs << ',' << (losses.empty() ? 0.0 : losses.back()) << ',' << get("accuracy") << ','
      << get("auc") << ',' << get("ap") << ',' << wall_seconds;
    return s.str();
  }
};

namespace detail {
using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline std::vector<double> softmax_column(const Tensor& logits, std::size_t col) {
  std::vector<double> p(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    double mx = logits(i, 0);
    for (std::size_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, logits(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < logits.cols(); ++j) z += std::exp(logits(i, j) - mx);
    p[i] = std::exp(logits(i, col) - mx) / z;
  }
  return p;
}

/// Disjoint union of graphs; segment[v] is the source graph of vertex v.
struct Batch {
  Graph graph;
  std::vector<std::size_t> segment;
};

inline Batch disjoint_union(const std::vector<const Graph*>& parts) {
  Batch b;
  std::vector<Edge> edges;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Graph& g = *parts[k];
    if (g.has_vertex_features() || g.has_edge_features()) {
      throw ConfigError("graph classification supports featureless graphs only");
    }
    for (const auto& [u, v] : g.edges()) edges.emplace_back(u + offset, v + offset);
    b.segment.insert(b.segment.end(), g.num_vertices(), k);
    offset += g.num_vertices();
  }
  b.graph = build_graph(offset, edges);
  return b;
}
}  // namespace detail

// ------------------------------------------------------------------ graph task

/// Graph-level logits for a batch: shared-weight RGNN, mean readout per
/// graph, linear output.
inline Tensor rgnn_graph_logits(Tape& tape, const detail::Batch& batch, std::size_t num_graphs, const ModelParams& p,
                                std::size_t transitions) {
  RgnnRunResult run = rgnn_run(tape, batch.graph, p, transitions);
  Tensor readout = segment_mean(tape, run.states.values, batch.segment, num_graphs);
  return tape.add(tape.matmul(readout, p.at("out_graph.W")), p.at("out_graph.b"));
}

/// Trains the recurrent model on a seeded train/test split of `set` and
/// reports test accuracy and AUC (class 1 probability as the score).
inline EvalReport train_graph_classifier(const data::LabeledGraphSet& set, const TrainConfig& config) {
  config.validate();
  const auto t0 = detail::Clock::now();
  if (set.size() < 2) throw DataError("graph classification needs at least 2 graphs");
  if (set.num_classes() < 2) throw DataError("graph classification needs at least 2 classes");

  std::vector<std::size_t> order(set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(config.seed ^ 0x5bd1e995ULL);
  split_rng.shuffle(order);
  std::size_t n_test = config.test_size
                           ? config.test_size
                           : static_cast<std::size_t>(std::llround(config.test_fraction * static_cast<double>(set.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, set.size() - 1);
  std::size_t n_train = config.train_size ? std::min(config.train_size, set.size() - n_test) : set.size() - n_test;
  const std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test),
                                 order.begin() + static_cast<std::ptrdiff_t>(n_test + n_train));
  {
    std::set<int> seen;
    for (auto i : train) seen.insert(set.labels[i]);
    if (seen.size() < 2) throw DataError("training split contains a single class");
  }

  const std::size_t classes = static_cast<std::size_t>(set.num_classes());
  Rng rng(config.seed);
  ModelParams params;
  init_rgnn_params(params, RgnnDims{0, 0, config.hidden, classes}, rng);
  Optimizer opt({config.optimizer, config.learning_rate, 0.9, 0.999, 1e-8, config.weight_decay});

  EvalReport report;
  report.task = TaskKind::graph;
  report.config = config;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(train);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train.size(); start += config.batch_size) {
      const std::size_t stop = std::min(train.size(), start + config.batch_size);
      std::vector<const Graph*> parts;
      std::vector<int> labels;
      for (std::size_t k = start; k < stop; ++k) {
        parts.push_back(&set.graphs[train[k]]);
        labels.push_back(set.labels[train[k]]);
      }
      const auto batch = detail::disjoint_union(parts);
      Tape tape;
      Tensor logits = rgnn_graph_logits(tape, batch, parts.size(), params, config.transitions);
      Tensor loss = cross_entropy(tape, logits, labels);
      params.zero_grad();
      tape.backward(loss);
      opt.step(params);
      epoch_loss += loss.item() * static_cast<double>(parts.size());
    }
    report.losses.push_back(epoch_loss / static_cast<double>(train.size()));
  }

  std::vector<int> labels, preds;
  std::vector<double> scores;
  for (std::size_t start = 0; start < test.size(); start += 256) {
    const std::size_t stop = std::min(test.size(), start + 256);
    std::vector<const Graph*> parts;
    for (std::size_t k = start; k < stop; ++k) {
      parts.push_back(&set.graphs[test[k]]);
      labels.push_back(set.labels[test[k]]);
    }
    const auto batch = detail::disjoint_union(parts);
    Tape tape;
    Tensor logits = rgnn_graph_logits(tape, batch, parts.size(), params, config.transitions);
    const auto p1 = detail::softmax_column(logits, 1);
    scores.insert(scores.end(), p1.begin(), p1.end());
    const auto am = metrics::argmax_rows(logits.value(), logits.cols());
    preds.insert(preds.end(), am.begin(), am.end());
  }
  std::size_t correct = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) correct += labels[k] == preds[k];
  report.metrics["accuracy"] = static_cast<double>(correct) / static_cast<double>(labels.size());
  if (classes == 2) {
    std::vector<int> binary(labels.begin(), labels.end());
    const bool both = std::count(binary.begin(), binary.end(), 1) > 0 && std::count(binary.begin(), binary.end(), 0) > 0;
    if (both) report.metrics["auc"] = metrics::roc_auc(binary, scores).auc;
  }
  report.dataset_info["graphs"] = static_cast<double>(set.size());
  report.dataset_info["train_graphs"] = static_cast<double>(train.size());
  report.dataset_info["test_graphs"] = static_cast<double>(test.size());
  report.wall_seconds = detail::seconds_since(t0);
  return report;
}

// ------------------------------------------------------------------ node task

/// Two GraphSAGE layers (mean or max-pool aggregator), relu between them,
/// cross-entropy on the training mask; reports test accuracy.
inline EvalReport train_node_classifier(const data::NodeDataset& ds, const TrainConfig& config) {
  config.validate();
  const auto t0 = detail::Clock::now();
  const Graph& g = ds.graph;
  const std::size_t n = g.num_vertices();
  if (ds.labels.size() != n || ds.train_mask.size() != n || ds.val_mask.size() != n || ds.test_mask.size() != n) {
    throw DataError("node dataset: labels and masks must have one entry per vertex");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (int(ds.train_mask[i]) + int(ds.val_mask[i]) + int(ds.test_mask[i]) > 1) {
      throw DataError("node dataset: masks overlap at vertex " + std::to_string(i));
    }
  }
  const auto train = ds.indices(ds.train_mask), val = ds.indices(ds.val_mask), test = ds.indices(ds.test_mask);
  if (train.empty() || test.empty()) throw DataError("node dataset: empty train or test mask");
  {
    std::set<int> seen;
    for (auto i : train) seen.insert(ds.labels[i]);
    if (seen.size() < 2) throw DataError("training mask contains a single class");
  }

  const DenseMatrix features = g.has_vertex_features() ? *g.vertex_features() : DenseMatrix::identity(n);
  const Tensor x = Tensor::from_matrix(features);
  const std::size_t in = features.cols(), hidden = config.hidden;
  const std::size_t classes = static_cast<std::size_t>(ds.num_classes);
  const bool pool = config.aggregator == "pool";
  const std::size_t pool1 = config.pool_dim ? config.pool_dim : in;
  const std::size_t pool2 = config.pool_dim ? config.pool_dim : hidden;

  Rng rng(config.seed);
  ModelParams p;
  if (pool) {
    p.add_glorot("sage1.W_pool", in, pool1, rng);
    p.add_zeros("sage1.b_pool", 1, pool1);
  }
  p.add_glorot("sage1.W_self", in, hidden, rng);
  p.add_glorot("sage1.W_neigh", pool ? pool1 : in, hidden, rng);
  p.add_zeros("sage1.b", 1, hidden);
  if (pool) {
    p.add_glorot("sage2.W_pool", hidden, pool2, rng);
    p.add_zeros("sage2.b_pool", 1, pool2);
  }
  p.add_glorot("sage2.W_self", hidden, classes, rng);
  p.add_glorot("sage2.W_neigh", pool ? pool2 : hidden, classes, rng);
  p.add_zeros("sage2.b", 1, classes);

  const NeighborhoodIndex nbr(g);
  auto forward = [&](Tape& tape) {
    if (pool) {
      Tensor h = sage_pool_layer(tape, nbr, x, p.at("sage1.W_pool"), p.at("sage1.b_pool"), p.at("sage1.W_self"),
                                 p.at("sage1.W_neigh"), Activation::relu, p.at("sage1.b"));
      return sage_pool_layer(tape, nbr, h, p.at("sage2.W_pool"), p.at("sage2.b_pool"), p.at("sage2.W_self"),
                             p.at("sage2.W_neigh"), Activation::identity, p.at("sage2.b"));
    }
    Tensor h = sage_mean_layer(tape, nbr, x, p.at("sage1.W_self"), p.at("sage1.W_neigh"), Activation::relu,
                               p.at("sage1.b"));
    return sage_mean_layer(tape, nbr, h, p.at("sage2.W_self"), p.at("sage2.W_neigh"), Activation::identity,
                           p.at("sage2.b"));
  };

  Optimizer opt({config.optimizer, config.learning_rate, 0.9, 0.999, 1e-8, config.weight_decay});
  EvalReport report;
  report.task = TaskKind::node;
  report.config = config;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Tape tape;
    Tensor loss = cross_entropy(tape, forward(tape), ds.labels, train);
    p.zero_grad();
    tape.backward(loss);
    opt.step(p);
    report.losses.push_back(loss.item());
  }

  Tape tape;
  const Tensor logits = forward(tape);
  const auto pred = metrics::argmax_rows(logits.value(), logits.cols());
  auto acc = [&](const std::vector<std::size_t>& rows) {
    std::size_t ok = 0;
    for (auto i : rows) ok += pred[i] == ds.labels[i];
    return rows.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(rows.size());
  };
  report.metrics["accuracy"] = acc(test);
  report.metrics["train_accuracy"] = acc(train);
  if (!val.empty()) report.metrics["val_accuracy"] = acc(val);
  report.dataset_info["vertices"] = static_cast<double>(n);
  report.dataset_info["edges"] = static_cast<double>(g.num_edges());
  report.dataset_info["train"] = static_cast<double>(train.size());
  report.dataset_info["val"] = static_cast<double>(val.size());
  report.dataset_info["test"] = static_cast<double>(test.size());
  report.wall_seconds = detail::seconds_since(t0);
  return report;
}

// ------------------------------------------------------------------ link task

/// GAE or VGAE trained on the training part of a seeded 85/5/10 edge split.
/// Test AUC/AP compare held-out positives with an equal number of sampled
/// non-edges, scored by sigma(z_i^T z_j) (mu for the variational model).
inline EvalReport train_link_predictor(const Graph& g, const TrainConfig& config) {
  config.validate();
  const auto t0 = detail::Clock::now();
  const bool variational = config.model == "vgae";
  const KlNormalization kl_norm = config.kl_norm == "entry" ? KlNormalization::per_entry : KlNormalization::per_vertex;
  const auto split = data::split_edges(g, {}, config.seed, config.seed + 0x51ed27ULL);
  for (const auto& e : split.test_pos) {
    if (split.train.has_edge(e.first, e.second)) throw Error("link split leaked a test edge into training");
  }
  const std::size_t n = g.num_vertices();
  const DenseMatrix features = g.has_vertex_features() ? *g.vertex_features() : DenseMatrix::identity(n);
  const Tensor x = Tensor::from_matrix(features);
  const auto anorm = std::make_shared<const SparseMatrix>(gcn_norm_adjacency(split.train));
  const auto target = std::make_shared<const AdjacencyTarget>(AdjacencyTarget::from_graph(split.train));

  Rng rng(config.seed);
  ModelParams p;
  init_autoencoder_params(p, features.cols(), config.hidden, config.latent, variational, rng);
  Rng noise_rng(config.seed ^ 0xa5a5a5a5ULL);
  Optimizer opt({config.optimizer, config.learning_rate, 0.9, 0.999, 1e-8, config.weight_decay});

  EvalReport report;
  report.task = TaskKind::link;
  report.config = config;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Tape tape;
    Tensor loss;
    if (variational) {
      LatentEmbedding emb = vgae_encode(tape, anorm, x, p, noise_rng);
      loss = tape.add(reconstruction_loss(tape, emb.z, target), kl_loss(tape, *emb.mu, *emb.logvar, kl_norm));
    } else {
      loss = reconstruction_loss(tape, gae_encode(tape, anorm, x, p).z, target);
    }
    p.zero_grad();
    tape.backward(loss);
    opt.step(p);
    report.losses.push_back(loss.item());
  }

  DenseMatrix z;
  {
    Tape tape;
    if (variational) {
      Rng unused(0);
      z = vgae_encode(tape, anorm, x, p, unused).mu->to_matrix();
    } else {
      z = gae_encode(tape, anorm, x, p).z.to_matrix();
    }
  }
  auto evaluate = [&](const std::vector<Edge>& pos, const std::vector<Edge>& neg, const std::string& prefix) {
    if (pos.empty() || neg.empty()) return;
    std::vector<int> labels;
    std::vector<double> scores;
    for (const auto& [u, v] : pos) {
      labels.push_back(1);
      scores.push_back(link_score(z, u, v));
    }
    for (const auto& [u, v] : neg) {
      labels.push_back(0);
      scores.push_back(link_score(z, u, v));
    }
    report.metrics[prefix + "auc"] = metrics::roc_auc(labels, scores).auc;
    report.metrics[prefix + "ap"] = metrics::average_precision(labels, scores);
  };
  evaluate(split.test_pos, split.test_neg, "");
  evaluate(split.val_pos, split.val_neg, "val_");
  report.embeddings = std::move(z);
  report.dataset_info["vertices"] = static_cast<double>(n);
  report.dataset_info["edges"] = static_cast<double>(g.num_edges());
  report.dataset_info["train_edges"] = static_cast<double>(split.train_pos.size());
  report.dataset_info["test_edges"] = static_cast<double>(split.test_pos.size());
  report.wall_seconds = detail::seconds_since(t0);
  return report;
}

// ------------------------------------------------------------------ datasets

/// Resolves config.dataset to a graph set (graph task). Known ids:
/// synthetic-structural, stargazers (data_dir/github_stargazers/git_edges.json +
/// git_target.csv).
inline data::LabeledGraphSet load_graph_task_data(const TrainConfig& c) {
  if (c.dataset == "synthetic-structural") {
    return data::synth_structural_classes(c.num_graphs, c.seed + 1000, c.min_vertices, c.max_vertices);
  }
  if (c.dataset == "stargazers") {
    const std::filesystem::path dir = std::filesystem::path(c.data_dir) / "github_stargazers";
    const auto edges = dir / "git_edges.json", labels = dir / "git_target.csv";
    if (!std::filesystem::exists(edges) || !std::filesystem::exists(labels)) {
      throw ConfigError("dataset 'stargazers' not found under '" + dir.string() +
                        "' (run scripts/fetch_datasets.sh)");
    }
    return data::load_graph_set(edges, labels);
  }
  throw ConfigError("config key 'dataset': unknown graph dataset '" + c.dataset + "'");
}

inline bool is_citation_dataset(const std::string& id) { return id == "cora" || id == "citeseer" || id == "pubmed"; }

/// Cora / Citeseer / PubMed in the content+cites format under
/// data_dir/<id>/<id>.content and <id>.cites.
inline data::NodeDataset load_citation_dataset(const TrainConfig& c) {
  const std::filesystem::path dir = std::filesystem::path(c.data_dir) / c.dataset;
  const auto content = dir / (c.dataset + ".content"), cites = dir / (c.dataset + ".cites");
  if (!std::filesystem::exists(content) || !std::filesystem::exists(cites)) {
    throw ConfigError("dataset '" + c.dataset + "' not found under '" + dir.string() +
                      "' (run scripts/fetch_datasets.sh)");
  }
  data::CitationOptions opt;
  opt.split_seed = c.seed;
  if (std::filesystem::exists(dir / "split.txt")) opt.split_file = dir / "split.txt";
  if (c.dataset == "cora") {
    opt.feature_dim = 1433;
    opt.num_classes = 7;
  } else if (c.dataset == "citeseer") {
    opt.feature_dim = 3703;
    opt.num_classes = 6;
    opt.skip_dangling = true;
  } else {
    opt.feature_dim = 500;
    opt.num_classes = 3;
  }
  return data::load_citation(content, cites, opt);
}

inline data::NodeDataset load_node_task_data(const TrainConfig& c) {
  if (c.dataset == "two-clique") return data::two_clique_node_dataset(c.block_size, c.p_cross, 3, c.seed + 1000);
  if (is_citation_dataset(c.dataset)) return load_citation_dataset(c);
  throw ConfigError("config key 'dataset': unknown node dataset '" + c.dataset + "'");
}

inline Graph load_link_task_data(const TrainConfig& c) {
  if (c.dataset == "two-clique") return data::synth_two_clique(c.block_size, c.p_cross, c.seed + 1000);
  if (is_citation_dataset(c.dataset)) return load_citation_dataset(c).graph;
  throw ConfigError("config key 'dataset': unknown link dataset '" + c.dataset + "'");
}

/// Loads the configured dataset and runs the matching driver.
inline EvalReport run_experiment(const TrainConfig& c) {
  c.validate();
  switch (c.task) {
    case TaskKind::graph:
      return train_graph_classifier(load_graph_task_data(c), c);
    case TaskKind::node: {
      const auto ds = load_node_task_data(c);
      EvalReport r = train_node_classifier(ds, c);
      r.dataset_info["raw_citations"] = static_cast<double>(ds.raw_citation_count);
      r.dataset_info["dropped_citations"] = static_cast<double>(ds.dropped_citations);
      return r;
    }
    case TaskKind::link:
      return train_link_predictor(load_link_task_data(c), c);
  }
  throw ConfigError("unknown task");
}

}  // namespace gnnkit
