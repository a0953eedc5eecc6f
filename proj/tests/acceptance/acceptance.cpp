// Acceptance harness: one PASS/FAIL/SKIP line per criterion.
//
//   gnnkit_acceptance [--criterion N] [--data-dir DIR]
//
// Exit status: 0 all selected criteria passed, 1 a criterion failed, 77 the
// selected criterion needs a dataset that is not present.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gnnkit/gnnkit.hpp"

using namespace gnnkit;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status = Status::pass;
  std::string detail;
};

struct Context {
  fs::path data_dir;
  fs::path source_dir = GNNKIT_SOURCE_DIR;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// fn(0) .. fn(count - 1), at most one job per hardware thread at a time.
template <class F>
auto run_parallel(std::size_t count, F fn) {
  using R = decltype(fn(std::size_t{0}));
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  std::vector<R> out;
  for (std::size_t start = 0; start < count; start += width) {
    std::vector<std::future<R>> batch;
    for (std::size_t i = start; i < std::min(count, start + width); ++i) batch.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  DenseMatrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

/// Connected graph: random labeled tree plus Bernoulli(p) extra edges.
Graph random_connected(std::size_t n, double p, Rng& rng, GraphOptions opt = {}) {
  auto edges = data::random_tree_edges(n, rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  return build_graph(n, edges, std::move(opt));
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TrainConfig load_config(const Context& ctx, const std::string& name) {
  std::ifstream in(ctx.source_dir / "configs" / (name + ".json"));
  if (!in) throw ConfigError("missing config " + name);
  TrainConfig c = config_from_json(nlohmann::json::parse(in));
  c.data_dir = ctx.data_dir.string();
  return c;
}

bool citation_present(const Context& ctx, const std::string& id) {
  return fs::exists(ctx.data_dir / id / (id + ".content")) && fs::exists(ctx.data_dir / id / (id + ".cites"));
}

// ------------------------------------------------------------------ C1

Outcome five_vertex_golden(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = build_graph(5, {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 4}});
  const DenseMatrix printed_d{{3, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 2, 0, 0}, {0, 0, 0, 3, 0}, {0, 0, 0, 0, 1}};
  const DenseMatrix printed_a{{0, 1, 1, 1, 0}, {1, 0, 0, 0, 0}, {1, 0, 0, 1, 0}, {1, 0, 1, 0, 1}, {0, 0, 0, 1, 0}};
  // As typeset, with +1 at (2,3); (3,2) reads -1, so the printed matrix is not symmetric.
  const DenseMatrix printed_l{
      {3, -1, -1, -1, 0}, {-1, 1, 0, 0, 0}, {-1, 0, 2, 1, 0}, {-1, 0, -1, 3, -1}, {0, 0, 0, -1, 1}};

  const DenseMatrix d = degree(g), a = adjacency(g), l = laplacian(g);
  const bool d_ok = d == printed_d, a_ok = a == printed_a;
  const bool l_is_d_minus_a = l == printed_d - printed_a;
  std::vector<std::string> mismatches;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (l(i, j) != printed_l(i, j)) mismatches.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  const bool l_ok = l_is_d_minus_a && mismatches.size() == 1 && mismatches[0] == "(2,3)";

  // The commented eigenvalues (0, 0.70, 1.38, 3.62, 4.30) belong to D - A.
  const auto es = eigensystem(l);
  const double printed_lambda[5] = {0.0, 0.70, 1.38, 3.62, 4.30};
  double lam_err = 0.0;
  for (std::size_t k = 0; k < 5; ++k) lam_err = std::max(lam_err, std::abs(es.eigenvalues[k] - printed_lambda[k]));
  const double secs = seconds_since(t0);

  Outcome o;
  o.status = d_ok && a_ok && l_ok && lam_err < 0.005 && secs < 1.0 ? Status::pass : Status::fail;
  o.detail = std::string("D ") + (d_ok ? "exact" : "MISMATCH") + ", A " + (a_ok ? "exact" : "MISMATCH") + ", L " +
             (l_is_d_minus_a ? "= D - A exact" : "!= D - A") + "; printed L differs only at " +
             (mismatches.empty() ? std::string("none") : mismatches[0]) + " (printed +1, D - A gives -1)" +
             ", eigenvalues within " + sci(lam_err) + " of the 2-decimal printed spectrum, " + fmt(secs * 1e3, 3) +
             " ms";
  return o;
}

// ------------------------------------------------------------------ C2

Outcome spectral_suite(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20201);
  double round_trip = 0.0, parseval = 0.0, recon = 0.0, cheb = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(29);
    const Graph g = random_connected(n, rng.uniform(0.0, 0.5), rng);
    const LaplacianKind kind = trial % 2 ? LaplacianKind::symmetric : LaplacianKind::unnormalized;
    const DenseMatrix l = laplacian(g, kind);
    const auto es = eigensystem(l);
    const DenseMatrix& u = es.eigenvectors;

    // U diag(lambda) U^T against L
    DenseMatrix rec(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += u(i, k) * es.eigenvalues[k] * u(j, k);
        rec(i, j) = s;
      }
    recon = std::max(recon, frobenius_norm(rec - l) / frobenius_norm(l));

    std::vector<double> f(n);
    for (double& v : f) v = rng.uniform(-1.0, 1.0);
    const auto fhat = gft(es, f);
    const auto back = igft(es, fhat);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = back[i] - f[i];
    round_trip = std::max(round_trip, norm2(diff) / norm2(f));
    parseval = std::max(parseval, std::abs(norm2(fhat) - norm2(f)) / norm2(f));

    // Chebyshev filter against the same polynomial applied in the spectrum;
    // T_k(x) = cos(k arccos x) on [-1, 1].
    const double lmax = es.eigenvalues.back();
    std::vector<double> coeffs(1 + rng.below(6));
    for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
    std::vector<double> ghat(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = std::clamp(2.0 * es.eigenvalues[k] / lmax - 1.0, -1.0, 1.0);
      double s = 0.0;
      for (std::size_t m = 0; m < coeffs.size(); ++m) s += coeffs[m] * std::cos(static_cast<double>(m) * std::acos(x));
      ghat[k] = s;
    }
    const auto spec = spectral_convolve(es, f, ghat);
    const auto poly = cheb_filter(l, coeffs, f, lmax);
    for (std::size_t i = 0; i < n; ++i) cheb = std::max(cheb, std::abs(spec[i] - poly[i]));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.status = round_trip < 1e-8 && parseval < 1e-8 && recon < 1e-8 && cheb < 1e-6 && secs < 30.0 ? Status::pass
                                                                                                 : Status::fail;
  o.detail = "100 connected graphs, N<=30: round trip " + sci(round_trip) + ", Parseval " + sci(parseval) +
             ", reconstruction " + sci(recon) + ", cheb vs spectral " + sci(cheb) + ", " + fmt(secs, 3) + " s";
  return o;
}

// ------------------------------------------------------------------ C3

Outcome gradient_suite(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cases = standard_grad_cases();
  std::size_t failed = 0, resampled = 0;
  double worst = 0.0;
  std::string worst_name, failures;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto r = run_grad_case(cases[k], 20, 7000 + k, 1e-4);
    resampled += r.resampled;
    if (r.worst_rel_error >= worst) {
      worst = r.worst_rel_error;
      worst_name = r.name;
    }
    if (!r.passed) {
      ++failed;
      failures += " " + r.name;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.status = failed == 0 && secs < 60.0 ? Status::pass : Status::fail;
  o.detail = std::to_string(cases.size()) + " ops/layers x 20 instances, worst relative error " + sci(worst) + " (" +
             worst_name + "), " + std::to_string(resampled) + " instances redrawn near kinks, " + fmt(secs, 3) + " s" +
             (failed ? "; failed:" + failures : "");
  return o;
}

// ------------------------------------------------------------------ C4

double oracle_auc(const std::vector<int>& y, const std::vector<double>& s) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j]) continue;
      pairs += 1.0;
      wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

/// sum over distinct thresholds t (descending) of (recall_t - recall_prev) * precision_t.
double oracle_ap(const std::vector<int>& y, const std::vector<double>& s) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  const double npos = std::accumulate(y.begin(), y.end(), 0.0);
  double ap = 0.0, prev = 0.0;
  for (double t : thresholds) {
    double tp = 0.0, sel = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (s[k] < t) continue;
      sel += 1.0;
      tp += y[k];
    }
    ap += (tp / npos - prev) * (tp / sel);
    prev = tp / npos;
  }
  return ap;
}

Outcome metrics_oracles(const Context&) {
  Rng rng(4040);
  double auc_err = 0.0, ap_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(300);
    std::vector<int> y(n);
    std::vector<double> s(n);
    const bool coarse = trial % 2 == 0;  // many tied scores
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.bernoulli(0.3 + 0.4 * rng.uniform()) ? 1 : 0;
      s[i] = coarse ? std::floor(rng.uniform(0.0, 5.0)) / 4.0 : rng.uniform() + 0.3 * y[i];
    }
    y[0] = 1;
    y[1] = 0;
    auc_err = std::max(auc_err, std::abs(metrics::roc_auc(y, s).auc - oracle_auc(y, s)));
    ap_err = std::max(ap_err, std::abs(metrics::average_precision(y, s) - oracle_ap(y, s)));
  }
  Outcome o;
  o.status = auc_err <= 1e-12 && ap_err <= 1e-12 ? Status::pass : Status::fail;
  o.detail = "100 instances (half with heavy ties): max |AUC - pairwise| " + sci(auc_err) + ", max |AP - step sum| " +
             sci(ap_err);
  return o;
}

// ------------------------------------------------------------------ C5

struct Stat {
  double mean = 0.0, std = 0.0;
};

Stat stat(const std::vector<double>& v) {
  Stat s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(v.size()));
  return s;
}

Outcome link_prediction(const Context& ctx) {
  if (!citation_present(ctx, "cora") || !citation_present(ctx, "citeseer")) {
    return {Status::skip, "Cora/Citeseer not found under " + ctx.data_dir.string() + " (scripts/fetch_datasets.sh)"};
  }
  struct Target {
    std::string dataset, model;
    double auc, ap;
  };
  // PubMed is optional and not attempted here: the loss visits all N^2 vertex
  // pairs every epoch, about 3.9e8 at N = 19717, so 10 runs take hours.
  const std::vector<Target> targets = {{"cora", "gae", 0.871, 0.890},
                                 {"cora", "vgae", 0.873, 0.892},
                                 {"citeseer", "gae", 0.858, 0.868},
                                 {"citeseer", "vgae", 0.869, 0.878}};
  Outcome o;
  std::map<std::string, double> dataset_secs;
  for (const auto& t : targets) {
    const auto t0 = std::chrono::steady_clock::now();
    const TrainConfig base = load_config(ctx, "link_" + t.dataset + "_" + t.model);
    const Graph g = load_link_task_data(base);
    const auto reports = run_parallel(10, [&](std::size_t seed) {
      TrainConfig c = base;
      c.seed = seed;
      return train_link_predictor(g, c);
    });
    std::vector<double> aucs, aps;
    for (const auto& r : reports) {
      aucs.push_back(r.metric("auc"));
      aps.push_back(r.metric("ap"));
    }
    const Stat auc = stat(aucs), ap = stat(aps);
    const bool ok = std::abs(auc.mean - t.auc) <= 0.04 && std::abs(ap.mean - t.ap) <= 0.04;
    if (!ok) o.status = Status::fail;
    o.detail += (o.detail.empty() ? "" : "; ") + t.dataset + "/" + t.model + " AUC " + fmt(auc.mean, 3) + "+-" +
                fmt(auc.std, 2) + " (target " + fmt(t.auc, 3) + "), AP " + fmt(ap.mean, 3) + "+-" + fmt(ap.std, 2) +
                " (target " + fmt(t.ap, 3) + "), " +
                fmt(seconds_since(t0), 3) + " s" + (ok ? "" : " OUT OF TOLERANCE");
    dataset_secs[t.dataset] += seconds_since(t0);
  }
  // the 15 min per dataset figure is a laptop-CPU target, reported but not gated
  for (const auto& [name, secs] : dataset_secs) {
    o.detail += "; " + name + " total " + fmt(secs, 4) + " s" + (secs < 900.0 ? "" : " (over the 900 s target)");
  }
  return o;
}

// ------------------------------------------------------------------ C6

Outcome node_classification(const Context& ctx) {
  if (!citation_present(ctx, "cora")) {
    return {Status::skip, "Cora not found under " + ctx.data_dir.string() + " (scripts/fetch_datasets.sh)"};
  }
  const auto t0 = std::chrono::steady_clock::now();
  const TrainConfig mean_cfg = load_config(ctx, "node_cora_mean"), pool_cfg = load_config(ctx, "node_cora_pool");
  // one split per seed, shared by both aggregators
  const auto splits = run_parallel(5, [&](std::size_t seed) {
    TrainConfig c = mean_cfg;
    c.seed = seed;
    return load_node_task_data(c);
  });
  // job 2s runs the mean aggregator on seed s, job 2s + 1 the pool aggregator
  const auto acc = run_parallel(10, [&](std::size_t job) {
    TrainConfig c = job % 2 == 0 ? mean_cfg : pool_cfg;
    c.seed = job / 2;
    return train_node_classifier(splits[job / 2], c).metric("accuracy");
  });
  std::vector<double> mean_acc, pool_acc;
  std::size_t pool_wins = 0;
  for (std::size_t s = 0; s < 5; ++s) {
    mean_acc.push_back(acc[2 * s]);
    pool_acc.push_back(acc[2 * s + 1]);
    pool_wins += pool_acc.back() >= mean_acc.back();
  }
  const Stat mean = stat(mean_acc), pool = stat(pool_acc);
  const double secs = seconds_since(t0);
  Outcome o;
  o.status = mean.mean >= 0.60 && pool_wins >= 4 && pool.mean >= 0.65 && pool.mean <= 0.85 && secs < 300.0
                 ? Status::pass
                 : Status::fail;
  o.detail = "Cora 5 seeds: mean aggregator " + fmt(mean.mean, 3) + "+-" + fmt(mean.std, 2) + ", pool " +
             fmt(pool.mean, 3) + "+-" + fmt(pool.std, 2) + ", pool >= mean in " + std::to_string(pool_wins) +
             "/5 runs, " + fmt(secs, 3) + " s (limit 300 s, " +
             std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " threads)";
  return o;
}

// ------------------------------------------------------------------ C7

Outcome depth_trend(const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrainConfig synth = load_config(ctx, "graph_synthetic");
  auto mean_auc = [&](TrainConfig c, std::size_t k) {
    double s = 0.0;
    c.transitions = k;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      c.seed = seed;
      s += run_experiment(c).metric("auc");
    }
    return s / 3.0;
  };
  const double a1 = mean_auc(synth, 1), a4 = mean_auc(synth, 4);
  const double synth_secs = seconds_since(t0);
  const bool synth_ok = a4 >= a1 + 0.05 && a4 >= 0.8 && synth_secs < 600.0;
  Outcome o;
  o.detail = "synthetic structural (3 seeds): AUC k=1 " + fmt(a1, 3) + ", k=4 " + fmt(a4, 3) + ", " +
             fmt(synth_secs, 3) + " s (limit 600 s)";
  bool star_ok = true;
  if (fs::exists(ctx.data_dir / "github_stargazers" / "git_edges.json")) {
    const auto t1 = std::chrono::steady_clock::now();
    TrainConfig star = load_config(ctx, "graph_stargazers");
    const auto set = load_graph_task_data(star);
    star.transitions = 1;
    const double s1 = train_graph_classifier(set, star).metric("auc");
    star.transitions = 8;
    const double s8 = train_graph_classifier(set, star).metric("auc");
    star_ok = s8 - s1 >= 0.05;
    o.detail += "; Stargazers AUC k=1 " + fmt(s1, 4) + ", k=8 " + fmt(s8, 4) + ", " + fmt(seconds_since(t1), 3) + " s";
  } else {
    o.detail += "; Stargazers not downloaded, corpus part not evaluated";
  }
  o.status = synth_ok && star_ok ? Status::pass : Status::fail;
  return o;
}

// ------------------------------------------------------------------ C8

struct PropertyTally {
  std::vector<std::string> failed;
  std::size_t checks = 0;
  void expect(bool ok, const std::string& name) {
    ++checks;
    if (!ok && std::find(failed.begin(), failed.end(), name) == failed.end()) failed.push_back(name);
  }
};

Tensor T(const DenseMatrix& m) { return Tensor::from_matrix(m); }

DenseMatrix permute_rows(const DenseMatrix& m, const std::vector<std::size_t>& perm) {
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(perm[i], j) = m(i, j);
  return out;
}

struct Weights {
  ModelParams rgnn;
  DenseMatrix w_gcn, w_pool, b_pool, w_self, w_neigh;
};

std::vector<DenseMatrix> spatial_outputs(const Graph& g, const Weights& w) {
  Tape t;
  const DenseMatrix& h = *g.vertex_features();
  const auto run = rgnn_run(t, g, w.rgnn, 3);
  const auto a = std::make_shared<const SparseMatrix>(gcn_norm_adjacency(g));
  const NeighborhoodIndex nbr(g);
  return {run.states.values.to_matrix(),
          output_vertex(t, run.states, g, w.rgnn).to_matrix(),
          gcn_layer(t, a, T(h), T(w.w_gcn), Activation::relu).to_matrix(),
          sage_mean_layer(t, nbr, T(h), T(w.w_self), T(w.w_neigh), Activation::relu).to_matrix(),
          sage_pool_layer(t, nbr, T(h), T(w.w_pool), T(w.b_pool), T(w.w_self), T(w.w_neigh), Activation::relu)
              .to_matrix()};
}

Weights random_weights(const Graph& g, Rng& rng) {
  Weights w;
  init_rgnn_params(w.rgnn, rgnn_dims_for(g, 4, 2), rng);
  w.w_gcn = random_matrix(3, 2, rng);
  w.w_pool = random_matrix(3, 3, rng);
  w.b_pool = random_matrix(1, 3, rng);
  w.w_self = random_matrix(3, 2, rng);
  w.w_neigh = random_matrix(3, 2, rng);
  return w;
}

Outcome property_suite(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  PropertyTally tally;
  Rng rng(8080);

  // permutation equivariance of every spatial layer and the GAE encoder
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.below(15);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.3)) edges.emplace_back(i, j);
    GraphOptions opt;
    opt.vertex_features = random_matrix(n, 3, rng);
    opt.edge_features = random_matrix(edges.size(), 2, rng);
    const Graph g = build_graph(n, edges, opt);
    const Weights w = random_weights(g, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const Graph pg = permute(g, perm);
    const auto a = spatial_outputs(g, w), b = spatial_outputs(pg, w);
    for (std::size_t k = 0; k < a.size(); ++k)
      tally.expect(max_abs_diff(b[k], permute_rows(a[k], perm)) < 1e-12, "permutation equivariance");

    ModelParams p;
    init_autoencoder_params(p, 3, 4, 2, false, rng);
    Tape t;
    const auto za = gae_encode(t, std::make_shared<const SparseMatrix>(gcn_norm_adjacency(g)), T(*g.vertex_features()), p)
                        .z.to_matrix();
    const auto zb =
        gae_encode(t, std::make_shared<const SparseMatrix>(gcn_norm_adjacency(pg)), T(*pg.vertex_features()), p)
            .z.to_matrix();
    tally.expect(max_abs_diff(zb, permute_rows(za, perm)) < 1e-12, "permutation equivariance");
  }

  // aggregators ignore neighbor order: shuffled and flipped edge lists give identical outputs
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(12);
    const Graph base = random_connected(n, 0.3, rng);
    GraphOptions opt;
    opt.vertex_features = random_matrix(n, 3, rng);
    std::vector<Edge> edges = base.edges();
    const Graph g1 = build_graph(n, edges, opt);
    rng.shuffle(edges);
    for (auto& e : edges)
      if (rng.bernoulli(0.5)) std::swap(e.first, e.second);
    const Graph g2 = build_graph(n, edges, opt);
    const Weights w = random_weights(g1, rng);
    const auto a = spatial_outputs(g1, w), b = spatial_outputs(g2, w);
    for (std::size_t k = 0; k < a.size(); ++k) tally.expect(a[k] == b[k], "aggregator order invariance");
  }

  // locality: k transitions or k stacked layers see only the k-hop neighborhood
  {
    const std::size_t n = 10;
    std::vector<Edge> path;
    for (std::size_t i = 0; i + 1 < n; ++i) path.emplace_back(i, i + 1);
    for (std::size_t k = 1; k <= 4; ++k) {
      GraphOptions o1, o2;
      o1.vertex_features = random_matrix(n, 3, rng);
      o2.vertex_features = o1.vertex_features;
      for (std::size_t c = 0; c < 3; ++c) (*o2.vertex_features)(n - 1, c) += 3.0;
      const Graph g1 = build_graph(n, path, o1), g2 = build_graph(n, path, o2);
      const Weights w = random_weights(g1, rng);
      Tape t;
      const DenseMatrix r1 = rgnn_run(t, g1, w.rgnn, k).states.values.to_matrix();
      const DenseMatrix r2 = rgnn_run(t, g2, w.rgnn, k).states.values.to_matrix();
      const NeighborhoodIndex nbr(g1);
      const auto a = std::make_shared<const SparseMatrix>(gcn_norm_adjacency(g1));
      const DenseMatrix ws = random_matrix(3, 3, rng), wn = random_matrix(3, 3, rng);
      Tensor m1 = T(*o1.vertex_features), m2 = T(*o2.vertex_features), c1 = m1, c2 = m2;
      for (std::size_t layer = 0; layer < k; ++layer) {
        m1 = sage_mean_layer(t, nbr, m1, T(ws), T(wn), Activation::tanh);
        m2 = sage_mean_layer(t, nbr, m2, T(ws), T(wn), Activation::tanh);
        c1 = gcn_layer(t, a, c1, T(ws), Activation::tanh);
        c2 = gcn_layer(t, a, c2, T(ws), Activation::tanh);
      }
      const DenseMatrix mm1 = m1.to_matrix(), mm2 = m2.to_matrix(), cc1 = c1.to_matrix(), cc2 = c2.to_matrix();
      bool far_same = true, near_moves = false;
      for (std::size_t i = 0; i + k < n - 1; ++i)
        for (std::size_t c = 0; c < 3; ++c)
          far_same = far_same && r1(i, c) == r2(i, c) && mm1(i, c) == mm2(i, c) && cc1(i, c) == cc2(i, c);
      for (std::size_t c = 0; c < 3; ++c) near_moves = near_moves || r1(n - 1 - k, c) != r2(n - 1 - k, c);
      tally.expect(far_same && near_moves, "locality");
    }
  }

  // decoder symmetry and KL nonnegativity
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(20), d = 1 + rng.below(8);
    const DenseMatrix z = random_matrix(n, d, rng, -2.0, 2.0);
    const DenseMatrix ahat = inner_product_decode(z).ahat;
    tally.expect(ahat == ahat.transpose(), "decoder symmetry");
    const DenseMatrix mu = random_matrix(n, d, rng, -3.0, 3.0), logvar = random_matrix(n, d, rng, -6.0, 6.0);
    for (double kl : kl_per_vertex(mu, logvar)) tally.expect(kl >= 0.0, "KL nonnegativity");
    const DenseMatrix zero(n, d);
    for (double kl : kl_per_vertex(zero, zero)) tally.expect(kl == 0.0, "KL nonnegativity");
  }

  // link splits never leak held-out positives and sample true non-edges
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_connected(20 + rng.below(40), 0.1, rng);
    const auto s = data::split_edges(g, {}, rng.next());
    bool ok = s.train.num_edges() == s.train_pos.size();
    for (const auto& e : s.test_pos) ok = ok && !s.train.has_edge(e.first, e.second);
    for (const auto& e : s.val_pos) ok = ok && !s.train.has_edge(e.first, e.second);
    for (const auto& e : s.test_neg) ok = ok && !g.has_edge(e.first, e.second) && e.first != e.second;
    for (const auto& e : s.val_neg) ok = ok && !g.has_edge(e.first, e.second) && e.first != e.second;
    tally.expect(ok, "split leak-freedom");
  }

  // determinism: same config and seed, identical losses, metrics and embeddings
  {
    TrainConfig link;
    link.task = TaskKind::link;
    link.dataset = "two-clique";
    link.model = "vgae";
    link.epochs = 40;
    link.seed = 9;
    const auto a = run_experiment(link), b = run_experiment(link);
    tally.expect(a.losses == b.losses && a.metrics == b.metrics && *a.embeddings == *b.embeddings, "determinism");
    TrainConfig graph;
    graph.num_graphs = 60;
    graph.epochs = 3;
    graph.transitions = 2;
    const auto c = run_experiment(graph), d = run_experiment(graph);
    tally.expect(c.losses == d.losses && c.metrics == d.metrics, "determinism");
    TrainConfig node;
    node.task = TaskKind::node;
    node.dataset = "two-clique";
    node.aggregator = "pool";
    node.epochs = 20;
    const auto e = run_experiment(node), f = run_experiment(node);
    tally.expect(e.losses == f.losses && e.metrics == f.metrics, "determinism");
  }

  const double secs = seconds_since(t0);
  Outcome o;
  o.status = tally.failed.empty() && secs < 120.0 ? Status::pass : Status::fail;
  o.detail = std::to_string(tally.checks) +
             " checks over permutation equivariance, aggregator order invariance, locality, decoder symmetry, KL "
             "nonnegativity, split leak-freedom, determinism, " +
             fmt(secs, 3) + " s";
  for (const auto& f : tally.failed) o.detail += "; FAILED " + f;
  return o;
}

struct Criterion {
  int number;
  std::string name;
  std::function<Outcome(const Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gnnkit acceptance criteria"};
  int only = 0;
  std::string data_dir = (fs::path(GNNKIT_SOURCE_DIR) / "data").string();
  app.add_option("--criterion", only, "Run a single criterion (1-8); default runs all")->check(CLI::Range(0, 8));
  app.add_option("--data-dir", data_dir, "Directory holding downloaded datasets");
  CLI11_PARSE(app, argc, argv);

  const Context ctx{data_dir};
  const std::vector<Criterion> criteria = {
      {1, "five_vertex_golden", five_vertex_golden},           {2, "spectral_suite", spectral_suite},
      {3, "gradient_suite", gradient_suite},       {4, "metrics_oracles", metrics_oracles},
      {5, "link_prediction", link_prediction},  {6, "node_classification", node_classification},
      {7, "depth_trend", depth_trend},          {8, "property_suite", property_suite},
  };

  bool any_fail = false, any_skip = false;
  for (const auto& c : criteria) {
    if (only && c.number != only) continue;
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    std::cout << tag << "  C" << c.number << " " << c.name << ": " << o.detail << std::endl;
    any_fail = any_fail || o.status == Status::fail;
    any_skip = any_skip || o.status == Status::skip;
  }
  if (any_fail) return 1;
  return only && any_skip ? 77 : 0;
}
