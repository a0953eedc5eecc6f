// gnnkit command line: experiment drivers and diagnostics.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime or numeric failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gnnkit/gnnkit.hpp"
#include "json.hpp"

using namespace gnnkit;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct TrainArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repeats;
};

void add_train_flags(CLI::App* cmd, TrainArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", args.overrides, "Override a config key (key=value), repeatable");
  cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", args.seed, "Base seed; replica i uses seed + i");
  cmd->add_option("--repeats", args.repeats, "Number of seeded replicas")->check(CLI::PositiveNumber);
}

TrainConfig resolve_config(const TrainArgs& args, TaskKind task) {
  TrainConfig c;
  c.task = task;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config '" + args.config_path + "' is not valid JSON");
    c = config_from_json(j, c);
  }
  for (const auto& kv : args.overrides) apply_override(c, kv);
  if (args.seed) c.seed = *args.seed;
  if (args.repeats) c.repeats = *args.repeats;
  if (c.task != task) {
    throw ConfigError("config key 'task' is '" + to_string(c.task) + "' but the subcommand runs '" + to_string(task) +
                      "'");
  }
  c.validate();
  return c;
}

/// Replicas run concurrently (seed + i), at most one per hardware thread;
/// results come back in seed order.
std::vector<EvalReport> run_replicas(const TrainConfig& base) {
  std::vector<TrainConfig> configs(base.repeats, base);
  for (std::size_t i = 0; i < configs.size(); ++i) configs[i].seed = base.seed + i;
  const std::size_t width = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
  std::vector<EvalReport> reports;
  for (std::size_t start = 0; start < configs.size(); start += width) {
    std::vector<std::future<EvalReport>> batch;
    for (std::size_t i = start; i < std::min(configs.size(), start + width); ++i) {
      batch.push_back(std::async(std::launch::async, [&c = configs[i]] { return run_experiment(c); }));
    }
    for (auto& f : batch) reports.push_back(f.get());
  }
  return reports;
}

nlohmann::json summarize(const std::vector<EvalReport>& reports) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : reports)
    for (const auto& [k, v] : r.metrics) values[k].push_back(v);
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [k, v] : values) {
    double mean = 0.0, var = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double x : v) var += (x - mean) * (x - mean);
    s[k + "_mean"] = mean;
    s[k + "_std"] = std::sqrt(var / static_cast<double>(v.size()));
  }
  return s;
}

void write_outputs(const fs::path& out, const TrainConfig& config, const std::vector<EvalReport>& reports) {
  fs::create_directories(out);
  nlohmann::json j;
  j["config"] = to_json(config);
  j["runs"] = nlohmann::json::array();
  for (const auto& r : reports) j["runs"].push_back(r.to_json());
  if (reports.size() == 1) {
    j["metrics"] = reports.front().metrics;
  }
  j["summary"] = summarize(reports);
  std::ofstream(out / "report.json") << j.dump(2) << '\n';

  std::ofstream csv(out / "metrics.csv");
  csv << EvalReport::csv_header() << '\n';
  for (const auto& r : reports) csv << r.csv_row() << '\n';

  if (config.task == TaskKind::link && reports.front().embeddings) {
    std::ofstream emb(out / "embeddings.csv");
    write_embedding_csv(emb, *reports.front().embeddings);
  }
}

int cmd_train(const TrainArgs& args, TaskKind task) {
  const TrainConfig config = resolve_config(args, task);
  const auto reports = run_replicas(config);
  write_outputs(args.out_dir, config, reports);
  const auto summary = summarize(reports);
  for (const auto& [k, v] : summary.items()) {
    if (k.ends_with("_mean")) {
      const std::string name = k.substr(0, k.size() - 5);
      std::cout << name << ": " << std::setprecision(4) << v.get<double>() << " +- "
                << summary[name + "_std"].get<double>() << '\n';
    }
  }
  std::cout << "wrote " << (fs::path(args.out_dir) / "report.json").string() << '\n';
  return 0;
}

struct SpectralArgs {
  std::string graph_path, signal_path, out_dir = "out", kind = "unnormalized";
  std::size_t column = 1;
};

int cmd_spectral_demo(const SpectralArgs& args) {
  const Graph g = data::read_edge_list(fs::path(args.graph_path));
  LaplacianKind kind;
  if (args.kind == "unnormalized") kind = LaplacianKind::unnormalized;
  else if (args.kind == "symmetric") kind = LaplacianKind::symmetric;
  else throw ConfigError("--kind must be 'unnormalized' or 'symmetric'");
  std::vector<double> f;
  if (args.signal_path.empty()) {
    f.assign(g.num_vertices(), 1.0);
  } else {
    f = data::read_signal_column(args.signal_path, args.column);
  }
  if (f.size() != g.num_vertices()) {
    throw ConfigError("signal has " + std::to_string(f.size()) + " values for " + std::to_string(g.num_vertices()) +
                      " vertices");
  }
  const auto es = laplacian_eigensystem(g, kind);
  const auto fhat = gft(es, f);
  const auto back = igft(es, fhat);
  double residual = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    residual += (back[i] - f[i]) * (back[i] - f[i]);
    norm += f[i] * f[i];
  }
  residual = std::sqrt(residual) / std::max(std::sqrt(norm), 1e-300);

  fs::create_directories(args.out_dir);
  std::ofstream csv(fs::path(args.out_dir) / "spectrum.csv");
  csv << "k,lambda,fhat\n" << std::setprecision(17);
  std::cout << " k      lambda        fhat\n";
  for (std::size_t k = 0; k < es.size(); ++k) {
    csv << k << ',' << es.eigenvalues[k] << ',' << fhat[k] << '\n';
    // a zero eigenvalue can come out as -1e-17; show it as 0
    const double lambda = std::abs(es.eigenvalues[k]) < 1e-12 ? 0.0 : es.eigenvalues[k];
    std::cout << std::setw(2) << k << std::fixed << std::setprecision(6) << std::setw(12) << lambda
              << std::setw(12) << fhat[k] << '\n';
  }
  std::cout << std::scientific << std::setprecision(3) << "round-trip residual " << residual << '\n';
  if (!(residual < 1e-8)) {
    std::cerr << "round-trip residual exceeds 1e-8\n";
    return kExitRuntime;
  }
  return 0;
}

/// sigmoid with the derivative deliberately given as y instead of y (1 - y).
GradCase corrupted_sigmoid_case() {
  return {"corrupted_sigmoid", [](Rng& rng) {
            Tensor x = detail::uniform_tensor(3, 2, rng, -2.0, 2.0);
            Tensor w = detail::uniform_tensor(3, 2, rng);
            return GradInstance{{x}, [x, w](Tape& t) {
                                  Tensor out(x.rows(), x.cols());
                                  for (std::size_t k = 0; k < out.size(); ++k)
                                    out.value()[k] = Tape::logistic(x.value()[k]);
                                  out = t.record("corrupted_sigmoid", {x}, out, [x, out]() mutable {
                                    for (std::size_t k = 0; k < out.size(); ++k)
                                      x.grad()[k] += out.grad()[k] * out.value()[k];
                                  });
                                  return detail::contract(t, out, w);
                                }};
          }};
}

int cmd_gradcheck(std::size_t instances, std::uint64_t seed, bool include_corrupted) {
  auto cases = standard_grad_cases();
  if (include_corrupted) cases.push_back(corrupted_sigmoid_case());
  std::size_t failed = 0;
  std::cout << std::left << std::setw(28) << "case" << std::setw(10) << "result" << "worst rel error\n";
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto r = run_grad_case(cases[k], instances, seed + k);
    failed += !r.passed;
    std::cout << std::left << std::setw(28) << r.name << std::setw(10) << (r.passed ? "pass" : "FAIL")
              << std::scientific << std::setprecision(2) << r.worst_rel_error << '\n';
  }
  std::cout << (cases.size() - failed) << "/" << cases.size() << " cases passed\n";
  return failed ? kExitRuntime : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gnnkit: graph neural network experiments"};
  app.require_subcommand(1);

  TrainArgs graph_args, node_args, link_args;
  add_train_flags(app.add_subcommand("train-graph", "Graph classification with the recurrent model"), graph_args);
  add_train_flags(app.add_subcommand("train-node", "Vertex classification with two GraphSAGE layers"), node_args);
  add_train_flags(app.add_subcommand("train-link", "Link prediction with GAE / VGAE"), link_args);

  SpectralArgs spectral;
  auto* demo = app.add_subcommand("spectral-demo", "Laplacian spectrum and GFT of a signal");
  demo->add_option("--graph", spectral.graph_path, "Edge-list file ('# n=<N>' header)")->required()->check(CLI::ExistingFile);
  demo->add_option("--signal", spectral.signal_path, "CSV of per-vertex values; default is a constant signal")
      ->check(CLI::ExistingFile);
  demo->add_option("--column", spectral.column, "Signal column in the CSV")->capture_default_str();
  demo->add_option("--kind", spectral.kind, "unnormalized | symmetric")->capture_default_str();
  demo->add_option("--out", spectral.out_dir, "Output directory")->capture_default_str();

  std::size_t instances = 20;
  std::uint64_t grad_seed = 1;
  bool corrupted = false;
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of every op and layer");
  grad->add_option("--instances", instances, "Random instances per case")->capture_default_str();
  grad->add_option("--seed", grad_seed, "Base seed")->capture_default_str();
  grad->add_flag("--include-corrupted", corrupted, "Add a case with a wrong backward rule (must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("train-graph")) return cmd_train(graph_args, TaskKind::graph);
    if (app.got_subcommand("train-node")) return cmd_train(node_args, TaskKind::node);
    if (app.got_subcommand("train-link")) return cmd_train(link_args, TaskKind::link);
    if (app.got_subcommand("spectral-demo")) return cmd_spectral_demo(spectral);
    if (app.got_subcommand("gradcheck")) return cmd_gradcheck(instances, grad_seed, corrupted);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
