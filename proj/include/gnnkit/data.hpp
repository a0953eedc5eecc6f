#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gnnkit/error.hpp"
#include "gnnkit/graph.hpp"
#include "gnnkit/random.hpp"

namespace gnnkit::data {

/// A corpus of graphs with one integer class label each.
struct LabeledGraphSet {
  std::vector<Graph> graphs;
  std::vector<int> labels;
  std::string name;

  std::size_t size() const noexcept { return graphs.size(); }
  int num_classes() const {
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  }
};

/// One graph with per-vertex labels and disjoint train/val/test masks.
struct NodeDataset {
  Graph graph;
  std::vector<int> labels;
  int num_classes = 0;
  std::vector<bool> train_mask, val_mask, test_mask;
  std::vector<std::string> class_names;
  std::vector<std::string> vertex_ids;
  std::size_t raw_citation_count = 0;
  std::size_t dropped_citations = 0;

  std::vector<std::size_t> indices(const std::vector<bool>& mask) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) out.push_back(i);
    return out;
  }
};

namespace detail {
inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": cannot parse number '" + s + "'");
  }
}

inline long long parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": cannot parse integer '" + s + "'");
  }
}
}  // namespace detail

// ------------------------------------------------------------ splits

/// Stratified split: `per_class` training vertices from every class, then
/// `val` and `test` vertices drawn from the remainder.
inline void assign_random_masks(NodeDataset& ds, std::size_t per_class, std::size_t val, std::size_t test,
                                std::uint64_t seed) {
  const std::size_t n = ds.labels.size();
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  ds.train_mask.assign(n, false);
  ds.val_mask.assign(n, false);
  ds.test_mask.assign(n, false);
  std::vector<std::size_t> taken(static_cast<std::size_t>(ds.num_classes), 0);
  std::vector<std::size_t> rest;
  for (std::size_t i : order) {
    auto& t = taken[static_cast<std::size_t>(ds.labels[i])];
    if (t < per_class) {
      ++t;
      ds.train_mask[i] = true;
    } else {
      rest.push_back(i);
    }
  }
  if (rest.size() < val + test) {
    throw DataError("dataset too small for split: " + std::to_string(rest.size()) + " vertices left for " +
                    std::to_string(val) + " validation + " + std::to_string(test) + " test");
  }
  for (std::size_t k = 0; k < val; ++k) ds.val_mask[rest[k]] = true;
  for (std::size_t k = val; k < val + test; ++k) ds.test_mask[rest[k]] = true;
}

/// Reads `<vertex id> <train|val|test>` lines.
inline void load_split_file(NodeDataset& ds, const std::filesystem::path& path) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ds.vertex_ids.size(); ++i) index[ds.vertex_ids[i]] = i;
  const std::size_t n = ds.labels.size();
  ds.train_mask.assign(n, false);
  ds.val_mask.assign(n, false);
  ds.test_mask.assign(n, false);
  auto in = detail::open_input(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    if (tok.size() != 2) throw DataError(where + ": expected '<id> <train|val|test>'");
    auto it = index.find(tok[0]);
    if (it == index.end()) throw DataError(where + ": unknown vertex id '" + tok[0] + "'");
    if (tok[1] == "train") ds.train_mask[it->second] = true;
    else if (tok[1] == "val") ds.val_mask[it->second] = true;
    else if (tok[1] == "test") ds.test_mask[it->second] = true;
    else throw DataError(where + ": unknown split '" + tok[1] + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (int(ds.train_mask[i]) + int(ds.val_mask[i]) + int(ds.test_mask[i]) > 1) {
      throw DataError("split file assigns vertex '" + ds.vertex_ids[i] + "' to more than one split");
    }
  }
}

// ------------------------------------------------------------ loaders

struct CitationOptions {
  /// Expected feature width and class count; 0 skips the check.
  std::size_t feature_dim = 0;
  std::size_t num_classes = 0;
  /// Citations naming an id absent from the content file are skipped
  /// instead of rejected (the public Citeseer files contain a few).
  bool skip_dangling = false;
  std::uint64_t split_seed = 0;
  std::optional<std::filesystem::path> split_file;
};

/// Cora-style citation data: content lines `<id> <f_0..f_{F-1}> <label>`,
/// cites lines `<cited> <citing>`. Citations become undirected edges;
/// self-citations are dropped. Class indices follow the sorted label names.
inline NodeDataset load_citation(const std::filesystem::path& content_path, const std::filesystem::path& cites_path,
                                 const CitationOptions& options = {}) {
  NodeDataset ds;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> label_names;
  std::unordered_map<std::string, std::size_t> index;
  {
    auto in = detail::open_input(content_path);
    std::string line;
    std::size_t lineno = 0, width = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto tok = detail::split_ws(line);
      if (tok.empty()) continue;
      const std::string where = content_path.filename().string() + ":" + std::to_string(lineno);
      if (tok.size() < 3) throw DataError(where + ": expected '<id> <features...> <label>'");
      if (width == 0) width = tok.size() - 2;
      if (tok.size() - 2 != width) {
        throw DataError(where + ": feature count " + std::to_string(tok.size() - 2) + " != " + std::to_string(width));
      }
      if (!index.emplace(tok[0], ds.vertex_ids.size()).second) throw DataError(where + ": duplicate id '" + tok[0] + "'");
      ds.vertex_ids.push_back(tok[0]);
      std::vector<double> f(width);
      for (std::size_t k = 0; k < width; ++k) f[k] = detail::parse_double(tok[k + 1], where);
      rows.push_back(std::move(f));
      label_names.push_back(tok.back());
    }
    if (rows.empty()) throw DataError(content_path.string() + ": no vertices");
  }
  const std::size_t n = rows.size(), width = rows.front().size();
  if (options.feature_dim && width != options.feature_dim) {
    throw DataError("feature width " + std::to_string(width) + " != expected " + std::to_string(options.feature_dim));
  }
  std::set<std::string> classes(label_names.begin(), label_names.end());
  ds.class_names.assign(classes.begin(), classes.end());
  if (options.num_classes && ds.class_names.size() != options.num_classes) {
    throw DataError("class count " + std::to_string(ds.class_names.size()) + " != expected " +
                    std::to_string(options.num_classes));
  }
  ds.num_classes = static_cast<int>(ds.class_names.size());
  for (const auto& name : label_names) {
    ds.labels.push_back(static_cast<int>(
        std::lower_bound(ds.class_names.begin(), ds.class_names.end(), name) - ds.class_names.begin()));
  }

  std::vector<Edge> edges;
  {
    auto in = detail::open_input(cites_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto tok = detail::split_ws(line);
      if (tok.empty()) continue;
      const std::string where = cites_path.filename().string() + ":" + std::to_string(lineno);
      if (tok.size() != 2) throw DataError(where + ": expected '<cited> <citing>'");
      ++ds.raw_citation_count;
      auto a = index.find(tok[0]), b = index.find(tok[1]);
      if (a == index.end() || b == index.end()) {
        if (options.skip_dangling) {
          ++ds.dropped_citations;
          continue;
        }
        throw DataError(where + ": unknown id '" + (a == index.end() ? tok[0] : tok[1]) + "'");
      }
      if (a->second == b->second) {
        ++ds.dropped_citations;
        continue;
      }
      edges.emplace_back(a->second, b->second);
    }
  }
  DenseMatrix x(n, width);
  for (std::size_t i = 0; i < n; ++i) std::copy(rows[i].begin(), rows[i].end(), x.row(i).begin());
  GraphOptions go;
  go.vertex_features = std::move(x);
  ds.graph = build_graph(n, edges, std::move(go));

  if (options.split_file) {
    load_split_file(ds, *options.split_file);
  } else {
    assign_random_masks(ds, 20, 500, 1000, options.split_seed);
  }
  return ds;
}

/// Cora: 2708 vertices, 1433 binary features, 7 classes.
inline NodeDataset load_cora(const std::filesystem::path& content_path, const std::filesystem::path& cites_path,
                             CitationOptions options = {}) {
  options.feature_dim = 1433;
  options.num_classes = 7;
  return load_citation(content_path, cites_path, options);
}

/// JSON `{"<graph_id>": [[u, v], ...]}` plus CSV `graph_id,label` (an
/// optional header row is skipped). Vertex count per graph is the largest
/// endpoint + 1. Graphs are ordered by id (numerically when all ids are
/// integers).
inline LabeledGraphSet load_graph_set(const std::filesystem::path& edges_json_path,
                                      const std::filesystem::path& labels_csv_path) {
  nlohmann::json doc;
  {
    auto in = detail::open_input(edges_json_path);
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(edges_json_path.string() + ": " + e.what());
    }
  }
  if (!doc.is_object()) throw DataError(edges_json_path.string() + ": expected a JSON object of edge lists");

  std::map<std::string, int> labels;
  {
    auto in = detail::open_input(labels_csv_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto comma = line.find(',');
      const std::string where = labels_csv_path.filename().string() + ":" + std::to_string(lineno);
      if (comma == std::string::npos) throw DataError(where + ": expected 'graph_id,label'");
      const std::string id = line.substr(0, comma);
      std::string rest = line.substr(comma + 1);
      if (const auto c2 = rest.find(','); c2 != std::string::npos) rest = rest.substr(0, c2);
      if (lineno == 1 && !rest.empty() && !std::isdigit(static_cast<unsigned char>(rest[0])) && rest[0] != '-') {
        continue;  // header
      }
      const auto v = detail::parse_int(rest, where);
      if (v < 0) throw DataError(where + ": negative label");
      if (!labels.emplace(id, static_cast<int>(v)).second) throw DataError(where + ": duplicate id '" + id + "'");
    }
  }

  std::vector<std::string> ids;
  for (auto it = doc.begin(); it != doc.end(); ++it) ids.push_back(it.key());
  const bool numeric = std::all_of(ids.begin(), ids.end(), [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  });
  if (numeric) {
    std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
  } else {
    std::sort(ids.begin(), ids.end());
  }

  LabeledGraphSet set;
  set.name = edges_json_path.stem().string();
  for (const auto& id : ids) {
    auto lab = labels.find(id);
    if (lab == labels.end()) throw DataError("graph '" + id + "' has no label in " + labels_csv_path.string());
    const auto& list = doc[id];
    if (!list.is_array()) throw DataError("graph '" + id + "': edge list must be an array");
    std::vector<Edge> edges;
    std::size_t n = 1;
    for (const auto& pair : list) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer() ||
          pair[0].get<long long>() < 0 || pair[1].get<long long>() < 0) {
        throw DataError("graph '" + id + "': malformed edge " + pair.dump());
      }
      const auto u = pair[0].get<std::size_t>(), v = pair[1].get<std::size_t>();
      edges.emplace_back(u, v);
      n = std::max({n, u + 1, v + 1});
    }
    set.graphs.push_back(build_graph(n, edges));
    set.labels.push_back(lab->second);
    labels.erase(lab);
  }
  if (!labels.empty()) throw DataError("label file names graph '" + labels.begin()->first + "' with no edge list");
  return set;
}

// ------------------------------------------------------------ edge lists

/// `# n=<N>` header, then `u v [weight]` per stored edge.
inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << "# n=" << g.num_vertices() << '\n' << std::setprecision(17);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    os << g.edges()[e].first << ' ' << g.edges()[e].second;
    if (g.weighted()) os << ' ' << g.weight(e);
    os << '\n';
  }
}

inline Graph read_edge_list(std::istream& is, const std::string& source = "<stream>") {
  std::string line;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  std::vector<double> weights;
  bool any_weight = false, any_plain = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    if (const auto pos = line.find("n="); line.rfind('#', 0) == 0 && pos != std::string::npos) {
      n = static_cast<std::size_t>(detail::parse_int(detail::split_ws(line.substr(pos + 2)).at(0), where));
      continue;
    }
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 2 && tok.size() != 3) throw DataError(where + ": expected 'u v [weight]'");
    const auto u = detail::parse_int(tok[0], where), v = detail::parse_int(tok[1], where);
    if (u < 0 || v < 0) throw DataError(where + ": negative vertex index");
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    if (tok.size() == 3) {
      any_weight = true;
      weights.push_back(detail::parse_double(tok[2], where));
    } else {
      any_plain = true;
      weights.push_back(1.0);
    }
  }
  if (!n) throw DataError(source + ": missing '# n=<N>' header");
  if (any_weight && any_plain) throw DataError(source + ": weights given for some edges but not others");
  GraphOptions opt;
  if (any_weight) opt.weights = std::move(weights);
  return build_graph(*n, edges, std::move(opt));
}

inline Graph read_edge_list(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_edge_list(in, path.string());
}

/// Whitespace- or comma-separated numeric table; returns column `column`.
inline std::vector<double> read_signal_column(const std::filesystem::path& path, std::size_t column) {
  auto in = detail::open_input(path);
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    if (column >= tok.size()) throw DataError(where + ": no column " + std::to_string(column));
    out.push_back(detail::parse_double(tok[column], where));
  }
  return out;
}

// ------------------------------------------------------------ link splits

struct EdgeFractions {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
};

/// Held-out positives and sampled non-edges for link prediction.
struct EdgeSplit {
  Graph train;
  std::vector<Edge> train_pos, val_pos, val_neg, test_pos, test_neg;
};

/// `count` distinct vertex pairs (i < j) that are not edges of g and not in
/// `exclude`.
inline std::vector<Edge> sample_non_edges(const Graph& g, std::size_t count, std::uint64_t seed,
                                          const std::set<Edge>& exclude = {}) {
  const std::size_t n = g.num_vertices();
  std::size_t existing = 0;
  for (const auto& [u, v] : g.edges()) existing += (u != v);
  const std::size_t pairs = n * (n - 1) / 2;
  if (pairs < existing + exclude.size() + count) {
    throw DataError("graph too small: not enough non-edges to sample " + std::to_string(count) + " negatives");
  }
  Rng rng(seed);
  std::set<Edge> chosen;
  std::vector<Edge> out;
  while (out.size() < count) {
    std::size_t u = rng.below(n), v = rng.below(n);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const Edge e{u, v};
    if (g.has_edge(u, v) || exclude.count(e) || chosen.count(e)) continue;
    chosen.insert(e);
    out.push_back(e);
  }
  return out;
}

/// Random split of the undirected non-loop edges into train/val/test
/// positives (counts rounded from the fractions), with an equal number of
/// verified non-edges for val and test. Test negatives come from
/// `eval_seed` so they can be redrawn independently of the split.
inline EdgeSplit split_edges(const Graph& g, const EdgeFractions& fractions, std::uint64_t seed,
                             std::optional<std::uint64_t> eval_seed = std::nullopt) {
  if (g.directed()) throw GraphError("split_edges: undirected graphs only");
  if (fractions.train < 0 || fractions.val < 0 || fractions.test < 0 ||
      fractions.train + fractions.val + fractions.test > 1.0 + 1e-12) {
    throw ConfigError("split_edges: fractions must be non-negative and sum to at most 1");
  }
  std::vector<Edge> pos;
  for (const auto& e : g.edges())
    if (e.first != e.second) pos.push_back(e);
  const std::size_t m = pos.size();
  const auto count = [m](double f) { return static_cast<std::size_t>(std::llround(f * static_cast<double>(m))); };
  const std::size_t n_val = count(fractions.val), n_test = count(fractions.test);
  if ((fractions.val > 0 && n_val == 0) || (fractions.test > 0 && n_test == 0) || n_val + n_test > m) {
    throw DataError("graph too small for requested split: " + std::to_string(m) + " edges");
  }
  const double total = fractions.train + fractions.val + fractions.test;
  const std::size_t n_train =
      std::abs(total - 1.0) < 1e-9 ? m - n_val - n_test : std::min(count(fractions.train), m - n_val - n_test);

  Rng rng(seed);
  rng.shuffle(pos);
  EdgeSplit s;
  s.test_pos.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.val_pos.assign(pos.begin() + static_cast<std::ptrdiff_t>(n_test),
                   pos.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
  s.train_pos.assign(pos.begin() + static_cast<std::ptrdiff_t>(n_test + n_val),
                     pos.begin() + static_cast<std::ptrdiff_t>(n_test + n_val + n_train));
  std::sort(s.train_pos.begin(), s.train_pos.end());

  GraphOptions opt;
  opt.vertex_features = g.vertex_features();
  s.train = build_graph(g.num_vertices(), s.train_pos, std::move(opt));

  s.val_neg = sample_non_edges(g, n_val, seed ^ 0x9e3779b97f4a7c15ULL);
  const std::set<Edge> val_neg(s.val_neg.begin(), s.val_neg.end());
  s.test_neg = sample_non_edges(g, n_test, eval_seed.value_or(seed + 1), val_neg);

  for (const auto& e : s.test_pos) {
    if (s.train.has_edge(e.first, e.second)) throw Error("split_edges: test positive leaked into training graph");
  }
  return s;
}

// ------------------------------------------------------------ synthetic

/// Two complete blocks of `n_per_block` vertices (0..n-1 and n..2n-1) plus
/// Bernoulli(p_cross) edges between the blocks.
inline Graph synth_two_clique(std::size_t n_per_block, double p_cross, std::uint64_t seed) {
  if (n_per_block < 2) throw ConfigError("synth_two_clique: n_per_block must be >= 2");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t i = 0; i < n_per_block; ++i)
      for (std::size_t j = i + 1; j < n_per_block; ++j) edges.emplace_back(b * n_per_block + i, b * n_per_block + j);
  for (std::size_t i = 0; i < n_per_block; ++i)
    for (std::size_t j = 0; j < n_per_block; ++j)
      if (rng.bernoulli(p_cross)) edges.emplace_back(i, n_per_block + j);
  return build_graph(2 * n_per_block, edges);
}

/// Uniform random labeled tree on n vertices from a random Pruefer sequence.
inline std::vector<Edge> random_tree_edges(std::size_t n, Rng& rng) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  if (n == 2) return {{0, 1}};
  std::vector<std::size_t> seq(n - 2);
  for (auto& s : seq) s = rng.below(n);
  std::vector<std::size_t> deg(n, 1);
  for (auto s : seq) ++deg[s];
  std::set<std::size_t> leaves;
  for (std::size_t i = 0; i < n; ++i)
    if (deg[i] == 1) leaves.insert(i);
  for (auto s : seq) {
    const std::size_t leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
    if (--deg[s] == 1) leaves.insert(s);
  }
  const std::size_t a = *leaves.begin(), b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return edges;
}

/// Disjoint cycles of length 3..8 covering n - 1 vertices, plus one
/// isolated vertex, so the edge count is n - 1 like a tree on n vertices.
/// Vertex labels are shuffled.
inline std::vector<Edge> cycle_union_edges(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<Edge> edges;
  std::size_t start = 0, left = n - 1;
  while (left > 0) {
    std::size_t len = left;
    if (left > 8) {
      len = 3 + rng.below(6);
      if (left - len < 3) len = left - 3;  // the remainder must still form a cycle
    }
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t u = perm[start + k], v = perm[start + (k + 1) % len];
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    start += len;
    left -= len;
  }
  return edges;
}

/// Featureless structural classification set. Class 0: uniform random
/// trees. Class 1: disjoint short cycles plus one isolated vertex. Both
/// classes have the same vertex count distribution and exactly n - 1 edges,
/// so the mean degree is identical and only multi-hop structure separates
/// them.
inline LabeledGraphSet synth_structural_classes(std::size_t count, std::uint64_t seed, std::size_t min_vertices = 12,
                                                std::size_t max_vertices = 30) {
  if (count < 2 || min_vertices < 4 || max_vertices < min_vertices) {
    throw ConfigError("synth_structural_classes: need count >= 2 and 4 <= min_vertices <= max_vertices");
  }
  Rng rng(seed);
  LabeledGraphSet set;
  set.name = "synthetic-structural";
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = min_vertices + rng.below(max_vertices - min_vertices + 1);
    const int label = static_cast<int>(k % 2);
    const auto edges = label == 0 ? random_tree_edges(n, rng) : cycle_union_edges(n, rng);
    set.graphs.push_back(build_graph(n, edges));
    set.labels.push_back(label);
  }
  return set;
}

/// Node dataset on the two-clique graph: label = block, identity features,
/// `train_per_class` training vertices per block and the rest split evenly
/// between validation and test.
inline NodeDataset two_clique_node_dataset(std::size_t n_per_block, double p_cross, std::size_t train_per_class,
                                           std::uint64_t seed) {
  NodeDataset ds;
  Graph g = synth_two_clique(n_per_block, p_cross, seed);
  const std::size_t n = g.num_vertices();
  GraphOptions opt;
  opt.vertex_features = DenseMatrix::identity(n);
  std::vector<Edge> edges = g.edges();
  ds.graph = build_graph(n, edges, std::move(opt));
  ds.num_classes = 2;
  ds.class_names = {"block0", "block1"};
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels.push_back(i < n_per_block ? 0 : 1);
    ds.vertex_ids.push_back(std::to_string(i));
  }
  const std::size_t rest = n - 2 * train_per_class;
  assign_random_masks(ds, train_per_class, rest / 2, rest - rest / 2, seed + 7);
  return ds;
}

}  // namespace gnnkit::data
