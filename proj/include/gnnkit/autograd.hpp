#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gnnkit/error.hpp"
#include "gnnkit/matrix.hpp"

namespace gnnkit {

/// Dense 2-D array that can take part in reverse-mode differentiation.
///
/// Tensor is a handle: copies share the same storage, so a parameter held
/// in ModelParams and the same parameter used on a tape are one object.
/// Vectors are represented as n x 1 (or 1 x n for row biases).
class Tensor {
 public:
  Tensor() : s_(std::make_shared<Storage>()) {}
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0, bool requires_grad = false)
      : s_(std::make_shared<Storage>()) {
    s_->rows = rows;
    s_->cols = cols;
    s_->value.assign(rows * cols, fill);
    s_->requires_grad = requires_grad;
  }
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad = false)
      : s_(std::make_shared<Storage>()) {
    if (values.size() != rows * cols) throw ShapeError("Tensor: value count does not match shape");
    s_->rows = rows;
    s_->cols = cols;
    s_->value = std::move(values);
    s_->requires_grad = requires_grad;
  }

  static Tensor from_matrix(const DenseMatrix& m, bool requires_grad = false) {
    return Tensor(m.rows(), m.cols(), m.data(), requires_grad);
  }
  static Tensor scalar(double v, bool requires_grad = false) { return Tensor(1, 1, v, requires_grad); }

  std::size_t rows() const noexcept { return s_->rows; }
  std::size_t cols() const noexcept { return s_->cols; }
  std::size_t size() const noexcept { return s_->value.size(); }
  std::string shape_string() const { return std::to_string(rows()) + "x" + std::to_string(cols()); }

  std::span<double> value() noexcept { return s_->value; }
  std::span<const double> value() const noexcept { return s_->value; }
  double operator()(std::size_t i, std::size_t j) const { return s_->value[i * s_->cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return s_->value[i * s_->cols + j]; }
  double item() const {
    if (size() != 1) throw ShapeError("Tensor::item on non-scalar " + shape_string());
    return s_->value[0];
  }

  bool requires_grad() const noexcept { return s_->requires_grad; }
  void set_requires_grad(bool on) noexcept { s_->requires_grad = on; }

  bool has_grad() const noexcept { return !s_->grad.empty(); }
  /// Gradient buffer, allocated (zeroed) on first access.
  /// Tensor is a handle, so a const handle still exposes a writable
  /// gradient (backward rules hold const copies of their inputs).
  std::span<double> grad() const {
    if (s_->grad.empty()) s_->grad.assign(size(), 0.0);
    return s_->grad;
  }
  void zero_grad() const { std::fill(s_->grad.begin(), s_->grad.end(), 0.0); }

  DenseMatrix to_matrix() const { return DenseMatrix(rows(), cols(), s_->value); }
  DenseMatrix grad_matrix() const {
    auto g = grad();
    return DenseMatrix(rows(), cols(), std::vector<double>(g.begin(), g.end()));
  }

  /// Deep copy with fresh storage and no gradient.
  Tensor clone(bool requires_grad = false) const { return Tensor(rows(), cols(), s_->value, requires_grad); }

  bool same_storage(const Tensor& other) const noexcept { return s_ == other.s_; }
  const void* id() const noexcept { return s_.get(); }

 private:
  struct Storage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> value;
    mutable std::vector<double> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Storage> s_;
};

/// Sparse row structure used by segment reductions: rows of the input
/// belonging to output row i are indices[offsets[i] .. offsets[i+1]).
struct Segments {
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> indices;

  std::size_t count() const noexcept { return offsets.size() - 1; }
};

/// Records differentiable operations in execution order and replays them
/// backwards. A tape belongs to one thread of execution; build a fresh tape
/// (or clear()) per training step.
class Tape {
 public:
  using BackwardFn = std::function<void()>;

  struct Node {
    std::string op;
    std::vector<Tensor> inputs;
    Tensor output;
    BackwardFn backward;
    /// Distance of the inputs from the op's non-differentiable points
    /// (relu at 0, max ties); +inf for smooth ops.
    double kink_margin = std::numeric_limits<double>::infinity();
  };

  static bool any_requires_grad(std::initializer_list<const Tensor*> ts) {
    for (const Tensor* t : ts)
      if (t->requires_grad()) return true;
    return false;
  }

  /// Appends a node when any input requires gradients; marks the output
  /// accordingly. Returns the output.
  Tensor record(std::string op, std::vector<Tensor> inputs, Tensor output, BackwardFn backward,
                double kink_margin = std::numeric_limits<double>::infinity()) {
    bool need = false;
    for (const auto& t : inputs) need = need || t.requires_grad();
    if (!need) return output;
    output.set_requires_grad(true);
    nodes_.push_back(Node{std::move(op), std::move(inputs), output, std::move(backward), kink_margin});
    return output;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  void clear() { nodes_.clear(); }

  /// Smallest kink margin over all recorded nodes.
  double kink_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& n : nodes_) m = std::min(m, n.kink_margin);
    return m;
  }

  /// Populates d(loss)/d(t) for every requires_grad leaf reachable on the
  /// tape. Leaf gradients accumulate across calls; intermediate gradients
  /// are reset each call.
  void backward(const Tensor& loss) {
    if (loss.size() != 1) throw ShapeError("backward: loss must be scalar, got " + loss.shape_string());
    for (auto& n : nodes_) n.output.zero_grad();
    Tensor l = loss;
    if (!l.requires_grad()) return;
    l.grad()[0] += 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
      if (it->output.has_grad()) it->backward();
    }
  }

  // ---------------------------------------------------------------- ops

  /// A (n x k) * B (k x m). Zero entries of A are skipped, which makes
  /// sparse binary feature matrices cheap.
  Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: " + a.shape_string() + " * " + b.shape_string());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Tensor out(n, m);
    auto av = a.value();
    auto bv = b.value();
    auto ov = out.value();
    for (std::size_t i = 0; i < n; ++i) {
      double* __restrict orow = ov.data() + i * m;
      for (std::size_t p = 0; p < k; ++p) {
        const double x = av[i * k + p];
        if (x == 0.0) continue;
        const double* __restrict brow = bv.data() + p * m;
        for (std::size_t j = 0; j < m; ++j) orow[j] += x * brow[j];
      }
    }
    return record("matmul", {a, b}, out, [a, b, out, n, k, m]() mutable {
      auto g = out.grad();
      auto av = a.value();
      auto bv = b.value();
      if (a.requires_grad()) {
        auto ga = a.grad();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double s = 0.0;
            const double* __restrict grow = g.data() + i * m;
            const double* __restrict brow = bv.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) s += grow[j] * brow[j];
            ga[i * k + p] += s;
          }
      }
      if (b.requires_grad()) {
        auto gb = b.grad();
        for (std::size_t i = 0; i < n; ++i) {
          const double* __restrict grow = g.data() + i * m;
          for (std::size_t p = 0; p < k; ++p) {
            const double x = av[i * k + p];
            if (x == 0.0) continue;
            double* __restrict gbrow = gb.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) gbrow[j] += x * grow[j];
          }
        }
      }
    });
  }

  /// S (constant sparse) * B. The tape shares ownership of S.
  Tensor spmm(std::shared_ptr<const SparseMatrix> s, const Tensor& b) {
    if (s->cols() != b.rows()) {
      throw ShapeError("spmm: " + std::to_string(s->rows()) + "x" + std::to_string(s->cols()) + " * " +
                       b.shape_string());
    }
    Tensor out(s->rows(), b.cols());
    s->multiply(b.value(), b.cols(), out.value());
    return record("spmm", {b}, out, [s, b, out]() mutable {
      auto g = out.grad();
      auto gb = b.grad();
      const std::size_t m = b.cols();
      const auto& off = s->row_offsets();
      const auto& idx = s->col_indices();
      const auto& val = s->values();
      for (std::size_t i = 0; i < s->rows(); ++i) {
        const double* grow = g.data() + i * m;
        for (std::size_t q = off[i]; q < off[i + 1]; ++q) {
          double* dst = gb.data() + idx[q] * m;
          for (std::size_t j = 0; j < m; ++j) dst[j] += val[q] * grow[j];
        }
      }
    });
  }

  Tensor spmm(const SparseMatrix& s, const Tensor& b) { return spmm(std::make_shared<const SparseMatrix>(s), b); }

  /// Elementwise sum; b may also be a 1 x cols row vector broadcast over rows.
  Tensor add(const Tensor& a, const Tensor& b) {
    const bool broadcast = b.rows() == 1 && a.rows() != 1 && b.cols() == a.cols();
    if (!broadcast && (a.rows() != b.rows() || a.cols() != b.cols())) {
      throw ShapeError("add: " + a.shape_string() + " + " + b.shape_string());
    }
    Tensor out = a.clone();
    auto ov = out.value();
    auto bv = b.value();
    const std::size_t c = a.cols();
    for (std::size_t k = 0; k < ov.size(); ++k) ov[k] += broadcast ? bv[k % c] : bv[k];
    return record("add", {a, b}, out, [a, b, out, broadcast, c]() mutable {
      auto g = out.grad();
      if (a.requires_grad()) {
        auto ga = a.grad();
        for (std::size_t k = 0; k < g.size(); ++k) ga[k] += g[k];
      }
      if (b.requires_grad()) {
        auto gb = b.grad();
        for (std::size_t k = 0; k < g.size(); ++k) gb[broadcast ? k % c : k] += g[k];
      }
    });
  }

  Tensor sub(const Tensor& a, const Tensor& b) { return add(a, scale(b, -1.0)); }

  Tensor scale(const Tensor& a, double c) {
    Tensor out = a.clone();
    for (double& v : out.value()) v *= c;
    return record("scale", {a}, out, [a, out, c]() mutable {
      auto g = out.grad();
      auto ga = a.grad();
      for (std::size_t k = 0; k < g.size(); ++k) ga[k] += c * g[k];
    });
  }

  Tensor mul(const Tensor& a, const Tensor& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw ShapeError("elementwise mul: " + a.shape_string() + " * " + b.shape_string());
    }
    Tensor out(a.rows(), a.cols());
    auto av = a.value(), bv = b.value();
    auto ov = out.value();
    for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = av[k] * bv[k];
    return record("mul", {a, b}, out, [a, b, out]() mutable {
      auto g = out.grad();
      auto av = a.value(), bv = b.value();
      if (a.requires_grad()) {
        auto ga = a.grad();
        for (std::size_t k = 0; k < g.size(); ++k) ga[k] += g[k] * bv[k];
      }
      if (b.requires_grad()) {
        auto gb = b.grad();
        for (std::size_t k = 0; k < g.size(); ++k) gb[k] += g[k] * av[k];
      }
    });
  }

  Tensor transpose(const Tensor& a) {
    Tensor out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return record("transpose", {a}, out, [a, out]() mutable {
      auto g = out.grad();
      auto ga = a.grad();
      const std::size_t r = a.rows(), c = a.cols();
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += g[j * r + i];
    });
  }

  /// n x c -> n x 1
  Tensor row_sum(const Tensor& a) { return row_reduce_linear(a, 1.0, "row_sum"); }
  Tensor row_mean(const Tensor& a) {
    if (a.cols() == 0) throw ShapeError("row_mean: zero columns");
    return row_reduce_linear(a, 1.0 / static_cast<double>(a.cols()), "row_mean");
  }

  /// n x c -> n x 1; gradient routed to the arg max (lowest index on ties).
  Tensor row_max(const Tensor& a) {
    if (a.cols() == 0) throw ShapeError("row_max: zero columns");
    const std::size_t n = a.rows(), c = a.cols();
    Tensor out(n, 1);
    std::vector<std::size_t> arg(n);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < c; ++j)
        if (a(i, j) > a(i, best)) best = j;
      arg[i] = best;
      out(i, 0) = a(i, best);
      for (std::size_t j = 0; j < c; ++j)
        if (j != best) margin = std::min(margin, a(i, best) - a(i, j));
    }
    return record(
        "row_max", {a}, out,
        [a, out, arg = std::move(arg), c]() mutable {
          auto g = out.grad();
          auto ga = a.grad();
          for (std::size_t i = 0; i < arg.size(); ++i) ga[i * c + arg[i]] += g[i];
        },
        margin);
  }

  /// Sum of every entry -> 1 x 1.
  Tensor sum(const Tensor& a) {
    double s = 0.0;
    for (double v : a.value()) s += v;
    Tensor out = Tensor::scalar(s);
    return record("sum", {a}, out, [a, out]() mutable {
      const double g = out.grad()[0];
      for (double& v : a.grad()) v += g;
    });
  }

  Tensor mean(const Tensor& a) {
    if (a.size() == 0) throw ShapeError("mean: empty tensor");
    return scale(sum(a), 1.0 / static_cast<double>(a.size()));
  }

  Tensor concat_cols(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw ShapeError("concat_cols: no inputs");
    const std::size_t n = parts.front().rows();
    std::size_t total = 0;
    for (const auto& p : parts) {
      if (p.rows() != n) throw ShapeError("concat_cols: row count mismatch");
      total += p.cols();
    }
    Tensor out(n, total);
    std::size_t offset = 0;
    for (const auto& p : parts) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) out(i, offset + j) = p(i, j);
      offset += p.cols();
    }
    return record("concat_cols", parts, out, [parts, out, total]() mutable {
      auto g = out.grad();
      std::size_t offset = 0;
      for (auto& p : parts) {
        if (p.requires_grad()) {
          auto gp = p.grad();
          for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j) gp[i * p.cols() + j] += g[i * total + offset + j];
        }
        offset += p.cols();
      }
    });
  }

  Tensor sigmoid(const Tensor& a) {
    return unary(a, "sigmoid", [](double x) { return logistic(x); },
                 [](double, double y) { return y * (1.0 - y); });
  }

  Tensor tanh(const Tensor& a) {
    return unary(a, "tanh", [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
  }

  Tensor exp(const Tensor& a) {
    return unary(a, "exp", [](double x) { return std::exp(x); }, [](double, double y) { return y; });
  }

  /// Natural log with the input clamped at 1e-12; negative inputs are a
  /// domain error.
  Tensor log(const Tensor& a) {
    for (double v : a.value())
      if (v < 0.0 || std::isnan(v)) throw DomainError("log: negative or NaN input");
    return unary(a, "log", [](double x) { return std::log(std::max(x, kLogFloor)); },
                 [](double x, double) { return x > kLogFloor ? 1.0 / x : 0.0; });
  }

  Tensor relu(const Tensor& a) {
    double margin = std::numeric_limits<double>::infinity();
    for (double v : a.value()) margin = std::min(margin, std::abs(v));
    return unary(a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
                 [](double x, double) { return x > 0.0 ? 1.0 : 0.0; }, margin);
  }

  /// Values outside [lo, hi] are pinned and receive zero gradient.
  Tensor clamp(const Tensor& a, double lo, double hi) {
    return unary(a, "clamp", [lo, hi](double x) { return std::clamp(x, lo, hi); },
                 [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
  }

  /// Row-wise softmax, stabilized by subtracting the row max.
  Tensor softmax_rows(const Tensor& a) {
    const std::size_t n = a.rows(), c = a.cols();
    if (c == 0) throw DomainError("softmax_rows: zero columns");
    Tensor out(n, c);
    for (std::size_t i = 0; i < n; ++i) {
      double mx = a(i, 0);
      for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, a(i, j));
      if (!std::isfinite(mx)) throw DomainError("softmax_rows: non-finite input");
      double z = 0.0;
      for (std::size_t j = 0; j < c; ++j) z += (out(i, j) = std::exp(a(i, j) - mx));
      for (std::size_t j = 0; j < c; ++j) out(i, j) /= z;
    }
    return record("softmax_rows", {a}, out, [a, out, n, c]() mutable {
      auto g = out.grad();
      auto ga = a.grad();
      auto y = out.value();
      for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < c; ++j) dot += g[i * c + j] * y[i * c + j];
        for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += y[i * c + j] * (g[i * c + j] - dot);
      }
    });
  }

  /// out[r] = a[index[r]]
  Tensor gather_rows(const Tensor& a, std::vector<std::size_t> index) {
    const std::size_t c = a.cols();
    Tensor out(index.size(), c);
    for (std::size_t r = 0; r < index.size(); ++r) {
      if (index[r] >= a.rows()) throw ShapeError("gather_rows: index out of range");
      std::copy_n(a.value().data() + index[r] * c, c, out.value().data() + r * c);
    }
    return record("gather_rows", {a}, out, [a, out, index = std::move(index), c]() mutable {
      auto g = out.grad();
      auto ga = a.grad();
      for (std::size_t r = 0; r < index.size(); ++r)
        for (std::size_t j = 0; j < c; ++j) ga[index[r] * c + j] += g[r * c + j];
    });
  }

  /// out has out_rows rows; out[index[r]] += a[r].
  Tensor scatter_add_rows(const Tensor& a, std::vector<std::size_t> index, std::size_t out_rows) {
    if (index.size() != a.rows()) throw ShapeError("scatter_add_rows: index length != rows");
    const std::size_t c = a.cols();
    Tensor out(out_rows, c);
    for (std::size_t r = 0; r < index.size(); ++r) {
      if (index[r] >= out_rows) throw ShapeError("scatter_add_rows: index out of range");
      for (std::size_t j = 0; j < c; ++j) out(index[r], j) += a(r, j);
    }
    return record("scatter_add_rows", {a}, out, [a, out, index = std::move(index), c]() mutable {
      auto g = out.grad();
      auto ga = a.grad();
      for (std::size_t r = 0; r < index.size(); ++r)
        for (std::size_t j = 0; j < c; ++j) ga[r * c + j] += g[index[r] * c + j];
    });
  }

  /// out[i] = elementwise max over rows seg.indices[seg.offsets[i]..) of a;
  /// empty segments produce zeros. Ties go to the earliest listed row.
  Tensor segment_max(const Tensor& a, const Segments& seg) {
    const std::size_t n = seg.count(), c = a.cols();
    Tensor out(n, c);
    std::vector<std::size_t> arg(n * c, static_cast<std::size_t>(-1));
    std::vector<double> second(c);
    double margin = std::numeric_limits<double>::infinity();
    auto av = a.value();
    auto ov = out.value();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = seg.offsets[i], hi = seg.offsets[i + 1];
      if (lo == hi) continue;
      double* best = ov.data() + i * c;
      std::size_t* who = arg.data() + i * c;
      const double* first = av.data() + seg.indices[lo] * c;
      std::copy(first, first + c, best);
      std::fill(who, who + c, seg.indices[lo]);
      std::fill(second.begin(), second.end(), -std::numeric_limits<double>::infinity());
      for (std::size_t q = lo + 1; q < hi; ++q) {
        const std::size_t r = seg.indices[q];
        const double* row = av.data() + r * c;
        for (std::size_t j = 0; j < c; ++j) {
          if (r == who[j]) continue;  // repeated neighbor
          if (row[j] > best[j]) {
            second[j] = best[j];
            best[j] = row[j];
            who[j] = r;
          } else if (row[j] > second[j]) {
            second[j] = row[j];
          }
        }
      }
      for (std::size_t j = 0; j < c; ++j) margin = std::min(margin, best[j] - second[j]);
    }
    return record(
        "segment_max", {a}, out,
        [a, out, arg = std::move(arg), c]() mutable {
          auto g = out.grad();
          auto ga = a.grad();
          for (std::size_t k = 0; k < arg.size(); ++k)
            if (arg[k] != static_cast<std::size_t>(-1)) ga[arg[k] * c + k % c] += g[k];
        },
        margin);
  }

  static double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  }

  static constexpr double kLogFloor = 1e-12;

 private:
  template <class F, class DF>
  Tensor unary(const Tensor& a, const char* name, F f, DF df,
               double margin = std::numeric_limits<double>::infinity()) {
    Tensor out(a.rows(), a.cols());
    auto av = a.value();
    auto ov = out.value();
    for (std::size_t k = 0; k < av.size(); ++k) ov[k] = f(av[k]);
    return record(
        name, {a}, out,
        [a, out, df]() mutable {
          auto g = out.grad();
          auto ga = a.grad();
          auto av = a.value();
          auto ov = out.value();
          for (std::size_t k = 0; k < g.size(); ++k) ga[k] += g[k] * df(av[k], ov[k]);
        },
        margin);
  }

  Tensor row_reduce_linear(const Tensor& a, double factor, const char* name) {
    const std::size_t n = a.rows(), c = a.cols();
    Tensor out(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < c; ++j) s += a(i, j);
      out(i, 0) = s * factor;
    }
    return record(name, {a}, out, [a, out, factor, c]() mutable {
      auto g = out.grad();
      auto ga = a.grad();
      for (std::size_t k = 0; k < ga.size(); ++k) ga[k] += factor * g[k / c];
    });
  }

  std::vector<Node> nodes_;
};

/// Result of comparing analytic gradients with central differences.
struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t coordinates = 0;
  bool passed = true;
};

/// Central-difference gradient check of a scalar tensor program with
/// respect to x. The program builds its graph on the tape it is given.
///
/// Relative error per coordinate is |analytic - numeric| /
/// max(|analytic|, |numeric|, floor); the floor keeps coordinates with
/// vanishing gradient from dominating on rounding noise.
inline GradCheckReport finite_diff_check(const std::function<Tensor(Tape&)>& program, Tensor x,
                                         double eps = 1e-5, double tol = 1e-4, double floor = 1e-3) {
  GradCheckReport report;
  const bool had = x.requires_grad();
  x.set_requires_grad(true);
  x.zero_grad();
  {
    Tape tape;
    Tensor loss = program(tape);
    if (loss.size() != 1) throw ShapeError("finite_diff_check: program must return a scalar");
    tape.backward(loss);
  }
  const std::vector<double> analytic(x.grad().begin(), x.grad().end());
  auto eval = [&] {
    Tape tape;
    return program(tape).item();
  };
  auto xv = x.value();
  report.coordinates = xv.size();
  for (std::size_t k = 0; k < xv.size(); ++k) {
    const double saved = xv[k];
    xv[k] = saved + eps;
    const double fp = eval();
    xv[k] = saved - eps;
    const double fm = eval();
    xv[k] = saved;
    const double numeric = (fp - fm) / (2.0 * eps);
    const double abs_err = std::abs(analytic[k] - numeric);
    const double rel = abs_err / std::max({std::abs(analytic[k]), std::abs(numeric), floor});
    report.max_abs_error = std::max(report.max_abs_error, abs_err);
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_index = k;
    }
  }
  report.passed = report.max_rel_error < tol;
  x.zero_grad();
  x.set_requires_grad(had);
  return report;
}

}  // namespace gnnkit
