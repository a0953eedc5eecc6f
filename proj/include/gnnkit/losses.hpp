#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gnnkit/autograd.hpp"
#include "gnnkit/error.hpp"

namespace gnnkit {

/// Mean softmax cross-entropy of `logits` rows against integer labels.
/// When `rows` is non-empty only those rows contribute.
inline Tensor cross_entropy(Tape& tape, const Tensor& logits, const std::vector<int>& labels,
                            std::vector<std::size_t> rows = {}) {
  const std::size_t c = logits.cols();
  if (labels.size() != logits.rows()) throw ShapeError("cross_entropy: label count != logits rows");
  if (rows.empty()) {
    rows.resize(logits.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }
  if (rows.empty()) throw ShapeError("cross_entropy: no rows");
  for (std::size_t r : rows) {
    if (r >= logits.rows()) throw ShapeError("cross_entropy: row index out of range");
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= c) {
      throw DomainError("cross_entropy: label " + std::to_string(labels[r]) + " out of range [0, " +
                        std::to_string(c) + ")");
    }
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  std::vector<double> probs(rows.size() * c);
  double total = 0.0;
  for (std::size_t q = 0; q < rows.size(); ++q) {
    const std::size_t r = rows[q];
    double mx = logits(r, 0);
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, logits(r, j));
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += (probs[q * c + j] = std::exp(logits(r, j) - mx));
    for (std::size_t j = 0; j < c; ++j) probs[q * c + j] /= z;
    total += -(logits(r, static_cast<std::size_t>(labels[r])) - mx - std::log(z));
  }
  Tensor out = Tensor::scalar(total * inv);
  return tape.record("cross_entropy", {logits}, out,
                     [logits, out, rows = std::move(rows), probs = std::move(probs), labels, c, inv]() mutable {
                       const double g = out.grad()[0] * inv;
                       auto gl = logits.grad();
                       for (std::size_t q = 0; q < rows.size(); ++q) {
                         const std::size_t r = rows[q];
                         for (std::size_t j = 0; j < c; ++j) {
                           const double target = static_cast<std::size_t>(labels[r]) == j ? 1.0 : 0.0;
                           gl[r * c + j] += g * (probs[q * c + j] - target);
                         }
                       }
                     });
}

/// Mean squared error over all entries.
inline Tensor mse(Tape& tape, const Tensor& x, const Tensor& xhat) {
  if (x.rows() != xhat.rows() || x.cols() != xhat.cols()) throw ShapeError("mse: shape mismatch");
  Tensor d = tape.sub(x, xhat);
  return tape.mean(tape.mul(d, d));
}

/// Mean binary cross-entropy -[w y log p + (1 - y) log(1 - p)] over all
/// entries. Probabilities must lie strictly inside (0, 1).
inline Tensor bce(Tape& tape, const Tensor& p, const Tensor& y, double pos_weight = 1.0) {
  if (p.rows() != y.rows() || p.cols() != y.cols()) throw ShapeError("bce: shape mismatch");
  for (double v : p.value())
    if (!(v > 0.0 && v < 1.0)) throw DomainError("bce: probability outside (0, 1)");
  const std::size_t n = p.size();
  double total = 0.0;
  auto pv = p.value();
  auto yv = y.value();
  for (std::size_t k = 0; k < n; ++k) total -= pos_weight * yv[k] * std::log(pv[k]) + (1.0 - yv[k]) * std::log(1.0 - pv[k]);
  Tensor out = Tensor::scalar(total / static_cast<double>(n));
  return tape.record("bce", {p}, out, [p, y, out, pos_weight, n]() mutable {
    const double g = out.grad()[0] / static_cast<double>(n);
    auto gp = p.grad();
    auto pv = p.value();
    auto yv = y.value();
    for (std::size_t k = 0; k < n; ++k) gp[k] += g * (-pos_weight * yv[k] / pv[k] + (1.0 - yv[k]) / (1.0 - pv[k]));
  });
}

}  // namespace gnnkit
