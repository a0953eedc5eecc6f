#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "gnnkit/autograd.hpp"
#include "gnnkit/error.hpp"
#include "gnnkit/graph.hpp"
#include "gnnkit/layers.hpp"
#include "gnnkit/random.hpp"
#include "gnnkit/spectral.hpp"

namespace gnnkit {

/// Vertex embeddings z_i. For the variational model mu/logvar are the
/// encoder heads and `noise` the standard-normal draw used for Z.
struct LatentEmbedding {
  Tensor z;
  std::optional<Tensor> mu;
  std::optional<Tensor> logvar;
  std::optional<DenseMatrix> noise;
};

/// Entries sigma(z_i^T z_j).
struct ReconstructedAdjacency {
  DenseMatrix ahat;
};

inline constexpr double kLogvarMin = -10.0;
inline constexpr double kLogvarMax = 10.0;

/// Encoder weights for GAE: enc.W1 (F x hidden), enc.W2 (hidden x latent).
/// For VGAE: enc.W1, enc.W_mu, enc.W_logvar.
inline void init_autoencoder_params(ModelParams& p, std::size_t in_dim, std::size_t hidden, std::size_t latent,
                                    bool variational, Rng& rng) {
  p.add_glorot("enc.W1", in_dim, hidden, rng);
  if (variational) {
    p.add_glorot("enc.W_mu", hidden, latent, rng);
    p.add_glorot("enc.W_logvar", hidden, latent, rng);
  } else {
    p.add_glorot("enc.W2", hidden, latent, rng);
  }
}

/// Two GCN layers: relu(Anorm X W1), then Anorm H W2 (linear).
inline LatentEmbedding gae_encode(Tape& tape, std::shared_ptr<const SparseMatrix> anorm, const Tensor& x,
                                  const ModelParams& p) {
  if (x.rows() != anorm->rows()) throw ShapeError("gae_encode: X rows != vertex count");
  Tensor h = gcn_layer(tape, anorm, x, p.at("enc.W1"), Activation::relu);
  return LatentEmbedding{gcn_layer(tape, anorm, h, p.at("enc.W2"), Activation::identity), {}, {}, {}};
}

/// Shared first GCN layer, separate mu and logvar heads, then
/// Z = mu + exp(logvar / 2) * noise with logvar clamped to [-10, 10].
inline LatentEmbedding vgae_encode(Tape& tape, std::shared_ptr<const SparseMatrix> anorm, const Tensor& x,
                                   const ModelParams& p, Rng& rng) {
  if (x.rows() != anorm->rows()) throw ShapeError("vgae_encode: X rows != vertex count");
  Tensor h = gcn_layer(tape, anorm, x, p.at("enc.W1"), Activation::relu);
  Tensor mu = gcn_layer(tape, anorm, h, p.at("enc.W_mu"), Activation::identity);
  Tensor logvar =
      tape.clamp(gcn_layer(tape, anorm, h, p.at("enc.W_logvar"), Activation::identity), kLogvarMin, kLogvarMax);
  DenseMatrix noise(mu.rows(), mu.cols());
  for (double& v : noise.data()) v = rng.normal();
  Tensor sd = tape.exp(tape.scale(logvar, 0.5));
  Tensor z = tape.add(mu, tape.mul(sd, Tensor::from_matrix(noise)));
  return LatentEmbedding{z, mu, logvar, std::move(noise)};
}

inline ReconstructedAdjacency inner_product_decode(const DenseMatrix& z) {
  const std::size_t n = z.rows();
  ReconstructedAdjacency r{DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < z.cols(); ++k) dot += z(i, k) * z(j, k);
      r.ahat(i, j) = r.ahat(j, i) = Tape::logistic(dot);
    }
  return r;
}

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] inside logs.
inline constexpr double kProbClamp = 1e-7;

/// (N^2 - M') / M' where M' counts the positive entries of the target.
inline double positive_weight(const DenseMatrix& target) {
  double pos = 0.0;
  for (double v : target.data()) pos += v;
  const double total = static_cast<double>(target.size());
  if (pos <= 0.0 || pos >= total) throw DomainError("positive_weight: target has no positives or no negatives");
  return (total - pos) / pos;
}

/// Mean over all N^2 entries of -[w A log Ahat + (1 - A) log(1 - Ahat)].
inline double gae_loss(const DenseMatrix& ahat, const DenseMatrix& a, double pos_weight) {
  if (ahat.rows() != a.rows() || ahat.cols() != a.cols()) throw ShapeError("gae_loss: shape mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double p = ahat.data()[k];
    if (!(p > 0.0 && p < 1.0)) throw DomainError("gae_loss: reconstructed entry outside (0, 1)");
    const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
    const double y = a.data()[k];
    total -= pos_weight * y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
  }
  return total / static_cast<double>(a.size());
}

/// Per-vertex KL(N(mu_i, diag exp(logvar_i)) || N(0, I)).
inline std::vector<double> kl_per_vertex(const DenseMatrix& mu, const DenseMatrix& logvar) {
  if (mu.rows() != logvar.rows() || mu.cols() != logvar.cols()) throw ShapeError("kl: shape mismatch");
  std::vector<double> kl(mu.rows(), 0.0);
  for (std::size_t i = 0; i < mu.rows(); ++i)
    for (std::size_t d = 0; d < mu.cols(); ++d) {
      const double m = mu(i, d), lv = logvar(i, d);
      kl[i] += 0.5 * (m * m + std::exp(lv) - lv - 1.0);
    }
  return kl;
}

/// How the summed KL is scaled next to the per-entry reconstruction mean.
/// per_vertex: (1/N) sum_i KL_i. per_entry: (1/N^2) sum_i KL_i, the ELBO
/// divided by its N^2 reconstruction terms.
enum class KlNormalization { per_vertex, per_entry };

inline double kl_factor(KlNormalization norm, std::size_t n) {
  const double nn = static_cast<double>(n);
  return norm == KlNormalization::per_vertex ? 1.0 / nn : 1.0 / (nn * nn);
}

/// gae_loss + (1/N) sum_i KL_i (or 1/N^2 with per_entry).
inline double vgae_loss(const DenseMatrix& ahat, const DenseMatrix& a, const DenseMatrix& mu, const DenseMatrix& logvar,
                        double pos_weight, KlNormalization norm = KlNormalization::per_vertex) {
  const auto kl = kl_per_vertex(mu, logvar);
  double s = 0.0;
  for (double v : kl) s += v;
  return gae_loss(ahat, a, pos_weight) + s * kl_factor(norm, mu.rows());
}

/// Reconstruction target A + I stored as sorted positive columns per row.
struct AdjacencyTarget {
  std::vector<std::vector<std::size_t>> positives;
  double pos_weight = 1.0;

  std::size_t size() const noexcept { return positives.size(); }

  static AdjacencyTarget from_graph(const Graph& g) {
    AdjacencyTarget t;
    const std::size_t n = g.num_vertices();
    t.positives.resize(n);
    double count = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = t.positives[i];
      row = g.neighbors(i);
      if (!std::binary_search(row.begin(), row.end(), i)) row.insert(std::lower_bound(row.begin(), row.end(), i), i);
      count += static_cast<double>(row.size());
    }
    const double total = static_cast<double>(n) * static_cast<double>(n);
    t.pos_weight = count < total ? (total - count) / count : 1.0;
    return t;
  }

  DenseMatrix dense() const {
    DenseMatrix a(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j : positives[i]) a(i, j) = 1.0;
    return a;
  }
};

namespace detail {
/// log(1 + e^x) without overflow.
inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }
}  // namespace detail

/// Weighted BCE between sigma(Z Z^T) and the target, averaged over all N^2
/// entries, computed from logits one row at a time so no N x N buffer is
/// ever allocated. Matches gae_loss(inner_product_decode(Z), A + I, w)
/// wherever the decoded probabilities are away from the clamp.
///
/// The target and Z Z^T are symmetric, so only pairs j >= i are visited and
/// the gradient d loss / d Z is accumulated in the same pass.
inline Tensor reconstruction_loss(Tape& tape, const Tensor& z, std::shared_ptr<const AdjacencyTarget> target) {
  const std::size_t n = z.rows(), d = z.cols();
  if (target->size() != n) throw ShapeError("reconstruction_loss: target size != Z rows");
  const double w = target->pos_weight;
  const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  const bool want_grad = z.requires_grad();
  auto zv = z.value();
  // column-major copies so the inner loops run over contiguous j
  std::vector<double> zt(d * n), gt(want_grad ? d * n : 0, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) zt[k * n + i] = zv[i * d + k];
  std::vector<double> x(n), dx(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* zi = zv.data() + i * d;
    double* __restrict xs = x.data();
    std::fill(xs + i, xs + n, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      const double a = zi[k];
      const double* __restrict col = zt.data() + k * n;
      for (std::size_t j = i; j < n; ++j) xs[j] += a * col[j];
    }
    const auto& pos = target->positives[i];
    auto q = std::lower_bound(pos.begin(), pos.end(), i);
    double row = 0.0;
    for (std::size_t j = i; j < n; ++j) {
      const double xj = xs[j];
      const bool positive = q != pos.end() && *q == j;
      if (positive) ++q;
      // one exp serves both softplus and the logistic
      const double e = std::exp(-std::abs(xj));
      // e is in (0, 1], so log(1 + e) loses only ~1e-16 absolute against log1p
      const double sp = std::log(1.0 + e) + std::max(xj, 0.0);  // softplus(x)
      const double sg = xj >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      double l;
      if (positive) {
        l = w * (sp - xj);  // w softplus(-x)
        dx[j] = -w * (1.0 - sg);
      } else {
        l = sp;
        dx[j] = sg;
      }
      // off-diagonal pairs stand for both (i, j) and (j, i)
      row += j == i ? l : 2.0 * l;
    }
    total += row;
    if (!want_grad) continue;
    // d/dz_i of sum_{j,k} l(x_jk) is 2 sum_j l'(x_ij) z_j
    const double* __restrict dxs = dx.data();
    for (std::size_t k = 0; k < d; ++k) {
      const double* __restrict col = zt.data() + k * n;
      double* __restrict gcol = gt.data() + k * n;
      double acc = 2.0 * dxs[i] * col[i];
      for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * dxs[j] * col[j];
      gcol[i] += acc;
      const double a = 2.0 * zi[k];
      for (std::size_t j = i + 1; j < n; ++j) gcol[j] += a * dxs[j];
    }
  }
  std::vector<double> dz;
  if (want_grad) {
    dz.resize(n * d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < d; ++k) dz[i * d + k] = gt[k * n + i];
  }
  Tensor out = Tensor::scalar(total * inv);
  return tape.record("reconstruction_loss", {z}, out, [z, out, dz = std::move(dz), inv]() mutable {
    const double g = out.grad()[0] * inv;
    auto gz = z.grad();
    for (std::size_t k = 0; k < dz.size(); ++k) gz[k] += g * dz[k];
  });
}

/// (1/N) sum_i 1/2 sum_d (mu^2 + exp(logvar) - logvar - 1); 1/N^2 with per_entry.
inline Tensor kl_loss(Tape& tape, const Tensor& mu, const Tensor& logvar,
                      KlNormalization norm = KlNormalization::per_vertex) {
  if (mu.rows() != logvar.rows() || mu.cols() != logvar.cols()) throw ShapeError("kl_loss: shape mismatch");
  Tensor terms = tape.sub(tape.add(tape.mul(mu, mu), tape.exp(logvar)), logvar);
  // the constant -1 per entry
  Tensor total = tape.add(tape.sum(terms), Tensor::scalar(-static_cast<double>(mu.size())));
  return tape.scale(total, 0.5 * kl_factor(norm, mu.rows()));
}

/// Link score sigma(z_i^T z_j).
inline double link_score(const DenseMatrix& z, std::size_t i, std::size_t j) {
  double dot = 0.0;
  for (std::size_t k = 0; k < z.cols(); ++k) dot += z(i, k) * z(j, k);
  return Tape::logistic(dot);
}

/// CSV with header vertex_id,dim_0,...,dim_{d-1}.
inline void write_embedding_csv(std::ostream& os, const DenseMatrix& z) {
  os << "vertex_id";
  for (std::size_t k = 0; k < z.cols(); ++k) os << ",dim_" << k;
  os << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    os << i;
    for (std::size_t k = 0; k < z.cols(); ++k) os << ',' << z(i, k);
    os << '\n';
  }
}

}  // namespace gnnkit
