#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnnkit/error.hpp"
#include "gnnkit/graph.hpp"
#include "gnnkit/matrix.hpp"

namespace gnnkit {

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns of U) of
/// a symmetric matrix. The eigenvectors form the graph Fourier basis.
struct Eigensystem {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// One real value per vertex.
using GraphSignal = std::vector<double>;

struct EigenOptions {
  double symmetry_tolerance = 1e-10;
  double off_diagonal_tolerance = 1e-10;
  int max_sweeps = 100;
  std::size_t max_dimension = 3000;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Converges when the off-diagonal Frobenius norm falls below
/// `off_diagonal_tolerance` times max(1, ||A||_F). Eigenvectors are sign
/// normalized so the first component with magnitude above 1e-12 is
/// positive. Vectors inside a degenerate eigenvalue block carry no ordering
/// guarantee.
inline Eigensystem eigensystem(const DenseMatrix& matrix, const EigenOptions& options = {}) {
  const std::size_t n = matrix.rows();
  if (matrix.cols() != n) throw ShapeError("eigensystem: matrix must be square");
  if (n == 0) throw ShapeError("eigensystem: empty matrix");
  if (n > options.max_dimension) {
    throw ShapeError("eigensystem: dimension " + std::to_string(n) + " exceeds cap " +
                     std::to_string(options.max_dimension));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(matrix(i, j) - matrix(j, i)) > options.symmetry_tolerance) {
        throw DomainError("eigensystem: matrix not symmetric at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      }

  DenseMatrix a = matrix;
  DenseMatrix v = DenseMatrix::identity(n);
  const double scale = std::max(1.0, frobenius_norm(a));
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = off_norm() <= options.off_diagonal_tolerance * scale;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() <= options.off_diagonal_tolerance * scale;
  }
  if (!converged) {
    throw ConvergenceError("eigensystem: Jacobi did not converge in " + std::to_string(options.max_sweeps) +
                           " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  Eigensystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    es.eigenvalues[k] = a(src, src);
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, src)) > 1e-12) {
        sign = v(i, src) > 0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) es.eigenvectors(i, k) = sign * v(i, src);
  }
  return es;
}

/// Eigensystem of a graph Laplacian of the requested kind.
inline Eigensystem laplacian_eigensystem(const Graph& g, LaplacianKind kind = LaplacianKind::symmetric,
                                         const EigenOptions& options = {}) {
  if (kind == LaplacianKind::random_walk) {
    throw DomainError("random-walk Laplacian is not symmetric; use unnormalized or symmetric");
  }
  return eigensystem(laplacian(g, kind), options);
}

namespace detail {
inline void check_signal(const Eigensystem& es, std::span<const double> f, const char* op) {
  if (f.size() != es.size()) {
    throw ShapeError(std::string(op) + ": signal length " + std::to_string(f.size()) + " != " +
                     std::to_string(es.size()));
  }
}
}  // namespace detail

/// Graph Fourier transform: U^T f.
inline GraphSignal gft(const Eigensystem& es, std::span<const double> f) {
  detail::check_signal(es, f, "gft");
  const std::size_t n = es.size();
  GraphSignal out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double fi = f[i];
    auto row = es.eigenvectors.row(i);
    for (std::size_t k = 0; k < n; ++k) out[k] += row[k] * fi;
  }
  return out;
}

/// Inverse transform: U fhat.
inline GraphSignal igft(const Eigensystem& es, std::span<const double> fhat) {
  detail::check_signal(es, fhat, "igft");
  return es.eigenvectors * fhat;
}

/// U diag(ghat) U^T f.
inline GraphSignal spectral_convolve(const Eigensystem& es, std::span<const double> f,
                                     std::span<const double> ghat) {
  detail::check_signal(es, f, "spectral_convolve");
  detail::check_signal(es, ghat, "spectral_convolve");
  auto fhat = gft(es, f);
  for (std::size_t k = 0; k < fhat.size(); ++k) fhat[k] *= ghat[k];
  return igft(es, fhat);
}

/// Spectral filters for one layer: filters[i][j] is the diagonal filter from
/// input channel i to output channel j.
using SpectralFilters = std::vector<std::vector<std::vector<double>>>;

/// Output column j = activation( sum_i U diag(filters[i][j]) U^T H[:, i] ).
inline DenseMatrix spectral_layer_forward(const DenseMatrix& h_prev, const SpectralFilters& filters,
                                          const Eigensystem& es,
                                          const std::function<double(double)>& activation = {}) {
  const std::size_t n = es.size();
  if (h_prev.rows() != n) throw ShapeError("spectral_layer_forward: H rows != eigensystem size");
  if (filters.size() != h_prev.cols()) throw ShapeError("spectral_layer_forward: input channel count mismatch");
  const std::size_t out_channels = filters.empty() ? 0 : filters.front().size();
  for (const auto& per_in : filters) {
    if (per_in.size() != out_channels) throw ShapeError("spectral_layer_forward: ragged filter bank");
    for (const auto& theta : per_in)
      if (theta.size() != n) throw ShapeError("spectral_layer_forward: filter length != N");
  }
  // Transform every input channel once, mix in the spectral domain, then
  // transform each output channel back.
  std::vector<GraphSignal> hats;
  hats.reserve(h_prev.cols());
  for (std::size_t i = 0; i < h_prev.cols(); ++i) hats.push_back(gft(es, h_prev.column(i)));
  DenseMatrix out(n, out_channels);
  for (std::size_t j = 0; j < out_channels; ++j) {
    GraphSignal mixed(n, 0.0);
    for (std::size_t i = 0; i < hats.size(); ++i)
      for (std::size_t k = 0; k < n; ++k) mixed[k] += filters[i][j][k] * hats[i][k];
    const auto col = igft(es, mixed);
    for (std::size_t r = 0; r < n; ++r) out(r, j) = activation ? activation(col[r]) : col[r];
  }
  return out;
}

struct PowerIterationOptions {
  double tolerance = 1e-8;
  int max_iterations = 10000;
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration. Stops when the Rayleigh quotient changes by less than
/// tolerance * max(1, |lambda|).
inline double lambda_max(const DenseMatrix& m, const PowerIterationOptions& options = {}) {
  const std::size_t n = m.rows();
  if (m.cols() != n || n == 0) throw ShapeError("lambda_max: matrix must be square and non-empty");
  std::vector<double> x(n);
  // Deterministic start with components in every direction generically.
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 2.0 * static_cast<double>(i));
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    s = std::sqrt(s);
    if (s == 0.0) return 0.0;
    for (double& e : v) e /= s;
    return s;
  };
  normalize(x);
  double lambda = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    auto y = m * std::span<const double>(x);
    double rq = 0.0;
    for (std::size_t i = 0; i < n; ++i) rq += x[i] * y[i];
    if (normalize(y) == 0.0) return 0.0;
    x = std::move(y);
    if (it > 0 && std::abs(rq - lambda) <= options.tolerance * std::max(1.0, std::abs(rq))) return rq;
    lambda = rq;
  }
  throw ConvergenceError("lambda_max: power iteration did not converge");
}

/// Chebyshev polynomial filter sum_k coeffs[k] T_k(Ltilde) f with
/// Ltilde = 2 L / lambda_max - I. lambda_max is computed by power iteration
/// when not supplied.
inline GraphSignal cheb_filter(const DenseMatrix& l, std::span<const double> coeffs, std::span<const double> f,
                               std::optional<double> lmax = std::nullopt) {
  if (coeffs.empty()) throw DomainError("cheb_filter: empty coefficient list");
  const std::size_t n = l.rows();
  if (l.cols() != n || f.size() != n) throw ShapeError("cheb_filter: dimension mismatch");
  const double lm = lmax ? *lmax : lambda_max(l);
  if (!(lm > 0.0)) throw DomainError("cheb_filter: lambda_max must be positive");

  auto apply_scaled = [&](const std::vector<double>& x) {
    auto y = l * std::span<const double>(x);
    for (std::size_t i = 0; i < n; ++i) y[i] = 2.0 * y[i] / lm - x[i];
    return y;
  };

  std::vector<double> t_prev(f.begin(), f.end());
  GraphSignal out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = coeffs[0] * t_prev[i];
  if (coeffs.size() == 1) return out;
  std::vector<double> t_cur = apply_scaled(t_prev);
  for (std::size_t i = 0; i < n; ++i) out[i] += coeffs[1] * t_cur[i];
  for (std::size_t k = 2; k < coeffs.size(); ++k) {
    auto t_next = apply_scaled(t_cur);
    for (std::size_t i = 0; i < n; ++i) t_next[i] = 2.0 * t_next[i] - t_prev[i];
    for (std::size_t i = 0; i < n; ++i) out[i] += coeffs[k] * t_next[i];
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return out;
}

/// Chebyshev polynomial T_k evaluated at a scalar.
inline double chebyshev(std::size_t k, double x) {
  double t0 = 1.0, t1 = x;
  if (k == 0) return t0;
  for (std::size_t i = 1; i < k; ++i) {
    const double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

/// D~^{-1/2} (A + I) D~^{-1/2} with D~ the degree matrix of A + I.
/// Existing self-loops are replaced by the unit loop.
inline SparseMatrix gcn_norm_adjacency(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  t.reserve(2 * g.num_edges() + n);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edges()[e];
    if (u == v) continue;
    t.emplace_back(u, v, g.weight(e));
    if (!g.directed()) t.emplace_back(v, u, g.weight(e));
  }
  for (std::size_t i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
  std::vector<double> deg(n, 0.0);
  for (const auto& [u, v, w] : t) deg[u] += w;
  for (auto& [u, v, w] : t) w /= std::sqrt(deg[u] * deg[v]);
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace gnnkit
