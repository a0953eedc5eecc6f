#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gnnkit/error.hpp"

namespace gnnkit {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("DenseMatrix: data length " + std::to_string(data_.size()) +
                       " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("DenseMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matrix product: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

inline std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw ShapeError("matrix-vector product: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix difference: shape mismatch");
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c.data()[k] -= b.data()[k];
  return c;
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sum: shape mismatch");
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c.data()[k] += b.data()[k];
  return c;
}

inline double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

/// Compressed sparse row matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Builds from CSR buffers; validates offsets and per-row column order.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values)
      : rows_(rows),
        cols_(cols),
        offsets_(std::move(row_offsets)),
        indices_(std::move(col_indices)),
        values_(std::move(values)) {
    if (offsets_.size() != rows_ + 1 || offsets_.front() != 0 || offsets_.back() != indices_.size() ||
        indices_.size() != values_.size()) {
      throw ShapeError("SparseMatrix: inconsistent CSR buffers");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (offsets_[i + 1] < offsets_[i]) throw ShapeError("SparseMatrix: offsets not monotone");
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        if (indices_[k] >= cols_) throw ShapeError("SparseMatrix: column index out of range");
        if (k > offsets_[i] && indices_[k] <= indices_[k - 1]) {
          throw ShapeError("SparseMatrix: column indices not strictly increasing in row " + std::to_string(i));
        }
      }
    }
  }

  /// Builds from (row, col, value) triplets. Duplicates are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<std::tuple<std::size_t, std::size_t, double>> trips) {
    std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::size_t> offsets(rows + 1, 0);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    idx.reserve(trips.size());
    val.reserve(trips.size());
    for (std::size_t k = 0; k < trips.size(); ++k) {
      const auto [r, c, v] = trips[k];
      if (r >= rows || c >= cols) throw ShapeError("SparseMatrix: triplet out of range");
      if (!idx.empty() && k > 0 && std::get<0>(trips[k - 1]) == r && idx.back() == c) {
        val.back() += v;
        continue;
      }
      idx.push_back(c);
      val.push_back(v);
      offsets[r + 1] += 1;
    }
    for (std::size_t i = 0; i < rows; ++i) offsets[i + 1] += offsets[i];
    return SparseMatrix(rows, cols, std::move(offsets), std::move(idx), std::move(val));
  }

  static SparseMatrix from_dense(const DenseMatrix& d) {
    std::vector<std::size_t> offsets(d.rows() + 1, 0);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      for (std::size_t j = 0; j < d.cols(); ++j) {
        if (d(i, j) != 0.0) {
          idx.push_back(j);
          val.push_back(d(i, j));
        }
      }
      offsets[i + 1] = idx.size();
    }
    return SparseMatrix(d.rows(), d.cols(), std::move(offsets), std::move(idx), std::move(val));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const noexcept { return offsets_; }
  const std::vector<std::size_t>& col_indices() const noexcept { return indices_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::span<const std::size_t> row_indices(std::size_t i) const {
    return {indices_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  DenseMatrix densify() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) d(i, indices_[k]) = values_[k];
    return d;
  }

  SparseMatrix transpose() const {
    std::vector<std::tuple<std::size_t, std::size_t, double>> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) t.emplace_back(indices_[k], i, values_[k]);
    return from_triplets(cols_, rows_, std::move(t));
  }

  /// Y = this * X for row-major X with `width` columns.
  void multiply(std::span<const double> x, std::size_t width, std::span<double> y) const {
    for (std::size_t i = 0; i < rows_; ++i) {
      double* out = y.data() + i * width;
      std::fill(out, out + width, 0.0);
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        const double a = values_[k];
        const double* in = x.data() + indices_[k] * width;
        for (std::size_t j = 0; j < width; ++j) out[j] += a * in[j];
      }
    }
  }

  DenseMatrix operator*(const DenseMatrix& x) const {
    if (x.rows() != cols_) throw ShapeError("sparse-dense product: dimension mismatch");
    DenseMatrix y(rows_, x.cols());
    multiply(x.data(), x.cols(), y.data());
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> indices_;
  std::vector<double> values_;
};

}  // namespace gnnkit
