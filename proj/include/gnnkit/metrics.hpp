#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gnnkit/error.hpp"

namespace gnnkit::metrics {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

/// Labels and predictions are binary; nonzero means the positive class.
inline ConfusionCounts confusion(std::span<const int> labels, std::span<const int> predictions) {
  if (labels.size() != predictions.size()) throw ShapeError("confusion: length mismatch");
  if (labels.empty()) throw ShapeError("confusion: empty input");
  ConfusionCounts c;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const bool actual = labels[k] != 0, predicted = predictions[k] != 0;
    if (actual && predicted) ++c.tp;
    else if (!actual && predicted) ++c.fp;
    else if (!actual && !predicted) ++c.tn;
    else ++c.fn;
  }
  return c;
}

namespace detail {
inline std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace detail

// Each rate is std::nullopt when its denominator is zero.
inline std::optional<double> accuracy(const ConfusionCounts& c) { return detail::ratio(c.tp + c.tn, c.total()); }
inline std::optional<double> precision(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fp); }
inline std::optional<double> recall(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fn); }
inline std::optional<double> tpr(const ConfusionCounts& c) { return recall(c); }
/// FP / (FP + FN). Not the usual false positive rate; kept for reports that define it this way.
inline std::optional<double> fpr_over_errors(const ConfusionCounts& c) { return detail::ratio(c.fp, c.fp + c.fn); }
/// FP / (FP + TN); used for ROC curves.
inline std::optional<double> fpr_conventional(const ConfusionCounts& c) { return detail::ratio(c.fp, c.fp + c.tn); }

struct RocPoint {
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;   // starts at (0,0), ends at (1,1)
  std::vector<double> thresholds;  // score >= threshold is positive; first is +inf
};

struct RocResult {
  RocCurve curve;
  double auc = 0.0;
};

namespace detail {
/// Indices sorted by descending score; stable so equal scores keep input order.
inline std::vector<std::size_t> rank_descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

inline std::pair<std::size_t, std::size_t> class_counts(std::span<const int> labels) {
  std::size_t pos = 0;
  for (int l : labels) pos += l != 0;
  return {pos, labels.size() - pos};
}
}  // namespace detail

/// ROC curve with one point per distinct score and its trapezoid AUC.
/// Tied scores share a threshold, so a tied positive/negative pair counts 1/2.
inline RocResult roc_auc(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw ShapeError("roc_auc: length mismatch");
  const auto [npos, nneg] = detail::class_counts(labels);
  if (npos == 0 || nneg == 0) throw DomainError("roc_auc: both classes must be present");
  const auto order = detail::rank_descending(scores);

  RocResult r;
  r.curve.points.push_back({0.0, 0.0});
  r.curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  // Twice the area in units of (1/npos)(1/nneg), kept integral until the end.
  std::size_t tp = 0, fp = 0, area2 = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double s = scores[order[k]];
    std::size_t dtp = 0, dfp = 0;
    while (k < order.size() && scores[order[k]] == s) {
      (labels[order[k]] != 0 ? dtp : dfp) += 1;
      ++k;
    }
    area2 += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    r.curve.points.push_back({static_cast<double>(fp) / static_cast<double>(nneg),
                              static_cast<double>(tp) / static_cast<double>(npos)});
    r.curve.thresholds.push_back(s);
  }
  r.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(npos) * static_cast<double>(nneg));
  return r;
}

/// AP = sum_k (R_k - R_{k-1}) P_k over distinct score thresholds, ranked
/// by descending score.
inline double average_precision(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw ShapeError("average_precision: length mismatch");
  const auto [npos, nneg] = detail::class_counts(labels);
  (void)nneg;
  if (npos == 0) throw DomainError("average_precision: no positive labels");
  const auto order = detail::rank_descending(scores);
  double ap = 0.0;
  std::size_t tp = 0, seen = 0, k = 0;
  while (k < order.size()) {
    const double s = scores[order[k]];
    std::size_t dtp = 0;
    while (k < order.size() && scores[order[k]] == s) {
      dtp += labels[order[k]] != 0;
      ++seen;
      ++k;
    }
    tp += dtp;
    if (dtp > 0) {
      ap += (static_cast<double>(dtp) / static_cast<double>(npos)) *
            (static_cast<double>(tp) / static_cast<double>(seen));
    }
  }
  return ap;
}

/// Predicted class of each row of a row-major score matrix (lowest index on ties).
inline std::vector<int> argmax_rows(std::span<const double> values, std::size_t cols) {
  std::vector<int> out(values.size() / cols);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < cols; ++j)
      if (values[i * cols + j] > values[i * cols + best]) best = j;
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace gnnkit::metrics
