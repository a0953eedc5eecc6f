#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace gnnkit;
using namespace gnnkit::metrics;

namespace {

/// Probability that a random positive outscores a random negative, ties 1/2.
double pairwise_auc(const std::vector<int>& y, const std::vector<double>& s) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[i] != 1 || y[j] != 0) continue;
      den += 1.0;
      num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  return num / den;
}

/// Step integral over distinct thresholds: for each threshold t, recall and
/// precision of the set {score >= t}.
double step_ap(const std::vector<int>& y, const std::vector<double>& s) {
  std::vector<double> thresholds = s;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  double npos = 0.0;
  for (int v : y) npos += v;
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    double tp = 0.0, sel = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k)
      if (s[k] >= t) {
        sel += 1.0;
        tp += y[k];
      }
    const double recall = tp / npos;
    ap += (recall - prev_recall) * (tp / sel);
    prev_recall = recall;
  }
  return ap;
}

struct Instance {
  std::vector<int> y;
  std::vector<double> s;
};

Instance random_instance(Rng& rng) {
  Instance r;
  const std::size_t n = 2 + rng.below(49);
  const bool coarse = rng.bernoulli(0.5);  // coarse scores force ties
  for (std::size_t k = 0; k < n; ++k) {
    r.y.push_back(rng.bernoulli(0.4) ? 1 : 0);
    r.s.push_back(coarse ? static_cast<double>(rng.below(5)) / 4.0 : rng.uniform());
  }
  r.y[0] = 1;
  r.y[1] = 0;
  return r;
}

}  // namespace

TEST(Confusion, Examples) {
  const std::vector<int> a{1, 1, 0};
  const auto c = confusion(a, a);
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.tn, 1u);
  EXPECT_EQ(c.fp + c.fn, 0u);
  const auto d = confusion(std::vector<int>{1, 0}, std::vector<int>{0, 1});
  EXPECT_EQ(d.fn, 1u);
  EXPECT_EQ(d.fp, 1u);
  EXPECT_THROW(confusion(std::vector<int>{1}, std::vector<int>{1, 0}), ShapeError);
  EXPECT_THROW(confusion(std::vector<int>{}, std::vector<int>{}), ShapeError);
}

TEST(Confusion, MatchesBranchOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> y(10), p(10);
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t k = 0; k < 10; ++k) {
      y[k] = rng.bernoulli(0.5);
      p[k] = rng.bernoulli(0.5);
      if (y[k] == 1 && p[k] == 1) ++tp;
      if (y[k] == 0 && p[k] == 1) ++fp;
      if (y[k] == 0 && p[k] == 0) ++tn;
      if (y[k] == 1 && p[k] == 0) ++fn;
    }
    const auto c = confusion(y, p);
    EXPECT_EQ(c.tp, tp);
    EXPECT_EQ(c.fp, fp);
    EXPECT_EQ(c.tn, tn);
    EXPECT_EQ(c.fn, fn);
    EXPECT_EQ(c.total(), 10u);
  }
}

TEST(Rates, Examples) {
  const ConfusionCounts c{3, 2, 4, 1};
  EXPECT_DOUBLE_EQ(*accuracy(c), 0.7);
  EXPECT_DOUBLE_EQ(*precision(c), 0.6);
  EXPECT_DOUBLE_EQ(*recall(c), 0.75);
  EXPECT_DOUBLE_EQ(*tpr(c), 0.75);
  EXPECT_DOUBLE_EQ(*fpr_over_errors(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*fpr_conventional(c), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(*accuracy(ConfusionCounts{5, 0, 5, 0}), 1.0);
  EXPECT_DOUBLE_EQ(*precision(ConfusionCounts{2, 0, 7, 3}), 1.0);
}

TEST(Rates, ZeroDenominatorIsUndefined) {
  const ConfusionCounts none{0, 0, 4, 0};
  EXPECT_FALSE(precision(none).has_value());
  EXPECT_FALSE(recall(none).has_value());
  EXPECT_FALSE(fpr_over_errors(none).has_value());
  EXPECT_TRUE(fpr_conventional(none).has_value());
  EXPECT_FALSE(accuracy(ConfusionCounts{}).has_value());
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(std::vector<int>{1, 1, 0, 0}, std::vector<double>{0.9, 0.8, 0.3, 0.2}).auc, 1.0);
  EXPECT_EQ(roc_auc(std::vector<int>{1, 0}, std::vector<double>{0.4, 0.6}).auc, 0.0);
  EXPECT_EQ(roc_auc(std::vector<int>{1, 1, 0, 0}, std::vector<double>{0.8, 0.3, 0.5, 0.1}).auc, 0.75);
  EXPECT_EQ(roc_auc(std::vector<int>{1, 0}, std::vector<double>{0.5, 0.5}).auc, 0.5);
  EXPECT_THROW(roc_auc(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2}), DomainError);
  EXPECT_THROW(roc_auc(std::vector<int>{1, 0}, std::vector<double>{0.1}), ShapeError);
}

TEST(RocAuc, CurveShape) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = random_instance(rng);
    const auto r = roc_auc(in.y, in.s);
    const auto& pts = r.curve.points;
    EXPECT_EQ(pts.front().fpr, 0.0);
    EXPECT_EQ(pts.front().tpr, 0.0);
    EXPECT_EQ(pts.back().fpr, 1.0);
    EXPECT_EQ(pts.back().tpr, 1.0);
    for (std::size_t k = 1; k < pts.size(); ++k) {
      EXPECT_GE(pts[k].fpr, pts[k - 1].fpr);
      EXPECT_GE(pts[k].tpr, pts[k - 1].tpr);
    }
    EXPECT_EQ(r.curve.thresholds.size(), pts.size());
  }
}

TEST(RocAuc, MatchesPairwiseOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng);
    EXPECT_NEAR(roc_auc(in.y, in.s).auc, pairwise_auc(in.y, in.s), 1e-12);
  }
}

TEST(RocAuc, MonotoneTransformAndLabelSwap) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = random_instance(rng);
    const double auc = roc_auc(in.y, in.s).auc;
    std::vector<double> t = in.s, neg = in.s;
    std::vector<int> flipped = in.y;
    for (auto& v : t) v = std::exp(3.0 * v) - 7.0;
    for (auto& v : neg) v = -v;
    for (auto& v : flipped) v = 1 - v;
    EXPECT_NEAR(roc_auc(in.y, t).auc, auc, 1e-12);
    EXPECT_NEAR(roc_auc(flipped, neg).auc, auc, 1e-12);
  }
}

TEST(AveragePrecision, Examples) {
  EXPECT_EQ(average_precision(std::vector<int>{1, 1, 0}, std::vector<double>{0.9, 0.8, 0.1}), 1.0);
  std::vector<int> one(10, 0);
  one[3] = 1;
  std::vector<double> s(10);
  for (std::size_t k = 0; k < 10; ++k) s[k] = k == 3 ? 1.0 : 0.1 * double(k) / 2.0;
  EXPECT_EQ(average_precision(one, s), 1.0);
  EXPECT_NEAR(average_precision(std::vector<int>{1, 0, 1, 0}, std::vector<double>{0.9, 0.8, 0.7, 0.6}), 5.0 / 6.0,
              1e-15);
  EXPECT_THROW(average_precision(std::vector<int>{0, 0}, std::vector<double>{0.1, 0.2}), DomainError);
}

TEST(AveragePrecision, MatchesStepIntegralOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng);
    EXPECT_NEAR(average_precision(in.y, in.s), step_ap(in.y, in.s), 1e-12);
  }
}

TEST(ArgmaxRows, LowestIndexOnTies) {
  const std::vector<double> v{0.1, 0.5, 0.5, 2.0, -1.0, 0.0};
  EXPECT_EQ(argmax_rows(v, 3), (std::vector<int>{1, 0}));
}
