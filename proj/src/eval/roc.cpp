#include "fhc/eval/roc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "fhc/core/error.hpp"

namespace fhc {

RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size())
    throw DimError("roc_curve: labels and scores have different lengths");
  int64_t pos = 0, neg = 0;
  for (int y : y_true) (y != 0 ? pos : neg)++;
  if (pos == 0 || neg == 0)
    throw DataError("roc_curve: need at least one positive and one negative sample");

  std::vector<size_t> order(y_true.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);

  int64_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    // Tied scores move together: emit one point per distinct threshold.
    while (i < order.size() && scores[order[i]] == threshold) {
      (y_true[order[i]] != 0 ? tp : fp)++;
      ++i;
    }
    curve.thresholds.push_back(threshold);
    curve.fpr.push_back(static_cast<double>(fp) / neg);
    curve.tpr.push_back(static_cast<double>(tp) / pos);
  }
  return curve;
}

double auc(const RocCurve& curve) {
  if (curve.fpr.size() < 2) throw DataError("auc: degenerate curve");
  double area = 0.0;
  for (size_t i = 1; i < curve.fpr.size(); ++i)
    area += (curve.fpr[i] - curve.fpr[i - 1]) * (curve.tpr[i] + curve.tpr[i - 1]) / 2.0;
  return area;
}

RocCurve one_vs_rest_roc(std::span<const int> y_true, const Matrix& probs, int cls) {
  std::vector<int> binary(y_true.size());
  std::vector<double> scores(y_true.size());
  for (size_t i = 0; i < y_true.size(); ++i) {
    binary[i] = y_true[i] == cls ? 1 : 0;
    scores[i] = probs(static_cast<int>(i), cls);
  }
  return roc_curve(binary, scores);
}

RocCurve micro_roc(std::span<const int> y_true, const Matrix& probs) {
  std::vector<int> binary;
  std::vector<double> scores;
  binary.reserve(y_true.size() * probs.cols);
  scores.reserve(y_true.size() * probs.cols);
  for (size_t i = 0; i < y_true.size(); ++i)
    for (int c = 0; c < probs.cols; ++c) {
      binary.push_back(y_true[i] == c ? 1 : 0);
      scores.push_back(probs(static_cast<int>(i), c));
    }
  return roc_curve(binary, scores);
}

MulticlassAuc multiclass_auc(std::span<const int> y_true, const Matrix& probs) {
  if (y_true.size() != static_cast<size_t>(probs.rows))
    throw DimError("multiclass_auc: label count does not match probability rows");
  MulticlassAuc out;
  out.per_class.resize(probs.cols);
  for (int c = 0; c < probs.cols; ++c)
    out.per_class[c] = auc(one_vs_rest_roc(y_true, probs, c));
  out.micro = auc(micro_roc(y_true, probs));
  out.macro = std::accumulate(out.per_class.begin(), out.per_class.end(), 0.0) / probs.cols;
  return out;
}

double interpolate_tpr(const RocCurve& curve, double fpr) {
  if (fpr <= curve.fpr.front()) return curve.tpr.front();
  for (size_t i = 1; i < curve.fpr.size(); ++i) {
    if (curve.fpr[i] >= fpr) {
      const double span = curve.fpr[i] - curve.fpr[i - 1];
      if (span == 0.0) return std::max(curve.tpr[i], curve.tpr[i - 1]);
      const double w = (fpr - curve.fpr[i - 1]) / span;
      return curve.tpr[i - 1] + w * (curve.tpr[i] - curve.tpr[i - 1]);
    }
  }
  return curve.tpr.back();
}

}  // namespace fhc
