#include "fhc/eval/folds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "fhc/core/error.hpp"
#include "fhc/core/rng.hpp"

namespace fhc {

namespace {

std::map<int, std::vector<int>> indices_by_class(std::span<const int> labels) {
  std::map<int, std::vector<int>> by_class;
  for (size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<int>(i));
  return by_class;
}

}  // namespace

FoldPlan stratified_kfold(std::span<const int> labels, int k, uint64_t seed) {
  if (k < 2) throw DataError("stratified_kfold: k must be >= 2");
  auto by_class = indices_by_class(labels);
  for (const auto& [cls, idx] : by_class)
    if (static_cast<int>(idx.size()) < k)
      throw DataError("stratified_kfold: class " + std::to_string(cls) + " has only " +
                      std::to_string(idx.size()) + " samples for k=" + std::to_string(k));

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.val_indices.resize(k);
  RandomStream stream(seed);
  for (auto& [cls, idx] : by_class) {
    stream.shuffle(idx);
    for (size_t j = 0; j < idx.size(); ++j)
      plan.val_indices[j % k].push_back(idx[j]);
  }
  plan.train_indices.resize(k);
  for (int f = 0; f < k; ++f) {
    std::sort(plan.val_indices[f].begin(), plan.val_indices[f].end());
    for (int g = 0; g < k; ++g)
      if (g != f)
        plan.train_indices[f].insert(plan.train_indices[f].end(),
                                     plan.val_indices[g].begin(), plan.val_indices[g].end());
    std::sort(plan.train_indices[f].begin(), plan.train_indices[f].end());
  }
  return plan;
}

SplitPlan stratified_split(std::span<const int> labels, double val_frac, double test_frac,
                           uint64_t seed) {
  if (val_frac < 0 || test_frac < 0 || val_frac + test_frac >= 1.0)
    throw DataError("stratified_split: fractions must be non-negative and sum below 1");
  auto by_class = indices_by_class(labels);
  SplitPlan plan;
  RandomStream stream(seed);
  for (auto& [cls, idx] : by_class) {
    stream.shuffle(idx);
    const int n = static_cast<int>(idx.size());
    const int n_test = static_cast<int>(std::lround(test_frac * n));
    const int n_val = static_cast<int>(std::lround(val_frac * n));
    if (n - n_test - n_val < 1)
      throw DataError("stratified_split: class " + std::to_string(cls) +
                      " is too small for the requested fractions");
    for (int j = 0; j < n; ++j) {
      if (j < n_test) plan.test.push_back(idx[j]);
      else if (j < n_test + n_val) plan.val.push_back(idx[j]);
      else plan.train.push_back(idx[j]);
    }
  }
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.val.begin(), plan.val.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

MetricsReport evaluate_predictions(std::span<const int> y_true, std::span<const int> y_pred,
                                   const Matrix& probs, int class_count, Averaging mode) {
  MetricsReport report;
  report.matrix = confusion(y_true, y_pred, class_count);
  report.basic = basic_metrics(report.matrix, mode);
  report.kappa = cohen_kappa(report.matrix);
  report.mcc_score = mcc(report.matrix);
  report.auc_scores = multiclass_auc(y_true, probs);
  report.averaging = mode;
  return report;
}

MetricVector metric_vector(const MetricsReport& report) {
  return {report.basic.accuracy, report.basic.precision, report.basic.recall,
          report.basic.f1,       report.kappa,           report.mcc_score,
          report.auc_scores.macro};
}

CvAggregate cv_aggregate(std::span<const MetricVector> folds) {
  if (folds.empty()) throw DataError("cv_aggregate: need at least one fold");
  const double n = static_cast<double>(folds.size());
  auto fields = [](MetricVector& v) {
    return std::array<double*, 7>{&v.accuracy, &v.precision, &v.recall, &v.f1,
                                  &v.kappa,    &v.mcc,       &v.auc};
  };
  std::vector<std::array<double, 7>> values;
  for (const auto& fold : folds) {
    MetricVector copy = fold;
    auto src = fields(copy);
    std::array<double, 7> row;
    for (size_t i = 0; i < src.size(); ++i) row[i] = *src[i];
    values.push_back(row);
  }

  CvAggregate agg;
  auto mean_f = fields(agg.mean);
  auto std_f = fields(agg.stddev);
  for (size_t i = 0; i < 7; ++i) {
    bool constant = true;
    double sum = 0.0;
    for (const auto& row : values) {
      constant = constant && row[i] == values[0][i];
      sum += row[i];
    }
    if (constant) {  // exact: a constant column has zero spread
      *mean_f[i] = values[0][i];
      *std_f[i] = 0.0;
      continue;
    }
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& row : values) var += (row[i] - mean) * (row[i] - mean) / n;
    *mean_f[i] = mean;
    *std_f[i] = std::sqrt(var);
  }
  return agg;
}

}  // namespace fhc
