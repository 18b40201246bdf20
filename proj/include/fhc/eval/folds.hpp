#ifndef FHC_EVAL_FOLDS_HPP
#define FHC_EVAL_FOLDS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fhc/eval/metrics.hpp"
#include "fhc/eval/roc.hpp"

namespace fhc {

struct FoldPlan {
  int k = 0;
  uint64_t seed = 0;
  std::vector<std::vector<int>> train_indices;
  std::vector<std::vector<int>> val_indices;
};

// Per-class round-robin assignment after a seeded shuffle; validation folds
// partition the dataset and per-fold class proportions stay within one
// sample of the global proportions. Every class needs at least k samples.
FoldPlan stratified_kfold(std::span<const int> labels, int k, uint64_t seed);

// Stratified three-way split by fractions (train gets the remainder).
struct SplitPlan {
  std::vector<int> train, val, test;
};
SplitPlan stratified_split(std::span<const int> labels, double val_frac, double test_frac,
                           uint64_t seed);

// The seven-metric evaluation bundle of a single prediction run.
struct MetricsReport {
  BasicMetrics basic;
  double kappa = 0.0;
  double mcc_score = 0.0;
  MulticlassAuc auc_scores;
  ConfusionMatrix matrix;
  Averaging averaging = Averaging::weighted;
};

MetricsReport evaluate_predictions(std::span<const int> y_true, std::span<const int> y_pred,
                                   const Matrix& probs, int class_count,
                                   Averaging mode = Averaging::weighted);

struct MetricVector {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double kappa = 0.0;
  double mcc = 0.0;
  double auc = 0.0;  // macro
};

MetricVector metric_vector(const MetricsReport& report);

struct CvAggregate {
  MetricVector mean;
  MetricVector stddev;  // population standard deviation
};

CvAggregate cv_aggregate(std::span<const MetricVector> folds);

}  // namespace fhc

#endif
