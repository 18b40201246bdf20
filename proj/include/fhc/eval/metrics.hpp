#ifndef FHC_EVAL_METRICS_HPP
#define FHC_EVAL_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fhc/core/matrix.hpp"

namespace fhc {

// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  int classes = 0;
  std::vector<int64_t> counts;

  explicit ConfusionMatrix(int c = 0)
      : classes(c), counts(static_cast<size_t>(c) * c, 0) {}
  int64_t& at(int t, int p) { return counts[static_cast<size_t>(t) * classes + p]; }
  int64_t at(int t, int p) const { return counts[static_cast<size_t>(t) * classes + p]; }
  int64_t total() const;
  int64_t trace() const;
  std::vector<int64_t> row_sums() const;  // per-class support
  std::vector<int64_t> col_sums() const;  // per-class predicted counts
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          int class_count);

enum class Averaging { macro, micro, weighted };

Averaging averaging_from_name(const std::string& name);
std::string averaging_name(Averaging mode);

struct BasicMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<double> per_class_precision, per_class_recall, per_class_f1;
  std::vector<int64_t> support;
  bool zero_division_hit = false;  // some class had a 0/0 precision or recall
};

// Per-class precision TP/(TP+FP) and recall TP/(TP+FN) with the 0/0 -> 0
// convention, averaged per mode. Accuracy is trace/total.
BasicMetrics basic_metrics(const ConfusionMatrix& m, Averaging mode);

// kappa = (p_o - p_e) / (1 - p_e). Throws NumericError when p_e == 1.
double cohen_kappa(const ConfusionMatrix& m);

// Multiclass correlation coefficient (covariance form); equals the classic
// binary formula at C = 2. A zero denominator yields 0.
double mcc(const ConfusionMatrix& m);

}  // namespace fhc

#endif
