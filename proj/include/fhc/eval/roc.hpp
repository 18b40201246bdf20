#ifndef FHC_EVAL_ROC_HPP
#define FHC_EVAL_ROC_HPP

#include <span>
#include <vector>

#include "fhc/core/matrix.hpp"

namespace fhc {

// One point per distinct score threshold (descending), anchored at (0,0)
// and ending at (1,1). thresholds[0] is +infinity for the (0,0) anchor.
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<double> fpr;
  std::vector<double> tpr;
};

// Binary ROC. Requires at least one positive and one negative label.
RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores);

// Trapezoidal area; equals the Mann-Whitney concordant-pair statistic.
double auc(const RocCurve& curve);

struct MulticlassAuc {
  std::vector<double> per_class;  // one-vs-rest
  double micro = 0.0;             // pooled (sample, class) decisions
  double macro = 0.0;             // unweighted mean of per-class AUCs
};

MulticlassAuc multiclass_auc(std::span<const int> y_true, const Matrix& probs);

// One-vs-rest curve for a single class, and the pooled micro-average curve.
RocCurve one_vs_rest_roc(std::span<const int> y_true, const Matrix& probs, int cls);
RocCurve micro_roc(std::span<const int> y_true, const Matrix& probs);

// TPR of `curve` linearly interpolated at the given FPR.
double interpolate_tpr(const RocCurve& curve, double fpr);

}  // namespace fhc

#endif
