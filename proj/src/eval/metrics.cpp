#include "fhc/eval/metrics.hpp"

#include <cmath>
#include <numeric>

#include "fhc/core/error.hpp"

namespace fhc {

int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), int64_t{0});
}

int64_t ConfusionMatrix::trace() const {
  int64_t t = 0;
  for (int i = 0; i < classes; ++i) t += at(i, i);
  return t;
}

std::vector<int64_t> ConfusionMatrix::row_sums() const {
  std::vector<int64_t> sums(classes, 0);
  for (int t = 0; t < classes; ++t)
    for (int p = 0; p < classes; ++p) sums[t] += at(t, p);
  return sums;
}

std::vector<int64_t> ConfusionMatrix::col_sums() const {
  std::vector<int64_t> sums(classes, 0);
  for (int t = 0; t < classes; ++t)
    for (int p = 0; p < classes; ++p) sums[p] += at(t, p);
  return sums;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          int class_count) {
  if (y_true.size() != y_pred.size())
    throw DimError("confusion: label sequences have different lengths");
  ConfusionMatrix m(class_count);
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= class_count || y_pred[i] < 0 || y_pred[i] >= class_count)
      throw DataError("confusion: label out of range at index " + std::to_string(i));
    ++m.at(y_true[i], y_pred[i]);
  }
  return m;
}

Averaging averaging_from_name(const std::string& name) {
  if (name == "macro") return Averaging::macro;
  if (name == "micro") return Averaging::micro;
  if (name == "weighted") return Averaging::weighted;
  throw DataError("unknown averaging mode '" + name + "'");
}

std::string averaging_name(Averaging mode) {
  switch (mode) {
    case Averaging::macro: return "macro";
    case Averaging::micro: return "micro";
    case Averaging::weighted: return "weighted";
  }
  return "?";
}

BasicMetrics basic_metrics(const ConfusionMatrix& m, Averaging mode) {
  const int64_t total = m.total();
  if (total == 0) throw DataError("basic_metrics: empty confusion matrix");
  const int c = m.classes;
  const auto rows = m.row_sums();
  const auto cols = m.col_sums();

  BasicMetrics out;
  out.accuracy = static_cast<double>(m.trace()) / total;
  out.support = rows;
  out.per_class_precision.resize(c);
  out.per_class_recall.resize(c);
  out.per_class_f1.resize(c);
  for (int k = 0; k < c; ++k) {
    const double tp = static_cast<double>(m.at(k, k));
    if (cols[k] == 0 || rows[k] == 0) out.zero_division_hit = true;
    const double prec = cols[k] == 0 ? 0.0 : tp / cols[k];
    const double rec = rows[k] == 0 ? 0.0 : tp / rows[k];
    out.per_class_precision[k] = prec;
    out.per_class_recall[k] = rec;
    out.per_class_f1[k] = (prec + rec) == 0.0 ? 0.0 : 2.0 * prec * rec / (prec + rec);
  }

  switch (mode) {
    case Averaging::macro: {
      for (int k = 0; k < c; ++k) {
        out.precision += out.per_class_precision[k] / c;
        out.recall += out.per_class_recall[k] / c;
        out.f1 += out.per_class_f1[k] / c;
      }
      break;
    }
    case Averaging::micro: {
      // For single-label classification micro P = R = F1 = accuracy.
      out.precision = out.recall = out.f1 = out.accuracy;
      break;
    }
    case Averaging::weighted: {
      for (int k = 0; k < c; ++k) {
        const double w = static_cast<double>(rows[k]) / total;
        out.precision += w * out.per_class_precision[k];
        out.recall += w * out.per_class_recall[k];
        out.f1 += w * out.per_class_f1[k];
      }
      break;
    }
  }
  return out;
}

double cohen_kappa(const ConfusionMatrix& m) {
  const int64_t total = m.total();
  if (total == 0) throw DataError("cohen_kappa: empty confusion matrix");
  const auto rows = m.row_sums();
  const auto cols = m.col_sums();
  const double p_o = static_cast<double>(m.trace()) / total;
  double p_e = 0.0;
  for (int k = 0; k < m.classes; ++k)
    p_e += static_cast<double>(rows[k]) * cols[k] / (static_cast<double>(total) * total);
  if (p_e >= 1.0) throw NumericError("cohen_kappa: chance agreement is 1, kappa undefined");
  return (p_o - p_e) / (1.0 - p_e);
}

double mcc(const ConfusionMatrix& m) {
  const int64_t total = m.total();
  if (total == 0) throw DataError("mcc: empty confusion matrix");
  const auto rows = m.row_sums();
  const auto cols = m.col_sums();
  const double s = static_cast<double>(total);
  const double c = static_cast<double>(m.trace());
  double sum_pt = 0.0, sum_pp = 0.0, sum_tt = 0.0;
  for (int k = 0; k < m.classes; ++k) {
    sum_pt += static_cast<double>(cols[k]) * rows[k];
    sum_pp += static_cast<double>(cols[k]) * cols[k];
    sum_tt += static_cast<double>(rows[k]) * rows[k];
  }
  const double numer = c * s - sum_pt;
  const double denom = std::sqrt(s * s - sum_pp) * std::sqrt(s * s - sum_tt);
  return denom == 0.0 ? 0.0 : numer / denom;
}

}  // namespace fhc
