#include "fhc/pipeline/pca.hpp"

#include <algorithm>
#include <cmath>

#include "fhc/core/eig.hpp"
#include "fhc/core/error.hpp"

namespace fhc {

PcaModel pca_fit(const Matrix& x, double threshold) {
  if (x.rows < 2) throw DataError("pca_fit: need at least 2 samples");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw DataError("pca_fit: threshold must be in (0, 1]");
  if (!all_finite(x)) throw NumericError("pca_fit: non-finite entries");

  const int n = x.rows, d = x.cols;
  PcaModel model;
  model.threshold = threshold;
  model.mean.assign(d, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c) model.mean[c] += x(r, c);
  for (double& m : model.mean) m /= n;

  Matrix cov(d, d);
  {
    std::vector<double> centered(d);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < d; ++c) centered[c] = x(r, c) - model.mean[c];
      for (int i = 0; i < d; ++i) {
        if (centered[i] == 0.0) continue;
        double* crow = cov.data.data() + static_cast<size_t>(i) * d;
        for (int j = 0; j < d; ++j) crow[j] += centered[i] * centered[j];
      }
    }
    for (double& v : cov.data) v /= n;
  }

  auto eig = symmetric_eig(cov);
  model.eigenvalues = eig.values;

  double total = 0.0;
  for (double v : eig.values) total += std::max(v, 0.0);
  int k = 1;
  if (total > 0.0) {
    double cum = 0.0;
    for (k = 1; k <= d; ++k) {
      cum += std::max(eig.values[k - 1], 0.0);
      if (cum / total >= threshold - 1e-12) break;
    }
    k = std::min(k, d);
  }
  model.k = k;
  model.basis = Matrix(d, k);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < k; ++c) model.basis(r, c) = eig.vectors(r, c);
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
  if (x.cols != static_cast<int>(model.mean.size()))
    throw DimError("pca_transform: input has " + std::to_string(x.cols) +
                   " columns, model expects " + std::to_string(model.mean.size()));
  const int d = x.cols, k = model.k;
  Matrix out(x.rows, k);
  for (int r = 0; r < x.rows; ++r) {
    for (int c = 0; c < d; ++c) {
      const double v = x(r, c) - model.mean[c];
      if (v == 0.0) continue;
      const double* brow = model.basis.data.data() + static_cast<size_t>(c) * k;
      double* orow = out.data.data() + static_cast<size_t>(r) * k;
      for (int j = 0; j < k; ++j) orow[j] += v * brow[j];
    }
  }
  return out;
}

std::vector<double> pca_transform_row(const PcaModel& model, std::span<const double> row) {
  Matrix x(1, static_cast<int>(row.size()));
  std::copy(row.begin(), row.end(), x.data.begin());
  Matrix z = pca_transform(model, x);
  return z.data;
}

std::vector<double> explained_variance_ratio(const PcaModel& model) {
  double total = 0.0;
  for (double v : model.eigenvalues) total += std::max(v, 0.0);
  std::vector<double> ratios(model.eigenvalues.size(), 0.0);
  if (total <= 0.0) return ratios;
  for (size_t i = 0; i < ratios.size(); ++i)
    ratios[i] = std::max(model.eigenvalues[i], 0.0) / total;
  return ratios;
}

}  // namespace fhc
