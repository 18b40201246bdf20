#ifndef FHC_PIPELINE_PCA_HPP
#define FHC_PIPELINE_PCA_HPP

#include <span>
#include <vector>

#include "fhc/core/matrix.hpp"

namespace fhc {

struct PcaModel {
  std::vector<double> mean;         // per-dimension training mean
  Matrix basis;                     // dim x k, columns are the top-k eigenvectors
  std::vector<double> eigenvalues;  // full spectrum, descending
  int k = 0;
  double threshold = 0.0;           // retained-variance fraction
};

// Fits PCA on the mean-centered covariance C = (1/N) Xc^T Xc and keeps the
// smallest k whose cumulative explained-variance ratio reaches `threshold`.
// Requires at least 2 rows, finite entries, threshold in (0, 1].
PcaModel pca_fit(const Matrix& x, double threshold);

// (x - mean) * basis. Throws DimError when x.cols != mean dimension.
Matrix pca_transform(const PcaModel& model, const Matrix& x);
std::vector<double> pca_transform_row(const PcaModel& model, std::span<const double> row);

// Eigenvalue shares of the total variance, tiny negatives clamped to zero.
std::vector<double> explained_variance_ratio(const PcaModel& model);

}  // namespace fhc

#endif
