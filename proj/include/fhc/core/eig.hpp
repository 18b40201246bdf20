#ifndef FHC_CORE_EIG_HPP
#define FHC_CORE_EIG_HPP

#include <vector>

#include "fhc/core/matrix.hpp"

namespace fhc {

struct EigenDecomposition {
  std::vector<double> values;  // sorted descending
  Matrix vectors;              // orthonormal columns, vectors.col(i) pairs with values[i]
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Sweeps until the off-diagonal Frobenius norm drops below 1e-12 * ||s||.
// Eigenvector columns are sign-fixed so the largest-magnitude component is
// positive, which keeps downstream bases reproducible.
// Throws DimError for non-square input and NumericError when the input is
// asymmetric beyond 1e-9 relative.
EigenDecomposition symmetric_eig(const Matrix& s);

}  // namespace fhc

#endif
