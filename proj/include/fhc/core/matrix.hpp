#ifndef FHC_CORE_MATRIX_HPP
#define FHC_CORE_MATRIX_HPP

#include <span>
#include <vector>

namespace fhc {

// Dense row-major matrix of 64-bit floats.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0);

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  std::span<double> row(int r) { return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }

  static Matrix identity(int n);
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

double frobenius_norm(const Matrix& m);
bool all_finite(const Matrix& m);
bool all_finite(std::span<const double> v);

// Solves a*x = b by Gaussian elimination with partial pivoting.
// Throws NumericError when the system is singular; `context` is prefixed
// to the message so callers can point at the actionable fix.
std::vector<double> solve_linear(Matrix a, std::vector<double> b, const char* context = "");

}  // namespace fhc

#endif
