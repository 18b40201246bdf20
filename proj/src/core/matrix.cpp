#include "fhc/core/matrix.hpp"

#include <cmath>
#include <string>

#include "fhc/core/error.hpp"

namespace fhc {

Matrix::Matrix(int r, int c, double fill) : rows(r), cols(c) {
  if (r < 0 || c < 0) throw DimError("matrix dimensions must be non-negative");
  data.assign(static_cast<size_t>(r) * static_cast<size_t>(c), fill);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) {
    throw DimError("matmul: shapes " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                   " and " + std::to_string(b.rows) + "x" + std::to_string(b.cols) +
                   " are incompatible");
  }
  Matrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.data.data() + static_cast<size_t>(i) * a.cols;
    double* orow = out.data.data() + static_cast<size_t>(i) * b.cols;
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.data.data() + static_cast<size_t>(k) * b.cols;
      for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
  return out;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data) s += v * v;
  return std::sqrt(s);
}

bool all_finite(const Matrix& m) { return all_finite(std::span<const double>(m.data)); }

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b, const char* context) {
  if (a.rows != a.cols || static_cast<size_t>(a.rows) != b.size())
    throw DimError("solve_linear: system must be square and match the right-hand side");
  const int n = a.rows;
  double scale = 0.0;
  for (double v : a.data) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-12 * std::max(scale, 1.0);

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < tiny)
      throw NumericError(std::string(context) + "singular linear system");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) * inv;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= a(r, j) * x[j];
    x[r] = s / a(r, r);
  }
  return x;
}

}  // namespace fhc
