#include "fhc/core/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fhc/core/error.hpp"

namespace fhc {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition symmetric_eig(const Matrix& s) {
  if (s.rows != s.cols) throw DimError("symmetric_eig: matrix must be square");
  const int n = s.rows;
  if (!all_finite(s)) throw NumericError("symmetric_eig: non-finite entries");

  double max_abs = 0.0;
  for (double v : s.data) max_abs = std::max(max_abs, std::abs(v));
  const double sym_tol = 1e-9 * std::max(max_abs, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(s(i, j) - s(j, i)) > sym_tol)
        throw NumericError("symmetric_eig: matrix is not symmetric");

  Matrix a = s;
  // Work on the symmetrized copy so tiny input asymmetry cannot accumulate.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = a(j, i) = m;
    }
  Matrix v = Matrix::identity(n);

  const double target = 1e-12 * frobenius_norm(a);
  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  while (off_diagonal_norm(a) > target && sweep < kMaxSweeps) {
    ++sweep;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = a(p, r) = arp - sn * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + sn * (arp - tau * arq);
          }
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - sn * (vrq + tau * vrp);
          v(r, q) = vrq + sn * (vrp - tau * vrq);
        }
      }
    }
  }
  if (off_diagonal_norm(a) > target)
    throw NumericError("symmetric_eig: Jacobi sweeps did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    const int src = order[k];
    out.values[k] = a(src, src);
    int arg = 0;
    for (int r = 1; r < n; ++r)
      if (std::abs(v(r, src)) > std::abs(v(arg, src))) arg = r;
    const double flip = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (int r = 0; r < n; ++r) out.vectors(r, k) = flip * v(r, src);
  }
  return out;
}

}  // namespace fhc
