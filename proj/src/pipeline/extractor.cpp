#include "fhc/pipeline/extractor.hpp"

#include <cmath>
#include <memory>

#include "fhc/core/error.hpp"
#include "fhc/core/matrix.hpp"
#include "fhc/core/rng.hpp"

namespace fhc {

namespace {

constexpr uint64_t kGrayGridSeed = 101;
constexpr uint64_t kColorHistSeed = 202;

// Fixed random projection: rows drawn once from a seeded stream and scaled
// by 1/sqrt(in_dim), so projected features keep unit-order magnitude.
Matrix projection_matrix(int out_dim, int in_dim, uint64_t seed) {
  RandomStream rng(seed);
  Matrix p(out_dim, in_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (double& v : p.data) v = rng.next_gaussian() * scale;
  return p;
}

FeatureVector project(const Matrix& p, const std::vector<double>& v) {
  FeatureVector out(p.rows, 0.0);
  for (int r = 0; r < p.rows; ++r) {
    double s = 0.0;
    const double* prow = p.data.data() + static_cast<size_t>(r) * p.cols;
    for (int c = 0; c < p.cols; ++c) s += prow[c] * v[c];
    out[r] = s;
  }
  return out;
}

}  // namespace

std::vector<double> grid_mean_gray(const Image& image, int grid) {
  std::vector<double> pooled(static_cast<size_t>(grid) * grid, 0.0);
  for (int gy = 0; gy < grid; ++gy) {
    int r0 = gy * image.height / grid;
    int r1 = (gy + 1) * image.height / grid;
    if (r1 <= r0) r1 = r0 + 1;
    for (int gx = 0; gx < grid; ++gx) {
      int c0 = gx * image.width / grid;
      int c1 = (gx + 1) * image.width / grid;
      if (c1 <= c0) c1 = c0 + 1;
      double sum = 0.0;
      for (int y = r0; y < r1; ++y)
        for (int x = c0; x < c1; ++x)
          sum += (image.at(x, y, 0) + image.at(x, y, 1) + image.at(x, y, 2)) / 3.0;
      pooled[static_cast<size_t>(gy) * grid + gx] =
          sum / (255.0 * (r1 - r0) * (c1 - c0));
    }
  }
  return pooled;
}

Extractor make_gray_grid_extractor(int output_dim) {
  constexpr int kGrid = 8;
  auto proj = std::make_shared<Matrix>(
      projection_matrix(output_dim, kGrid * kGrid, kGrayGridSeed));
  Extractor e;
  e.name = "gray_grid";
  e.output_dim = output_dim;
  e.fn = [proj](const Image& img) { return project(*proj, grid_mean_gray(img, kGrid)); };
  return e;
}

Extractor make_color_hist_extractor(int output_dim) {
  constexpr int kBins = 48;
  auto proj = std::make_shared<Matrix>(
      projection_matrix(output_dim, 3 * kBins, kColorHistSeed));
  Extractor e;
  e.name = "color_hist";
  e.output_dim = output_dim;
  e.fn = [proj](const Image& img) {
    std::vector<double> hist(3 * kBins, 0.0);
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c)
        hist[static_cast<size_t>(c) * kBins + img.pixels[i * 3 + c] * kBins / 256] += 1.0;
    for (double& v : hist) v /= static_cast<double>(n);
    return project(*proj, hist);
  };
  return e;
}

Extractor extractor_by_name(const std::string& name, int output_dim) {
  if (name == "gray_grid") return make_gray_grid_extractor(output_dim);
  if (name == "color_hist") return make_color_hist_extractor(output_dim);
  throw DataError("unknown extractor name: " + name);
}

FeatureVector extract(const Image& image, const Extractor& extractor) {
  if (image.empty()) throw DataError("extract: zero-sized image");
  FeatureVector v = extractor.fn(image);
  if (static_cast<int>(v.size()) != extractor.output_dim)
    throw DimError("extract: extractor '" + extractor.name + "' produced wrong dimension");
  if (!all_finite(v))
    throw NumericError("extract: extractor '" + extractor.name + "' produced non-finite values");
  return v;
}

FeatureVector fuse(const FeatureVector& fa, const FeatureVector& fb) {
  FeatureVector out;
  out.reserve(fa.size() + fb.size());
  out.insert(out.end(), fa.begin(), fa.end());
  out.insert(out.end(), fb.begin(), fb.end());
  return out;
}

FeatureVector l2_normalize(const FeatureVector& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq <= 0.0)
    throw NumericError("l2_normalize: zero vector has no direction");
  const double inv = 1.0 / std::sqrt(sq);
  FeatureVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
  return out;
}

}  // namespace fhc
