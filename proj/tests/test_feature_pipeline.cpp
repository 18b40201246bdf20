#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"
#include "fhc/core/error.hpp"
#include "fhc/core/rng.hpp"
#include "fhc/pipeline/augment.hpp"
#include "fhc/pipeline/dataset.hpp"
#include "fhc/pipeline/extractor.hpp"
#include "fhc/pipeline/pca.hpp"

using namespace fhc;

namespace {

Image constant_image(int w, int h, uint8_t r, uint8_t g, uint8_t b) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

Image noise_image(int w, int h, uint64_t seed) {
  RandomStream rng(seed);
  Image img(w, h);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.next_u64() % 256);
  return img;
}

// Rows built from balanced, mutually orthogonal +-1 columns of an 8x8
// Hadamard matrix, scaled so the 1/N sample covariance is exactly diagonal.
Matrix hadamard_design(const std::vector<double>& variances) {
  const int kSigns[8][8] = {
      {+1, +1, +1, +1, +1, +1, +1, +1}, {+1, -1, +1, -1, +1, -1, +1, -1},
      {+1, +1, -1, -1, +1, +1, -1, -1}, {+1, -1, -1, +1, +1, -1, -1, +1},
      {+1, +1, +1, +1, -1, -1, -1, -1}, {+1, -1, +1, -1, -1, +1, -1, +1},
      {+1, +1, -1, -1, -1, -1, +1, +1}, {+1, -1, -1, +1, -1, +1, +1, -1}};
  const int d = static_cast<int>(variances.size());
  Matrix x(8, d);
  for (int j = 0; j < d; ++j) {
    const double s = std::sqrt(variances[j]);
    for (int i = 0; i < 8; ++i) x(i, j) = s * kSigns[i][j + 1];  // skip all-ones column
  }
  return x;
}

}  // namespace

TEST_CASE("grid mean pool of a constant image is constant") {
  Image img = constant_image(37, 41, 120, 120, 120);
  auto pooled = grid_mean_gray(img, 8);
  REQUIRE(pooled.size() == 64);
  for (double v : pooled) CHECK(v == doctest::Approx(120.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("extraction is deterministic and has the configured dimension") {
  Image img = noise_image(224, 224, 5);
  auto branch_a = make_gray_grid_extractor();
  auto v1 = extract(img, branch_a);
  auto v2 = extract(img, branch_a);
  CHECK(v1.size() == 64);
  CHECK(v1 == v2);

  auto branch_b = make_color_hist_extractor(32);
  CHECK(extract(img, branch_b).size() == 32);

  CHECK_THROWS_AS(extract(Image(), branch_a), DataError);
}

TEST_CASE("fuse keeps prefix/suffix order and sums dimensions") {
  CHECK(fuse({1, 2}, {3, 4, 5}) == FeatureVector{1, 2, 3, 4, 5});
  CHECK(fuse({}, {3, 4}) == FeatureVector{3, 4});
  FeatureVector fa(1280, 0.5), fb(1280, -0.5);
  CHECK(fuse(fa, fb).size() == 2560);
}

TEST_CASE("l2_normalize basics and scale invariance") {
  auto n = l2_normalize({3, 4});
  CHECK(n[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(n[1] == doctest::Approx(0.8).epsilon(1e-15));
  auto twice = l2_normalize(n);
  CHECK(std::abs(twice[0] - n[0]) <= 1e-15);
  CHECK(std::abs(twice[1] - n[1]) <= 1e-15);
  CHECK_THROWS_AS(l2_normalize({0, 0}), NumericError);

  RandomStream rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    FeatureVector v(17);
    for (double& x : v) x = rng.next_uniform(-1, 1);
    const double c = std::exp(rng.next_uniform(-3, 3));
    FeatureVector scaled(v);
    for (double& x : scaled) x *= c;
    auto a = l2_normalize(v);
    auto b = l2_normalize(scaled);
    for (size_t i = 0; i < v.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }
}

TEST_CASE("identity affine reproduces the image bitwise") {
  Image img = noise_image(31, 22, 77);
  Image out = apply_affine(img, AffineSample{0.0, 0.0, 0.0, 1.0});
  CHECK(out.pixels == img.pixels);
}

TEST_CASE("central zoom keeps the center of a radially symmetric image") {
  const int n = 33;  // odd, so the center is a pixel
  Image img(n, n);
  const double c = (n - 1) / 2.0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double r = std::hypot(x - c, y - c);
      const uint8_t v = static_cast<uint8_t>(std::min(255.0, r * 8.0));
      img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = v;
    }
  Image out = apply_affine(img, AffineSample{0.0, 0.0, 0.0, 2.0});
  for (int ch = 0; ch < 3; ++ch) CHECK(out.at(n / 2, n / 2, ch) == img.at(n / 2, n / 2, ch));
}

TEST_CASE("sampled augmentation parameters stay inside configured ranges") {
  AugmentParams params;
  RandomStream rng(11);
  for (int i = 0; i < 10000; ++i) {
    auto s = sample_augment_params(params, 224, 112, rng);
    CHECK(std::abs(s.rotation_deg) <= 30.0);
    CHECK(std::abs(s.shift_x) <= 0.10 * 224);
    CHECK(std::abs(s.shift_y) <= 0.10 * 112);
    CHECK(s.zoom >= 0.8);
    CHECK(s.zoom <= 1.2);
  }
}

TEST_CASE("pca on perfectly collinear points keeps one component") {
  Matrix x(4, 2);
  const double pts[4][2] = {{1, 1}, {2, 2}, {3, 3}, {-1, -1}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) x(r, c) = pts[r][c];
  auto model = pca_fit(x, 0.95);
  CHECK(model.k == 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(model.basis(0, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
  CHECK(std::abs(model.basis(1, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
  CHECK(explained_variance_ratio(model)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pca k-selection on an exact diagonal covariance") {
  // Sample covariance is diag(0.90, 0.06, 0.03, 0.01); cumulative ratios
  // 0.90, 0.96, 0.99, 1.00, so threshold 0.95 keeps k = 2.
  Matrix x = hadamard_design({0.90, 0.06, 0.03, 0.01});
  auto model = pca_fit(x, 0.95);
  CHECK(model.k == 2);
  CHECK(model.eigenvalues[0] == doctest::Approx(0.90).epsilon(1e-12));
  CHECK(model.eigenvalues[1] == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(model.eigenvalues[2] == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(model.eigenvalues[3] == doctest::Approx(0.01).epsilon(1e-12));

  auto ratios = explained_variance_ratio(model);
  CHECK(ratios[0] + ratios[1] == doctest::Approx(0.96).epsilon(1e-12));
}

TEST_CASE("pca threshold 1.0 keeps exactly the covariance rank") {
  Matrix x(6, 3);
  RandomStream rng(8);
  for (int r = 0; r < 6; ++r) {
    const double a = rng.next_uniform(-1, 1), b = rng.next_uniform(-1, 1);
    x(r, 0) = a;
    x(r, 1) = b;
    x(r, 2) = a + b;  // rank-2 column space
  }
  auto model = pca_fit(x, 1.0);
  CHECK(model.k == 2);
}

TEST_CASE("pca input validation") {
  Matrix one(1, 3);
  CHECK_THROWS_AS(pca_fit(one, 0.95), DataError);
  Matrix bad(3, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pca_fit(bad, 0.95), NumericError);
  Matrix ok(3, 2, 1.0);
  CHECK_THROWS_AS(pca_fit(ok, 0.0), DataError);
  CHECK_THROWS_AS(pca_fit(ok, 1.5), DataError);
}

TEST_CASE("pca transform centers the mean and round-trips with full basis") {
  RandomStream rng(21);
  Matrix x(12, 5);
  for (double& v : x.data) v = rng.next_uniform(-2, 2);
  auto model = pca_fit(x, 1.0);

  Matrix mean_row(1, 5);
  for (int c = 0; c < 5; ++c) mean_row(0, c) = model.mean[c];
  Matrix z0 = pca_transform(model, mean_row);
  for (double v : z0.data) CHECK(std::abs(v) <= 1e-12);

  // Inverse projection with the full basis reconstructs the input.
  REQUIRE(model.k == 5);
  Matrix z = pca_transform(model, x);
  Matrix recon = matmul(z, transpose(model.basis));
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < x.cols; ++c)
      CHECK(recon(r, c) + model.mean[c] == doctest::Approx(x(r, c)).epsilon(1e-8));

  // Isometry at k = dim: pairwise distances preserved.
  for (int i = 0; i < x.rows; ++i)
    for (int j = i + 1; j < x.rows; ++j) {
      double dx = 0, dz = 0;
      for (int c = 0; c < x.cols; ++c) {
        dx += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
        dz += (z(i, c) - z(j, c)) * (z(i, c) - z(j, c));
      }
      CHECK(std::sqrt(dz) == doctest::Approx(std::sqrt(dx)).epsilon(1e-8));
    }

  Matrix wrong(2, 4);
  CHECK_THROWS_AS(pca_transform(model, wrong), DimError);
}

TEST_CASE("pca basis orthonormality and ratio bookkeeping on random data") {
  RandomStream rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix x(20, 8);
    for (double& v : x.data) v = rng.next_gaussian();
    auto model = pca_fit(x, 0.9);
    Matrix gram = matmul(transpose(model.basis), model.basis);
    for (int i = 0; i < model.k; ++i)
      for (int j = 0; j < model.k; ++j)
        CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-9);

    auto ratios = explained_variance_ratio(model);
    double sum = 0.0;
    for (size_t i = 0; i < ratios.size(); ++i) {
      CHECK(ratios[i] >= 0.0);
      if (i > 0) CHECK(ratios[i] <= ratios[i - 1] + 1e-15);
      sum += ratios[i];
    }
    CHECK(sum <= 1.0 + 1e-9);
  }
}

TEST_CASE("feature table emits original plus augmented rows in manifest order") {
  std::vector<ManifestEntry> entries;
  for (int i = 0; i < 6; ++i)
    entries.push_back({"img" + std::to_string(i), "", i % 2 ? "five" : "ten", "synthetic"});
  auto manifest = make_manifest(std::move(entries));
  CHECK(manifest.label_set == std::vector<std::string>{"five", "ten"});

  auto loader = [](const ManifestEntry& e) {
    return noise_image(24, 24, std::hash<std::string>{}(e.id));
  };
  auto a = make_gray_grid_extractor(16);
  auto b = make_color_hist_extractor(16);
  AugmentParams params;

  RandomStream s0(4);
  auto plain = build_feature_table(manifest, a, b, 0, params, s0, loader);
  CHECK(plain.features.rows == 6);
  CHECK(plain.features.cols == 32);

  RandomStream s1(4);
  auto doubled = build_feature_table(manifest, a, b, 1, params, s1, loader);
  CHECK(doubled.features.rows == 12);
  std::map<int, int> counts;
  for (int l : doubled.labels) counts[l]++;
  CHECK(counts[0] == 6);
  CHECK(counts[1] == 6);

  for (int r = 0; r < doubled.features.rows; ++r) {
    double sq = 0.0;
    for (double v : doubled.features.row(r)) sq += v * v;
    CHECK(std::sqrt(sq) == doctest::Approx(1.0).epsilon(1e-12));
  }

  RandomStream s2(4);
  auto again = build_feature_table(manifest, a, b, 1, params, s2, loader);
  CHECK(again.features.data == doubled.features.data);
  CHECK(again.ids == doubled.ids);
}

TEST_CASE("feature table rejects labels outside the declared set") {
  DatasetManifest manifest;
  manifest.entries.push_back({"x", "", "stranger", "synthetic"});
  manifest.label_set = {"known"};
  auto loader = [](const ManifestEntry&) { return constant_image(8, 8, 1, 2, 3); };
  RandomStream s(1);
  CHECK_THROWS_WITH_AS(
      build_feature_table(manifest, make_gray_grid_extractor(4), make_color_hist_extractor(4), 0,
                          AugmentParams{}, s, loader),
      doctest::Contains("stranger"), DataError);
}

TEST_CASE("manifest validation") {
  CHECK_THROWS_AS(make_manifest({{"a", "", "x", "synthetic"}, {"a", "", "x", "synthetic"}}),
                  DataError);
  CHECK_THROWS_AS(make_manifest({{"a", "", "x", "dslr"}}), DataError);
}
