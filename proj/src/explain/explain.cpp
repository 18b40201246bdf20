#include "fhc/explain/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "fhc/core/error.hpp"

namespace fhc {

namespace {

std::vector<AttributionEntry> sorted_entries(const std::vector<double>& weights) {
  std::vector<AttributionEntry> entries(weights.size());
  for (size_t i = 0; i < weights.size(); ++i)
    entries[i] = {static_cast<int>(i), weights[i]};
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::abs(a.weight) > std::abs(b.weight);
  });
  return entries;
}

// Ridge-regularized weighted least squares over [intercept | mask columns];
// the intercept is not penalized.
struct SurrogateFit {
  double intercept = 0.0;
  std::vector<double> weights;
};

SurrogateFit fit_weighted_ridge(const std::vector<std::vector<uint8_t>>& masks,
                                const std::vector<double>& y,
                                const std::vector<double>& sample_weights, double ridge) {
  const int d = static_cast<int>(masks[0].size());
  const int cols = d + 1;
  Matrix normal(cols, cols);
  std::vector<double> rhs(cols, 0.0);
  std::vector<double> row(cols);
  for (size_t j = 0; j < masks.size(); ++j) {
    row[0] = 1.0;
    for (int i = 0; i < d; ++i) row[i + 1] = masks[j][i];
    const double w = sample_weights[j];
    for (int a = 0; a < cols; ++a) {
      if (row[a] == 0.0) continue;
      rhs[a] += w * row[a] * y[j];
      for (int b = 0; b < cols; ++b) normal(a, b) += w * row[a] * row[b];
    }
  }
  for (int i = 1; i < cols; ++i) normal(i, i) += ridge;

  auto beta = solve_linear(std::move(normal), std::move(rhs),
                           "lime: degenerate perturbation design, increase n_samples; ");
  SurrogateFit fit;
  fit.intercept = beta[0];
  fit.weights.assign(beta.begin() + 1, beta.end());
  return fit;
}

double shapley_subset_weight(int d, int s) {
  // s!(d-s-1)!/d! computed through a running product to stay in range.
  double w = 1.0 / d;
  for (int i = 1; i <= s; ++i) w *= static_cast<double>(i) / (d - i);
  return w;
}

}  // namespace

double Attribution::weight_of(int unit) const {
  for (const auto& e : units)
    if (e.unit == unit) return e.weight;
  throw DataError("attribution: unit " + std::to_string(unit) + " not present");
}

std::vector<double> PipelinePredictor::features_of(const Image& image) const {
  return l2_normalize(fuse(extract(image, branch_a), extract(image, branch_b)));
}

std::vector<double> PipelinePredictor::predict_image(const Image& image) const {
  return predict_pca(pca_transform_row(pca, features_of(image)));
}

std::vector<double> PipelinePredictor::predict_pca(std::span<const double> z) const {
  Matrix row(1, static_cast<int>(z.size()));
  std::copy(z.begin(), z.end(), row.data.begin());
  Matrix probs = forward_infer(mlp, row);
  return probs.data;
}

TabularPredictor PipelinePredictor::tabular() const {
  return [this](std::span<const double> z) { return predict_pca(z); };
}

Attribution lime_explain(const TabularPredictor& predictor, std::span<const double> instance,
                         std::span<const double> background, int target_class,
                         const LimeConfig& config, RandomStream& stream) {
  const int d = static_cast<int>(instance.size());
  if (d == 0) throw DataError("lime: empty instance");
  if (background.size() != instance.size())
    throw DimError("lime: background dimension does not match the instance");
  if (config.n_samples < d + 2)
    throw DataError("lime: n_samples must be at least unit count + 2");

  const double sigma = config.kernel_width_scale * std::sqrt(static_cast<double>(d));
  std::vector<std::vector<uint8_t>> masks;
  std::vector<double> y, weights;
  std::vector<double> z(instance.begin(), instance.end());
  const uint64_t seed = stream.seed();

  for (int j = 0; j < config.n_samples; ++j) {
    std::vector<uint8_t> mask(d, 1);
    if (j > 0)  // sample 0 is the unperturbed instance
      for (int i = 0; i < d; ++i) mask[i] = stream.next_uniform() < 0.5 ? 1 : 0;
    int hamming = 0;
    for (int i = 0; i < d; ++i) {
      z[i] = mask[i] ? instance[i] : background[i];
      hamming += mask[i] == 0;
    }
    y.push_back(predictor(z).at(target_class));
    weights.push_back(std::exp(-static_cast<double>(hamming) * hamming / (sigma * sigma)));
    masks.push_back(std::move(mask));
  }

  auto fit = fit_weighted_ridge(masks, y, weights, config.ridge);

  Attribution attribution;
  attribution.unit_count = d;
  attribution.target_class = target_class;
  attribution.base_value = fit.intercept;
  attribution.seed = seed;
  attribution.mode = "lime-tabular";
  double at_instance = fit.intercept;
  for (double w : fit.weights) at_instance += w;
  attribution.fidelity = std::abs(at_instance - y[0]);
  attribution.units = sorted_entries(fit.weights);
  return attribution;
}

Attribution lime_explain_image(const PipelinePredictor& predictor, const Image& instance,
                               int target_class, const LimeConfig& config,
                               RandomStream& stream) {
  if (instance.empty()) throw DataError("lime: zero-sized image");
  const int d = kLimeGrid * kLimeGrid;
  if (config.n_samples < d + 2)
    throw DataError("lime: n_samples must be at least unit count + 2");

  // Per-cell bounds and mean fill color.
  const int w = instance.width, h = instance.height;
  struct Cell {
    int x0, x1, y0, y1;
    uint8_t fill[3];
  };
  std::vector<Cell> cells(d);
  for (int gy = 0; gy < kLimeGrid; ++gy)
    for (int gx = 0; gx < kLimeGrid; ++gx) {
      Cell& cell = cells[gy * kLimeGrid + gx];
      cell.x0 = gx * w / kLimeGrid;
      cell.x1 = std::max((gx + 1) * w / kLimeGrid, cell.x0 + 1);
      cell.y0 = gy * h / kLimeGrid;
      cell.y1 = std::max((gy + 1) * h / kLimeGrid, cell.y0 + 1);
      double sum[3] = {0, 0, 0};
      int count = 0;
      for (int yy = cell.y0; yy < std::min(cell.y1, h); ++yy)
        for (int xx = cell.x0; xx < std::min(cell.x1, w); ++xx) {
          for (int c = 0; c < 3; ++c) sum[c] += instance.at(xx, yy, c);
          ++count;
        }
      for (int c = 0; c < 3; ++c)
        cell.fill[c] = static_cast<uint8_t>(std::lround(sum[c] / std::max(count, 1)));
    }

  const double sigma = config.kernel_width_scale * std::sqrt(static_cast<double>(d));
  std::vector<std::vector<uint8_t>> masks;
  std::vector<double> y, weights;
  const uint64_t seed = stream.seed();
  Image perturbed = instance;

  for (int j = 0; j < config.n_samples; ++j) {
    std::vector<uint8_t> mask(d, 1);
    if (j > 0)
      for (int i = 0; i < d; ++i) mask[i] = stream.next_uniform() < 0.5 ? 1 : 0;
    perturbed = instance;
    int hamming = 0;
    for (int i = 0; i < d; ++i) {
      if (mask[i]) continue;
      ++hamming;
      const Cell& cell = cells[i];
      for (int yy = cell.y0; yy < std::min(cell.y1, h); ++yy)
        for (int xx = cell.x0; xx < std::min(cell.x1, w); ++xx)
          for (int c = 0; c < 3; ++c) perturbed.at(xx, yy, c) = cell.fill[c];
    }
    y.push_back(predictor.predict_image(perturbed).at(target_class));
    weights.push_back(std::exp(-static_cast<double>(hamming) * hamming / (sigma * sigma)));
    masks.push_back(std::move(mask));
  }

  auto fit = fit_weighted_ridge(masks, y, weights, config.ridge);

  Attribution attribution;
  attribution.unit_count = d;
  attribution.target_class = target_class;
  attribution.base_value = fit.intercept;
  attribution.seed = seed;
  attribution.mode = "lime-image";
  double at_instance = fit.intercept;
  for (double wgt : fit.weights) at_instance += wgt;
  attribution.fidelity = std::abs(at_instance - y[0]);
  attribution.units = sorted_entries(fit.weights);
  return attribution;
}

namespace {

// Mean predictor output over background rows with masked-off entries taken
// from each background row in turn.
double coalition_value(const TabularPredictor& predictor, const Matrix& background,
                       std::span<const double> instance, int target_class,
                       std::span<const uint8_t> mask) {
  const int d = static_cast<int>(instance.size());
  std::vector<double> z(d);
  double sum = 0.0;
  for (int r = 0; r < background.rows; ++r) {
    for (int i = 0; i < d; ++i) z[i] = mask[i] ? instance[i] : background(r, i);
    sum += predictor(z).at(target_class);
  }
  return sum / background.rows;
}

void validate_background(const Matrix& background, size_t dims) {
  if (background.rows == 0) throw DataError("shap: background set must be non-empty");
  if (background.cols != static_cast<int>(dims))
    throw DimError("shap: background dimension does not match the instance");
}

}  // namespace

Attribution shap_kernel(const TabularPredictor& predictor, const Matrix& background,
                        std::span<const double> instance, int target_class,
                        const ShapConfig& config, RandomStream& stream) {
  const int d = static_cast<int>(instance.size());
  if (d == 0) throw DataError("shap: empty instance");
  validate_background(background, instance.size());
  if (config.n_samples < d + 2)
    throw DataError("shap: n_samples must be at least dims + 2");

  const uint64_t seed = stream.seed();
  const std::vector<uint8_t> none(d, 0), all(d, 1);
  const double base = coalition_value(predictor, background, instance, target_class, none);
  const double fx = coalition_value(predictor, background, instance, target_class, all);

  std::vector<double> phi(d, 0.0);
  if (d == 1) {
    phi[0] = fx - base;  // forced by efficiency
  } else {
    // Coalition sizes sampled proportionally to the total Shapley-kernel
    // mass per size, (d-1)/(s(d-s)); the WLS below then uses unit weights.
    std::vector<double> size_cdf(d - 1, 0.0);
    double mass = 0.0;
    for (int s = 1; s < d; ++s) {
      mass += static_cast<double>(d - 1) / (static_cast<double>(s) * (d - s));
      size_cdf[s - 1] = mass;
    }
    for (double& v : size_cdf) v /= mass;

    std::vector<int> indices(d);
    // Eliminating phi_d via the efficiency constraint leaves d-1 unknowns.
    Matrix normal(d - 1, d - 1);
    std::vector<double> rhs(d - 1, 0.0);
    std::vector<double> arow(d - 1);
    for (int j = 0; j < config.n_samples; ++j) {
      const double u = stream.next_uniform();
      int s = 1;
      while (s < d - 1 && u > size_cdf[s - 1]) ++s;
      std::iota(indices.begin(), indices.end(), 0);
      for (int i = 0; i < s; ++i) {
        const int pick = i + static_cast<int>(stream.next_u64() % (d - i));
        std::swap(indices[i], indices[pick]);
      }
      std::vector<uint8_t> mask(d, 0);
      for (int i = 0; i < s; ++i) mask[indices[i]] = 1;

      const double v = coalition_value(predictor, background, instance, target_class, mask);
      const double zd = mask[d - 1] ? 1.0 : 0.0;
      for (int i = 0; i < d - 1; ++i) arow[i] = (mask[i] ? 1.0 : 0.0) - zd;
      const double target = v - base - zd * (fx - base);
      for (int a = 0; a < d - 1; ++a) {
        if (arow[a] == 0.0) continue;
        rhs[a] += arow[a] * target;
        for (int b = 0; b < d - 1; ++b) normal(a, b) += arow[a] * arow[b];
      }
    }
    auto psi = solve_linear(std::move(normal), std::move(rhs),
                            "shap: coalition sample is degenerate, increase n_samples; ");
    double sum = 0.0;
    for (int i = 0; i < d - 1; ++i) {
      phi[i] = psi[i];
      sum += psi[i];
    }
    phi[d - 1] = (fx - base) - sum;
  }

  Attribution attribution;
  attribution.unit_count = d;
  attribution.target_class = target_class;
  attribution.base_value = base;
  attribution.seed = seed;
  attribution.mode = "shap-kernel";
  double total = base;
  for (double p : phi) total += p;
  attribution.fidelity = std::abs(total - fx);
  attribution.units = sorted_entries(phi);
  return attribution;
}

Attribution shap_exact(const TabularPredictor& predictor, const Matrix& background,
                       std::span<const double> instance, int target_class) {
  const int d = static_cast<int>(instance.size());
  if (d == 0) throw DataError("shap: empty instance");
  if (d > 12)
    throw DataError("shap_exact: " + std::to_string(d) +
                    " dims exceed the 2^d enumeration limit of 12; use shap_kernel");
  validate_background(background, instance.size());

  const uint32_t count = 1u << d;
  std::vector<double> values(count);
  std::vector<uint8_t> bits(d);
  for (uint32_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < d; ++i) bits[i] = (mask >> i) & 1u;
    values[mask] = coalition_value(predictor, background, instance, target_class, bits);
  }

  std::vector<double> weight_by_size(d);
  for (int s = 0; s < d; ++s) weight_by_size[s] = shapley_subset_weight(d, s);

  std::vector<double> phi(d, 0.0);
  for (uint32_t mask = 0; mask < count; ++mask) {
    const int size = std::popcount(mask);
    for (int i = 0; i < d; ++i) {
      if ((mask >> i) & 1u) continue;
      phi[i] += weight_by_size[size] * (values[mask | (1u << i)] - values[mask]);
    }
  }

  Attribution attribution;
  attribution.unit_count = d;
  attribution.target_class = target_class;
  attribution.base_value = values[0];
  attribution.mode = "shap-exact";
  double total = values[0];
  for (double p : phi) total += p;
  attribution.fidelity = std::abs(total - values[count - 1]);
  attribution.units = sorted_entries(phi);
  return attribution;
}

GlobalImportance global_importance(std::span<const Attribution> attributions) {
  if (attributions.empty()) throw DataError("global_importance: no attributions");
  const int d = attributions[0].unit_count;
  std::map<int, std::pair<std::vector<double>, int>> sums_by_class;
  std::vector<double> overall(d, 0.0);
  for (const auto& a : attributions) {
    if (a.unit_count != d)
      throw DimError("global_importance: attributions have mixed unit counts");
    auto& [sums, count] = sums_by_class[a.target_class];
    if (sums.empty()) sums.assign(d, 0.0);
    for (const auto& e : a.units) {
      overall[e.unit] += std::abs(e.weight) / attributions.size();
      sums[e.unit] += std::abs(e.weight);
    }
    ++count;
  }
  GlobalImportance gi;
  gi.overall = sorted_entries(overall);
  for (auto& [cls, bundle] : sums_by_class) {
    for (double& v : bundle.first) v /= bundle.second;
    gi.per_class[cls] = sorted_entries(bundle.first);
  }
  return gi;
}

}  // namespace fhc
