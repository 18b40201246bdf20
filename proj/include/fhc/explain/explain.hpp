#ifndef FHC_EXPLAIN_EXPLAIN_HPP
#define FHC_EXPLAIN_EXPLAIN_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fhc/core/matrix.hpp"
#include "fhc/core/rng.hpp"
#include "fhc/nn/mlp.hpp"
#include "fhc/pipeline/extractor.hpp"
#include "fhc/pipeline/pca.hpp"

namespace fhc {

// Maps a feature vector to per-class probabilities (or any scalar outputs).
using TabularPredictor = std::function<std::vector<double>(std::span<const double>)>;

// image -> fused -> L2 -> PCA -> MLP probabilities, plus the tabular variant
// that starts from PCA-space vectors.
struct PipelinePredictor {
  Extractor branch_a;
  Extractor branch_b;
  PcaModel pca;
  MlpModel mlp;
  std::vector<std::string> labels;

  std::vector<double> features_of(const Image& image) const;  // fused + normalized
  std::vector<double> predict_image(const Image& image) const;
  std::vector<double> predict_pca(std::span<const double> z) const;
  TabularPredictor tabular() const;
};

struct AttributionEntry {
  int unit = 0;
  double weight = 0.0;
};

struct Attribution {
  std::vector<AttributionEntry> units;  // sorted by |weight| descending
  int unit_count = 0;
  int target_class = 0;
  double base_value = 0.0;
  double fidelity = 0.0;  // |surrogate(instance) - predictor(instance)|
  uint64_t seed = 0;
  std::string mode;

  double weight_of(int unit) const;
};

struct LimeConfig {
  int n_samples = 1000;
  double ridge = 1e-3;
  double kernel_width_scale = 0.75;  // sigma = scale * sqrt(unit count)
};

// Local surrogate over individual dimensions: random binary masks replace
// masked units by the background value, and a ridge-regularized weighted
// least squares with kernel exp(-hamming^2 / sigma^2) fits the weights.
Attribution lime_explain(const TabularPredictor& predictor, std::span<const double> instance,
                         std::span<const double> background, int target_class,
                         const LimeConfig& config, RandomStream& stream);

// Image mode: units are the cells of an 8x8 grid; masked cells are filled
// with their mean color.
constexpr int kLimeGrid = 8;
Attribution lime_explain_image(const PipelinePredictor& predictor, const Image& instance,
                               int target_class, const LimeConfig& config,
                               RandomStream& stream);

struct ShapConfig {
  int n_samples = 200;
};

// Kernel SHAP: coalitions sampled with Shapley-kernel weighting, missing
// features imputed by averaging the predictor over background rows, and a
// least-squares fit constrained so attributions sum to f(x) - base.
Attribution shap_kernel(const TabularPredictor& predictor, const Matrix& background,
                        std::span<const double> instance, int target_class,
                        const ShapConfig& config, RandomStream& stream);

// Exact Shapley values by full subset enumeration; dims <= 12.
Attribution shap_exact(const TabularPredictor& predictor, const Matrix& background,
                       std::span<const double> instance, int target_class);

struct GlobalImportance {
  std::vector<AttributionEntry> overall;                      // mean |phi|, descending
  std::map<int, std::vector<AttributionEntry>> per_class;     // keyed by target class
};

GlobalImportance global_importance(std::span<const Attribution> attributions);

}  // namespace fhc

#endif
