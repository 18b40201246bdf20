#ifndef FHC_NN_MLP_HPP
#define FHC_NN_MLP_HPP

#include <span>
#include <string>
#include <vector>

#include "fhc/core/matrix.hpp"
#include "fhc/core/rng.hpp"

namespace fhc {

enum class Activation { relu, softmax };

struct LayerSpec {
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::relu;
  double dropout_rate = 0.0;  // in [0, 1)
  bool batch_norm = false;
};

// Default head: k -> 512(do 0.5) -> 256(0.4) -> 128(0.3) -> 64(0.2) -> C softmax,
// batch norm on every hidden layer.
std::vector<LayerSpec> default_mlp_spec(int input_dim, int class_count);

// Compact variant: k -> 256(0.5) -> 128(0.4) -> 64(0.3) -> C softmax.
std::vector<LayerSpec> compact_mlp_spec(int input_dim, int class_count);

struct Layer {
  Matrix weights;  // out_dim x in_dim
  std::vector<double> bias;
  // Batch-norm parameters; empty when the layer has no batch norm.
  std::vector<double> gamma, beta, running_mean, running_var;
};

struct MlpModel {
  std::vector<LayerSpec> spec;
  std::vector<Layer> layers;
  int class_count = 0;
};

// He-Gaussian weights (std sqrt(2/in_dim)), zero biases, gamma 1 / beta 0,
// running stats (0, 1).
MlpModel init_model(const std::vector<LayerSpec>& spec, int class_count, RandomStream& stream);

// Per-layer intermediates captured by the training forward pass; backward
// reuses the dropout masks and batch statistics recorded here.
struct LayerCache {
  Matrix input;
  Matrix xhat;                          // normalized pre-activation (BN layers)
  std::vector<double> batch_mean;
  std::vector<double> inv_std;
  Matrix pre_act;                       // after affine+BN, before the activation
  Matrix dropout_mask;                  // 0 or 1/(1-rate); empty when unused
  Matrix output;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  Matrix probs;
};

// Inference: affine -> BN with running stats -> ReLU per hidden layer, final
// affine -> numerically stable softmax. Pure function of (model, batch).
Matrix forward_infer(const MlpModel& model, const Matrix& batch);

// Training: BN uses batch statistics (and updates running stats with
// momentum 0.9), dropout applies inverted scaling. Requires batch >= 2 rows
// when any layer has batch norm.
ForwardCache forward_train(MlpModel& model, const Matrix& batch, RandomStream& stream);

// Mean over the batch of -sum_c y log(p), probabilities clamped to >= 1e-12.
double cce_loss(const Matrix& probs, const Matrix& onehot);

struct LayerGrads {
  Matrix weights;
  std::vector<double> bias, gamma, beta;
};

struct Gradients {
  std::vector<LayerGrads> layers;
};

// Exact gradients of the mean CCE loss, including the batch-statistic terms
// of the BN backward pass.
Gradients backward(const MlpModel& model, const ForwardCache& cache, const Matrix& onehot);

// Argmax predictions (ties break toward the lowest class index) plus rows of
// class probabilities.
struct Prediction {
  std::vector<int> labels;
  Matrix probs;
};
Prediction predict(const MlpModel& model, const Matrix& features);

// Sum over layers of (in_dim + 1) * out_dim; batch-norm parameters are not
// counted.
long param_count(const std::vector<LayerSpec>& spec);

Matrix one_hot(std::span<const int> labels, int class_count);

}  // namespace fhc

#endif
