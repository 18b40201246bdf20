#ifndef FHC_OPTIM_OPTIM_HPP
#define FHC_OPTIM_OPTIM_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fhc/nn/mlp.hpp"

namespace fhc {

enum class OptimizerRule { adam, adamw, sgd_momentum, rmsprop };

OptimizerRule optimizer_rule_from_name(const std::string& name);
std::string optimizer_rule_name(OptimizerRule rule);

struct OptimizerConfig {
  OptimizerRule rule = OptimizerRule::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;          // adam/adamw first-moment decay
  double beta2 = 0.999;        // adam/adamw second-moment decay
  double epsilon = 1e-8;
  double momentum = 0.9;       // sgd velocity coefficient
  double rms_beta = 0.9;       // rmsprop square-average decay
  double weight_decay = 0.01;  // adamw decoupled decay
};

// Accumulators mirror the parameter slot list handed to each step.
struct OptimizerState {
  OptimizerConfig config;
  long step_count = 0;
  std::vector<std::vector<double>> first_moment;   // adam/adamw m, sgd velocity
  std::vector<std::vector<double>> second_moment;  // adam/adamw v, rmsprop square average
};

using ParamRefs = std::vector<std::span<double>>;
using GradRefs = std::vector<std::span<const double>>;

// Parameter/gradient slots in a fixed order (per layer: weights, bias,
// gamma, beta where present).
ParamRefs model_params(MlpModel& model);
GradRefs grad_refs(const Gradients& grads);

OptimizerState make_optimizer(const OptimizerConfig& config, const ParamRefs& params);

// One update over all slots. Throws NumericError on non-finite gradients and
// DimError when shapes do not mirror the state.
void optimizer_step(OptimizerState& state, const ParamRefs& params, const GradRefs& grads);

// ReduceLROnPlateau: multiply the learning rate by `factor` after `patience`
// epochs without improvement, never below `floor`.
struct SchedulerState {
  double best_loss = std::numeric_limits<double>::infinity();
  int stall = 0;
  double factor = 0.1;
  int patience = 5;
  double floor = 1e-7;
  double learning_rate = 0.0;
};

// Returns true when the learning rate was reduced this update.
bool scheduler_update(SchedulerState& state, double val_loss);

struct EarlyStopState {
  double best_loss = std::numeric_limits<double>::infinity();
  int stall = 0;
  int patience = 10;
  MlpModel best_model;
  bool has_snapshot = false;
};

// Returns true when training should stop; snapshots the model on improvement.
bool early_stop_update(EarlyStopState& state, double val_loss, const MlpModel& model);

// Plateau/early-stop improvement means a decrease of at least this amount.
constexpr double kMinImprovement = 1e-6;

}  // namespace fhc

#endif
