#ifndef FHC_OPTIM_TRAIN_HPP
#define FHC_OPTIM_TRAIN_HPP

#include <cstdint>
#include <vector>

#include "fhc/core/matrix.hpp"
#include "fhc/nn/mlp.hpp"
#include "fhc/optim/optim.hpp"

namespace fhc {

struct TrainConfig {
  OptimizerConfig optimizer;
  int batch_size = 32;
  int max_epochs = 100;
  int early_stop_patience = 10;
  int plateau_patience = 5;
  double plateau_factor = 0.1;
  double lr_floor = 1e-7;
  uint64_t seed = 0;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double learning_rate = 0.0;  // rate in effect during the epoch
};

struct TrainResult {
  MlpModel model;  // best-validation snapshot
  std::vector<EpochStats> history;
  bool early_stopped = false;
  double best_val_loss = 0.0;
  int best_epoch = 0;
};

// Epoch loop: seeded shuffle, mini-batches (a trailing batch of one row is
// merged into its predecessor), forward/backward/optimizer per batch, then
// validation loss drives the plateau scheduler and early stopping. Batch
// order is reshuffled each epoch from seed + epoch; dropout draws come from
// a stream seeded with the run seed.
TrainResult train(MlpModel model, const Matrix& train_x, const std::vector<int>& train_y,
                  const Matrix& val_x, const std::vector<int>& val_y, const TrainConfig& config);

}  // namespace fhc

#endif
