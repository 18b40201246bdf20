#include "fhc/optim/train.hpp"

#include <algorithm>
#include <numeric>

#include "fhc/core/error.hpp"
#include "fhc/core/rng.hpp"

namespace fhc {

namespace {

Matrix gather_rows(const Matrix& x, const std::vector<int>& idx, int from, int to) {
  Matrix out(to - from, x.cols);
  for (int r = from; r < to; ++r)
    std::copy(x.row(idx[r]).begin(), x.row(idx[r]).end(), out.row(r - from).begin());
  return out;
}

}  // namespace

TrainResult train(MlpModel model, const Matrix& train_x, const std::vector<int>& train_y,
                  const Matrix& val_x, const std::vector<int>& val_y,
                  const TrainConfig& config) {
  if (train_x.rows == 0 || val_x.rows == 0)
    throw DataError("train: train and validation sets must be non-empty");
  if (train_x.rows != static_cast<int>(train_y.size()) ||
      val_x.rows != static_cast<int>(val_y.size()))
    throw DimError("train: feature/label row counts differ");
  if (config.batch_size < 1) throw DataError("train: batch size must be >= 1");
  std::vector<bool> seen(model.class_count, false);
  for (int y : train_y) {
    if (y < 0 || y >= model.class_count) throw DataError("train: label out of range");
    seen[y] = true;
  }
  for (int c = 0; c < model.class_count; ++c)
    if (!seen[c])
      throw DataError("train: class " + std::to_string(c) + " is absent from the train set");

  Matrix val_onehot = one_hot(val_y, model.class_count);

  ParamRefs params = model_params(model);
  OptimizerState opt = make_optimizer(config.optimizer, params);
  SchedulerState scheduler;
  scheduler.patience = config.plateau_patience;
  scheduler.factor = config.plateau_factor;
  scheduler.floor = config.lr_floor;
  scheduler.learning_rate = config.optimizer.learning_rate;
  EarlyStopState stopper;
  stopper.patience = config.early_stop_patience;

  RandomStream dropout_stream(config.seed);
  std::vector<int> order(train_x.rows);
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    opt.config.learning_rate = scheduler.learning_rate;
    RandomStream shuffle_stream(config.seed + static_cast<uint64_t>(epoch));
    shuffle_stream.shuffle(order);

    double loss_sum = 0.0;
    int start = 0;
    while (start < train_x.rows) {
      int end = std::min(start + config.batch_size, train_x.rows);
      // A trailing single row cannot feed batch norm; fold it into this batch.
      if (train_x.rows - end == 1) end = train_x.rows;
      Matrix batch = gather_rows(train_x, order, start, end);
      std::vector<int> batch_y(order.begin() + start, order.begin() + end);
      for (int& y : batch_y) y = train_y[y];
      Matrix onehot = one_hot(batch_y, model.class_count);

      auto cache = forward_train(model, batch, dropout_stream);
      loss_sum += cce_loss(cache.probs, onehot) * batch.rows;
      auto grads = backward(model, cache, onehot);
      optimizer_step(opt, params, grad_refs(grads));
      start = end;
    }

    Matrix val_probs = forward_infer(model, val_x);
    const double val_loss = cce_loss(val_probs, val_onehot);
    int correct = 0;
    for (int r = 0; r < val_probs.rows; ++r) {
      int best = 0;
      for (int c = 1; c < val_probs.cols; ++c)
        if (val_probs(r, c) > val_probs(r, best)) best = c;
      if (best == val_y[r]) ++correct;
    }

    result.history.push_back({epoch, loss_sum / train_x.rows, val_loss,
                              static_cast<double>(correct) / val_x.rows,
                              opt.config.learning_rate});

    scheduler_update(scheduler, val_loss);
    const bool stop = early_stop_update(stopper, val_loss, model);
    if (!stop && stopper.stall == 0) result.best_epoch = epoch;  // snapshot taken
    if (stop) {
      result.early_stopped = true;
      break;
    }
  }

  result.model = stopper.has_snapshot ? stopper.best_model : model;
  result.best_val_loss = stopper.best_loss;
  return result;
}

}  // namespace fhc
