#include "fhc/optim/optim.hpp"

#include <algorithm>
#include <cmath>

#include "fhc/core/error.hpp"

namespace fhc {

OptimizerRule optimizer_rule_from_name(const std::string& name) {
  if (name == "adam") return OptimizerRule::adam;
  if (name == "adamw") return OptimizerRule::adamw;
  if (name == "sgd") return OptimizerRule::sgd_momentum;
  if (name == "rmsprop") return OptimizerRule::rmsprop;
  throw DataError("unknown optimizer '" + name + "' (expected adam, adamw, sgd, rmsprop)");
}

std::string optimizer_rule_name(OptimizerRule rule) {
  switch (rule) {
    case OptimizerRule::adam: return "adam";
    case OptimizerRule::adamw: return "adamw";
    case OptimizerRule::sgd_momentum: return "sgd";
    case OptimizerRule::rmsprop: return "rmsprop";
  }
  return "?";
}

ParamRefs model_params(MlpModel& model) {
  ParamRefs refs;
  for (auto& layer : model.layers) {
    refs.emplace_back(layer.weights.data);
    refs.emplace_back(layer.bias);
    if (!layer.gamma.empty()) {
      refs.emplace_back(layer.gamma);
      refs.emplace_back(layer.beta);
    }
  }
  return refs;
}

GradRefs grad_refs(const Gradients& grads) {
  GradRefs refs;
  for (const auto& lg : grads.layers) {
    refs.emplace_back(lg.weights.data);
    refs.emplace_back(lg.bias);
    if (!lg.gamma.empty()) {
      refs.emplace_back(lg.gamma);
      refs.emplace_back(lg.beta);
    }
  }
  return refs;
}

OptimizerState make_optimizer(const OptimizerConfig& config, const ParamRefs& params) {
  OptimizerState state;
  state.config = config;
  for (const auto& slot : params) {
    state.first_moment.emplace_back(slot.size(), 0.0);
    state.second_moment.emplace_back(slot.size(), 0.0);
  }
  return state;
}

void optimizer_step(OptimizerState& state, const ParamRefs& params, const GradRefs& grads) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size())
    throw DimError("optimizer_step: slot count mismatch");
  const auto& cfg = state.config;
  state.step_count += 1;
  const long t = state.step_count;

  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));

  for (size_t slot = 0; slot < params.size(); ++slot) {
    auto p = params[slot];
    auto g = grads[slot];
    auto& m = state.first_moment[slot];
    auto& v = state.second_moment[slot];
    if (p.size() != g.size() || p.size() != m.size())
      throw DimError("optimizer_step: slot shape mismatch");
    for (size_t i = 0; i < p.size(); ++i) {
      const double grad = g[i];
      if (!std::isfinite(grad)) throw NumericError("optimizer_step: non-finite gradient");
      switch (cfg.rule) {
        case OptimizerRule::adam: {
          m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad;
          v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad * grad;
          const double mhat = m[i] / bias1;
          const double vhat = v[i] / bias2;
          p[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
          break;
        }
        case OptimizerRule::adamw: {
          m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad;
          v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad * grad;
          const double mhat = m[i] / bias1;
          const double vhat = v[i] / bias2;
          p[i] -= cfg.learning_rate *
                  (mhat / (std::sqrt(vhat) + cfg.epsilon) + cfg.weight_decay * p[i]);
          break;
        }
        case OptimizerRule::sgd_momentum: {
          m[i] = cfg.momentum * m[i] + grad;
          p[i] -= cfg.learning_rate * m[i];
          break;
        }
        case OptimizerRule::rmsprop: {
          v[i] = cfg.rms_beta * v[i] + (1.0 - cfg.rms_beta) * grad * grad;
          p[i] -= cfg.learning_rate * grad / (std::sqrt(v[i]) + cfg.epsilon);
          break;
        }
      }
    }
  }
}

bool scheduler_update(SchedulerState& state, double val_loss) {
  if (!std::isfinite(val_loss)) throw NumericError("scheduler_update: non-finite loss");
  if (val_loss <= state.best_loss - kMinImprovement) {
    state.best_loss = val_loss;
    state.stall = 0;
    return false;
  }
  if (++state.stall >= state.patience) {
    state.learning_rate = std::max(state.learning_rate * state.factor, state.floor);
    state.stall = 0;
    return true;
  }
  return false;
}

bool early_stop_update(EarlyStopState& state, double val_loss, const MlpModel& model) {
  if (!std::isfinite(val_loss)) throw NumericError("early_stop_update: non-finite loss");
  if (val_loss <= state.best_loss - kMinImprovement || !state.has_snapshot) {
    state.best_loss = val_loss;
    state.stall = 0;
    state.best_model = model;
    state.has_snapshot = true;
    return false;
  }
  return ++state.stall >= state.patience;
}

}  // namespace fhc
