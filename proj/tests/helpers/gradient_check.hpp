#ifndef FHC_TESTS_GRADIENT_CHECK_HPP
#define FHC_TESTS_GRADIENT_CHECK_HPP

// Central finite-difference oracle for the MLP backward pass. Every loss
// evaluation replays the same dropout masks by reseeding the stream, so the
// difference quotient targets exactly the function backward differentiates.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fhc/core/matrix.hpp"
#include "fhc/core/rng.hpp"
#include "fhc/nn/mlp.hpp"

namespace fhc_test {

struct ParamSlot {
  double* value;
  double analytic;
};

inline std::vector<ParamSlot> collect_slots(fhc::MlpModel& model, const fhc::Gradients& grads) {
  std::vector<ParamSlot> slots;
  for (size_t li = 0; li < model.layers.size(); ++li) {
    auto& layer = model.layers[li];
    const auto& g = grads.layers[li];
    for (size_t i = 0; i < layer.weights.data.size(); ++i)
      slots.push_back({&layer.weights.data[i], g.weights.data[i]});
    for (size_t i = 0; i < layer.bias.size(); ++i)
      slots.push_back({&layer.bias[i], g.bias[i]});
    for (size_t i = 0; i < layer.gamma.size(); ++i)
      slots.push_back({&layer.gamma[i], g.gamma[i]});
    for (size_t i = 0; i < layer.beta.size(); ++i)
      slots.push_back({&layer.beta[i], g.beta[i]});
  }
  return slots;
}

// Max relative error between backward() and central differences over
// `max_coords` coordinates spread evenly across all parameter tensors.
// Coordinates whose magnitudes sit below the finite-difference resolution
// are compared absolutely instead.
inline double gradient_check(fhc::MlpModel model, const fhc::Matrix& batch,
                             const fhc::Matrix& onehot, uint64_t mask_seed,
                             size_t max_coords = 200) {
  const double h = 1e-5;

  auto loss_at = [&](fhc::MlpModel& m) {
    fhc::RandomStream stream(mask_seed);
    auto cache = fhc::forward_train(m, batch, stream);
    return fhc::cce_loss(cache.probs, onehot);
  };

  fhc::Gradients grads;
  {
    fhc::MlpModel scratch = model;
    fhc::RandomStream stream(mask_seed);
    auto cache = fhc::forward_train(scratch, batch, stream);
    grads = fhc::backward(model, cache, onehot);
  }
  auto slots = collect_slots(model, grads);

  const size_t stride = slots.size() <= max_coords ? 1 : slots.size() / max_coords;
  double worst = 0.0;
  for (size_t i = 0; i < slots.size(); i += stride) {
    auto& slot = slots[i];
    const double saved = *slot.value;
    *slot.value = saved + h;
    const double up = loss_at(model);
    *slot.value = saved - h;
    const double down = loss_at(model);
    *slot.value = saved;
    const double fd = (up - down) / (2.0 * h);

    const double mag = std::max(std::abs(fd), std::abs(slot.analytic));
    const double err = mag >= 1e-6 ? std::abs(fd - slot.analytic) / mag
                                   : std::abs(fd - slot.analytic);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace fhc_test

#endif
