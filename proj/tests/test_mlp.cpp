#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fhc/core/error.hpp"
#include "fhc/nn/mlp.hpp"
#include "helpers/gradient_check.hpp"

using namespace fhc;

namespace {

Matrix random_batch(int rows, int cols, uint64_t seed) {
  RandomStream rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.next_gaussian();
  return m;
}

// Identity readout so forward_infer(logits) == softmax(logits).
MlpModel passthrough_softmax(int dim) {
  std::vector<LayerSpec> spec = {{dim, dim, Activation::softmax, 0.0, false}};
  RandomStream rng(0);
  MlpModel m = init_model(spec, dim, rng);
  m.layers[0].weights = Matrix::identity(dim);
  m.layers[0].bias.assign(dim, 0.0);
  return m;
}

}  // namespace

TEST_CASE("init is deterministic with zero biases and He-scaled weights") {
  auto spec = default_mlp_spec(512, 9);
  RandomStream s1(31), s2(31);
  auto m1 = init_model(spec, 9, s1);
  auto m2 = init_model(spec, 9, s2);
  for (size_t li = 0; li < m1.layers.size(); ++li) {
    CHECK(m1.layers[li].weights.data == m2.layers[li].weights.data);
    for (double b : m1.layers[li].bias) CHECK(b == 0.0);
  }
  // First layer draws 512*512 weights; sample variance should sit near 2/512.
  const auto& w = m1.layers[0].weights.data;
  double sq = 0.0;
  for (double v : w) sq += v * v;
  const double var = sq / w.size();
  CHECK(var == doctest::Approx(2.0 / 512).epsilon(0.20));
}

TEST_CASE("init rejects broken layer chains") {
  std::vector<LayerSpec> bad = {{4, 8, Activation::relu, 0.0, false},
                                {7, 2, Activation::softmax, 0.0, false}};
  RandomStream rng(1);
  CHECK_THROWS_AS(init_model(bad, 2, rng), DimError);
}

TEST_CASE("softmax of zero logits is uniform") {
  auto m = passthrough_softmax(3);
  Matrix logits(1, 3);
  auto probs = forward_infer(m, logits);
  for (int c = 0; c < 3; ++c) CHECK(probs(0, c) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("softmax rows sum to one even for magnitude-1e3 logits") {
  auto m = passthrough_softmax(4);
  RandomStream rng(17);
  Matrix logits(64, 4);
  for (double& v : logits.data) v = rng.next_uniform(-1000.0, 1000.0);
  auto probs = forward_infer(m, logits);
  for (int r = 0; r < probs.rows; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 4; ++c) sum += probs(r, c);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
  Matrix moderate(8, 4);
  for (double& v : moderate.data) v = rng.next_uniform(-5.0, 5.0);
  auto p2 = forward_infer(m, moderate);
  for (double v : p2.data) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("inference is pure: repeated calls and batch splits agree") {
  auto spec = default_mlp_spec(10, 3);
  RandomStream rng(5);
  auto model = init_model(spec, 3, rng);
  Matrix batch = random_batch(12, 10, 6);

  auto p1 = forward_infer(model, batch);
  auto p2 = forward_infer(model, batch);
  CHECK(p1.data == p2.data);

  // Row-by-row inference matches whole-batch inference bitwise.
  for (int r = 0; r < batch.rows; ++r) {
    Matrix row(1, 10);
    for (int c = 0; c < 10; ++c) row(0, c) = batch(r, c);
    auto pr = forward_infer(model, row);
    for (int c = 0; c < 3; ++c) CHECK(pr(0, c) == p1(r, c));
  }
}

TEST_CASE("train-mode forward rejects single-row batches when BN is present") {
  auto spec = default_mlp_spec(6, 2);
  RandomStream rng(2);
  auto model = init_model(spec, 2, rng);
  Matrix one(1, 6, 0.5);
  RandomStream s(3);
  CHECK_THROWS_AS(forward_train(model, one, s), DimError);
}

TEST_CASE("cross-entropy hand values") {
  Matrix perfect(1, 3);
  perfect(0, 1) = 1.0;
  Matrix label(1, 3);
  label(0, 1) = 1.0;
  CHECK(cce_loss(perfect, label) == doctest::Approx(0.0).epsilon(1e-12));

  Matrix uniform9(1, 9, 1.0 / 9);
  Matrix y9(1, 9);
  y9(0, 4) = 1.0;
  CHECK(cce_loss(uniform9, y9) == doctest::Approx(std::log(9.0)).epsilon(1e-12));

  Matrix half(1, 2);
  half(0, 0) = 0.5;
  half(0, 1) = 0.5;
  Matrix y2(1, 2);
  y2(0, 0) = 1.0;
  CHECK(cce_loss(half, y2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("backward matches central finite differences on a 4-3-2 net") {
  std::vector<LayerSpec> spec = {{4, 3, Activation::relu, 0.2, true},
                                 {3, 2, Activation::softmax, 0.0, false}};
  RandomStream rng(11);
  auto model = init_model(spec, 2, rng);
  Matrix batch = random_batch(8, 4, 12);
  std::vector<int> labels = {0, 1, 1, 0, 1, 0, 0, 1};
  Matrix onehot = one_hot(labels, 2);
  const double err = fhc_test::gradient_check(model, batch, onehot, /*mask_seed=*/77,
                                              /*max_coords=*/10000);
  CHECK(err < 1e-4);
}

TEST_CASE("backward matches finite differences on random architectures") {
  RandomStream arch_rng(2025);
  for (int trial = 0; trial < 6; ++trial) {
    const int hidden = 1 + static_cast<int>(arch_rng.next_u64() % 4);
    const int input = 3 + static_cast<int>(arch_rng.next_u64() % 6);
    const int classes = 2 + static_cast<int>(arch_rng.next_u64() % 3);
    std::vector<LayerSpec> spec;
    int in = input;
    for (int l = 0; l < hidden; ++l) {
      const int width = 4 + static_cast<int>(arch_rng.next_u64() % 61);
      const bool bn = (arch_rng.next_u64() % 2) == 0;
      const double rate = 0.1 * static_cast<double>(arch_rng.next_u64() % 5);
      spec.push_back({in, width, Activation::relu, rate, bn});
      in = width;
    }
    spec.push_back({in, classes, Activation::softmax, 0.0, false});

    RandomStream init_rng(300 + trial);
    auto model = init_model(spec, classes, init_rng);
    Matrix batch = random_batch(6, input, 400 + trial);
    std::vector<int> labels(6);
    for (auto& l : labels) l = static_cast<int>(arch_rng.next_u64() % classes);
    Matrix onehot = one_hot(labels, classes);
    const double err =
        fhc_test::gradient_check(model, batch, onehot, 500 + trial, /*max_coords=*/150);
    CAPTURE(trial);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("gradient vanishes at an exact-fit point") {
  // Large logit gap drives the loss below 1e-9; the gradient must follow.
  std::vector<LayerSpec> spec = {{2, 2, Activation::softmax, 0.0, false}};
  RandomStream rng(0);
  auto model = init_model(spec, 2, rng);
  model.layers[0].weights = Matrix(2, 2);
  model.layers[0].weights(0, 0) = 40.0;
  model.layers[0].weights(1, 1) = 40.0;
  model.layers[0].bias = {0.0, 0.0};

  Matrix batch(4, 2);
  std::vector<int> labels = {0, 1, 0, 1};
  for (int r = 0; r < 4; ++r) batch(r, labels[r]) = 1.0;
  Matrix onehot = one_hot(labels, 2);

  RandomStream s(1);
  auto cache = forward_train(model, batch, s);
  CHECK(cce_loss(cache.probs, onehot) < 1e-9);
  auto grads = backward(model, cache, onehot);
  double norm = 0.0;
  for (const auto& lg : grads.layers) {
    for (double v : lg.weights.data) norm += v * v;
    for (double v : lg.bias) norm += v * v;
  }
  CHECK(std::sqrt(norm) < 1e-6);
}

TEST_CASE("duplicating the batch leaves mean-loss gradients unchanged") {
  std::vector<LayerSpec> spec = {{5, 8, Activation::relu, 0.0, true},
                                 {8, 3, Activation::softmax, 0.0, false}};
  RandomStream rng(9);
  auto model = init_model(spec, 3, rng);
  Matrix batch = random_batch(4, 5, 10);
  std::vector<int> labels = {0, 2, 1, 1};

  Matrix doubled(8, 5);
  std::vector<int> labels2(8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 5; ++c) doubled(r, c) = batch(r % 4, c);
    labels2[r] = labels[r % 4];
  }

  auto model_a = model;
  auto model_b = model;
  RandomStream sa(1), sb(1);
  auto ca = forward_train(model_a, batch, sa);
  auto cb = forward_train(model_b, doubled, sb);
  auto ga = backward(model_a, ca, one_hot(labels, 3));
  auto gb = backward(model_b, cb, one_hot(labels2, 3));
  for (size_t li = 0; li < ga.layers.size(); ++li)
    for (size_t i = 0; i < ga.layers[li].weights.data.size(); ++i)
      CHECK(ga.layers[li].weights.data[i] ==
            doctest::Approx(gb.layers[li].weights.data[i]).epsilon(1e-12));
}

TEST_CASE("one small step along the exact gradient decreases the loss") {
  // BN-free net so train-mode loss equals inference loss and no statistics
  // drift enters the comparison.
  std::vector<LayerSpec> spec = {{6, 16, Activation::relu, 0.0, false},
                                 {16, 4, Activation::softmax, 0.0, false}};
  RandomStream rng(14);
  auto model = init_model(spec, 4, rng);
  Matrix batch = random_batch(16, 6, 15);
  std::vector<int> labels(16);
  RandomStream lr(16);
  for (auto& l : labels) l = static_cast<int>(lr.next_u64() % 4);
  Matrix onehot = one_hot(labels, 4);

  RandomStream s(0);
  auto cache = forward_train(model, batch, s);
  const double before = cce_loss(cache.probs, onehot);
  auto grads = backward(model, cache, onehot);

  const double eta = 1e-4;
  for (size_t li = 0; li < model.layers.size(); ++li) {
    for (size_t i = 0; i < model.layers[li].weights.data.size(); ++i)
      model.layers[li].weights.data[i] -= eta * grads.layers[li].weights.data[i];
    for (size_t i = 0; i < model.layers[li].bias.size(); ++i)
      model.layers[li].bias[i] -= eta * grads.layers[li].bias[i];
  }
  const double after = cce_loss(forward_infer(model, batch), onehot);
  CHECK(after < before);
}

TEST_CASE("predict breaks ties toward the lowest class index") {
  auto m = passthrough_softmax(2);
  Matrix x(1, 2);  // zero logits -> exact tie
  auto pred = predict(m, x);
  CHECK(pred.labels[0] == 0);

  auto m3 = passthrough_softmax(3);
  Matrix x3(1, 3);
  x3(0, 0) = std::log(0.2);
  x3(0, 1) = std::log(0.5);
  x3(0, 2) = std::log(0.3);
  CHECK(predict(m3, x3).labels[0] == 1);
}

TEST_CASE("predict does not depend on batch composition") {
  auto spec = default_mlp_spec(7, 3);
  RandomStream rng(21);
  auto model = init_model(spec, 3, rng);
  Matrix batch = random_batch(10, 7, 22);
  auto full = predict(model, batch);
  for (int r = 0; r < batch.rows; ++r) {
    Matrix row(1, 7);
    for (int c = 0; c < 7; ++c) row(0, c) = batch(r, c);
    auto single = predict(model, row);
    CHECK(single.labels[0] == full.labels[r]);
    for (int c = 0; c < 3; ++c) CHECK(single.probs(0, c) == full.probs(r, c));
  }
}

TEST_CASE("parameter counts reproduce the layer formulas") {
  CHECK(param_count({{512, 256, Activation::relu, 0.0, false}}) == 131328);
  CHECK(param_count({{256, 128, Activation::relu, 0.0, false}}) == 32896);
  CHECK(param_count({{128, 64, Activation::relu, 0.0, false}}) == 8256);
  // k=300, C=9: 154112 + 131328 + 32896 + 8256 + 585.
  CHECK(param_count(default_mlp_spec(300, 9)) == 327177);
}
