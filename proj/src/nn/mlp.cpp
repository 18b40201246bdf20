#include "fhc/nn/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "fhc/core/error.hpp"

namespace fhc {

namespace {

constexpr double kBnEpsilon = 1e-5;
constexpr double kBnMomentum = 0.9;
constexpr double kProbFloor = 1e-12;

void validate_spec(const std::vector<LayerSpec>& spec, int class_count) {
  if (spec.empty()) throw DimError("mlp: empty layer spec");
  for (size_t i = 0; i < spec.size(); ++i) {
    const auto& l = spec[i];
    if (l.in_dim <= 0 || l.out_dim <= 0) throw DimError("mlp: layer dims must be positive");
    if (l.dropout_rate < 0.0 || l.dropout_rate >= 1.0)
      throw DimError("mlp: dropout rate must be in [0, 1)");
    if (i + 1 < spec.size()) {
      if (l.out_dim != spec[i + 1].in_dim) throw DimError("mlp: layer dims do not chain");
      if (l.activation == Activation::softmax)
        throw DimError("mlp: softmax is only valid on the final layer");
    }
  }
  const auto& last = spec.back();
  if (last.activation != Activation::softmax)
    throw DimError("mlp: final layer must be softmax");
  if (last.out_dim != class_count)
    throw DimError("mlp: final layer width must equal the class count");
}

// X (B x in) * W^T (in x out) + b, row-major friendly.
Matrix affine(const Matrix& x, const Matrix& w, const std::vector<double>& b) {
  Matrix out(x.rows, w.rows);
  for (int s = 0; s < x.rows; ++s) {
    const double* xrow = x.data.data() + static_cast<size_t>(s) * x.cols;
    double* orow = out.data.data() + static_cast<size_t>(s) * w.rows;
    for (int o = 0; o < w.rows; ++o) {
      const double* wrow = w.data.data() + static_cast<size_t>(o) * w.cols;
      double acc = b[o];
      for (int i = 0; i < x.cols; ++i) acc += xrow[i] * wrow[i];
      orow[o] = acc;
    }
  }
  return out;
}

void softmax_rows(Matrix& m) {
  for (int r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

bool has_batch_norm(const MlpModel& model) {
  for (const auto& l : model.spec)
    if (l.batch_norm) return true;
  return false;
}

}  // namespace

std::vector<LayerSpec> default_mlp_spec(int input_dim, int class_count) {
  const int widths[] = {512, 256, 128, 64};
  const double rates[] = {0.5, 0.4, 0.3, 0.2};
  std::vector<LayerSpec> spec;
  int in = input_dim;
  for (int i = 0; i < 4; ++i) {
    spec.push_back({in, widths[i], Activation::relu, rates[i], true});
    in = widths[i];
  }
  spec.push_back({in, class_count, Activation::softmax, 0.0, false});
  return spec;
}

std::vector<LayerSpec> compact_mlp_spec(int input_dim, int class_count) {
  const int widths[] = {256, 128, 64};
  const double rates[] = {0.5, 0.4, 0.3};
  std::vector<LayerSpec> spec;
  int in = input_dim;
  for (int i = 0; i < 3; ++i) {
    spec.push_back({in, widths[i], Activation::relu, rates[i], true});
    in = widths[i];
  }
  spec.push_back({in, class_count, Activation::softmax, 0.0, false});
  return spec;
}

MlpModel init_model(const std::vector<LayerSpec>& spec, int class_count, RandomStream& stream) {
  validate_spec(spec, class_count);
  MlpModel model;
  model.spec = spec;
  model.class_count = class_count;
  for (const auto& ls : spec) {
    Layer layer;
    layer.weights = Matrix(ls.out_dim, ls.in_dim);
    const double scale = std::sqrt(2.0 / ls.in_dim);
    for (double& w : layer.weights.data) w = stream.next_gaussian() * scale;
    layer.bias.assign(ls.out_dim, 0.0);
    if (ls.batch_norm) {
      layer.gamma.assign(ls.out_dim, 1.0);
      layer.beta.assign(ls.out_dim, 0.0);
      layer.running_mean.assign(ls.out_dim, 0.0);
      layer.running_var.assign(ls.out_dim, 1.0);
    }
    model.layers.push_back(std::move(layer));
  }
  return model;
}

Matrix forward_infer(const MlpModel& model, const Matrix& batch) {
  if (batch.cols != model.spec.front().in_dim)
    throw DimError("forward: batch has " + std::to_string(batch.cols) +
                   " columns, model expects " + std::to_string(model.spec.front().in_dim));
  Matrix h = batch;
  for (size_t li = 0; li < model.layers.size(); ++li) {
    const auto& ls = model.spec[li];
    const auto& layer = model.layers[li];
    Matrix z = affine(h, layer.weights, layer.bias);
    if (ls.batch_norm) {
      for (int o = 0; o < ls.out_dim; ++o) {
        const double inv = 1.0 / std::sqrt(layer.running_var[o] + kBnEpsilon);
        for (int s = 0; s < z.rows; ++s)
          z(s, o) = layer.gamma[o] * (z(s, o) - layer.running_mean[o]) * inv + layer.beta[o];
      }
    }
    if (ls.activation == Activation::relu) {
      for (double& v : z.data) v = std::max(v, 0.0);
    } else {
      softmax_rows(z);
    }
    h = std::move(z);
  }
  return h;
}

ForwardCache forward_train(MlpModel& model, const Matrix& batch, RandomStream& stream) {
  if (batch.cols != model.spec.front().in_dim)
    throw DimError("forward: batch width does not match the model input");
  if (batch.rows < 2 && has_batch_norm(model))
    throw DimError("forward: batch norm needs at least 2 rows in train mode");

  ForwardCache cache;
  cache.layers.resize(model.layers.size());
  Matrix h = batch;
  const int rows = batch.rows;

  for (size_t li = 0; li < model.layers.size(); ++li) {
    const auto& ls = model.spec[li];
    auto& layer = model.layers[li];
    auto& lc = cache.layers[li];
    lc.input = h;
    Matrix z = affine(h, layer.weights, layer.bias);

    if (ls.batch_norm) {
      lc.batch_mean.assign(ls.out_dim, 0.0);
      lc.inv_std.assign(ls.out_dim, 0.0);
      for (int o = 0; o < ls.out_dim; ++o) {
        double mean = 0.0;
        for (int s = 0; s < rows; ++s) mean += z(s, o);
        mean /= rows;
        double var = 0.0;
        for (int s = 0; s < rows; ++s) {
          const double d = z(s, o) - mean;
          var += d * d;
        }
        var /= rows;
        lc.batch_mean[o] = mean;
        lc.inv_std[o] = 1.0 / std::sqrt(var + kBnEpsilon);
        layer.running_mean[o] = kBnMomentum * layer.running_mean[o] + (1 - kBnMomentum) * mean;
        layer.running_var[o] = kBnMomentum * layer.running_var[o] + (1 - kBnMomentum) * var;
      }
      lc.xhat = Matrix(rows, ls.out_dim);
      for (int s = 0; s < rows; ++s)
        for (int o = 0; o < ls.out_dim; ++o) {
          lc.xhat(s, o) = (z(s, o) - lc.batch_mean[o]) * lc.inv_std[o];
          z(s, o) = layer.gamma[o] * lc.xhat(s, o) + layer.beta[o];
        }
    }
    lc.pre_act = z;

    if (ls.activation == Activation::relu) {
      for (double& v : z.data) v = std::max(v, 0.0);
      if (ls.dropout_rate > 0.0) {
        lc.dropout_mask = Matrix(rows, ls.out_dim);
        const double keep = 1.0 - ls.dropout_rate;
        const double scale = 1.0 / keep;
        for (double& m : lc.dropout_mask.data)
          m = stream.next_uniform() < keep ? scale : 0.0;
        for (size_t i = 0; i < z.data.size(); ++i) z.data[i] *= lc.dropout_mask.data[i];
      }
    } else {
      softmax_rows(z);
    }
    lc.output = z;
    h = std::move(z);
  }
  cache.probs = h;
  return cache;
}

double cce_loss(const Matrix& probs, const Matrix& onehot) {
  if (probs.rows != onehot.rows || probs.cols != onehot.cols)
    throw DimError("cce_loss: probability and label shapes differ");
  if (probs.rows == 0) throw DimError("cce_loss: empty batch");
  double total = 0.0;
  for (int r = 0; r < probs.rows; ++r)
    for (int c = 0; c < probs.cols; ++c)
      if (onehot(r, c) != 0.0)
        total -= onehot(r, c) * std::log(std::max(probs(r, c), kProbFloor));
  return total / probs.rows;
}

Gradients backward(const MlpModel& model, const ForwardCache& cache, const Matrix& onehot) {
  const int rows = cache.probs.rows;
  if (onehot.rows != rows || onehot.cols != cache.probs.cols)
    throw DimError("backward: label shape does not match the forward pass");

  Gradients grads;
  grads.layers.resize(model.layers.size());

  // Softmax + mean CCE: dL/dz = (p - y) / B.
  Matrix delta(rows, cache.probs.cols);
  for (size_t i = 0; i < delta.data.size(); ++i)
    delta.data[i] = (cache.probs.data[i] - onehot.data[i]) / rows;

  for (int li = static_cast<int>(model.layers.size()) - 1; li >= 0; --li) {
    const auto& ls = model.spec[li];
    const auto& layer = model.layers[li];
    const auto& lc = cache.layers[li];
    auto& lg = grads.layers[li];

    if (ls.activation == Activation::relu) {
      if (!lc.dropout_mask.data.empty())
        for (size_t i = 0; i < delta.data.size(); ++i)
          delta.data[i] *= lc.dropout_mask.data[i];
      for (size_t i = 0; i < delta.data.size(); ++i)
        if (lc.pre_act.data[i] <= 0.0) delta.data[i] = 0.0;
    }

    if (ls.batch_norm) {
      lg.gamma.assign(ls.out_dim, 0.0);
      lg.beta.assign(ls.out_dim, 0.0);
      for (int s = 0; s < rows; ++s)
        for (int o = 0; o < ls.out_dim; ++o) {
          lg.gamma[o] += delta(s, o) * lc.xhat(s, o);
          lg.beta[o] += delta(s, o);
        }
      // d/dz of the batch-normalized output, including the mean/var terms:
      // dz = inv_std * (dxhat - mean(dxhat) - xhat * mean(dxhat .* xhat)).
      for (int o = 0; o < ls.out_dim; ++o) {
        double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
        for (int s = 0; s < rows; ++s) {
          const double dxhat = delta(s, o) * layer.gamma[o];
          sum_dxhat += dxhat;
          sum_dxhat_xhat += dxhat * lc.xhat(s, o);
        }
        const double mean_dxhat = sum_dxhat / rows;
        const double mean_dxhat_xhat = sum_dxhat_xhat / rows;
        for (int s = 0; s < rows; ++s) {
          const double dxhat = delta(s, o) * layer.gamma[o];
          delta(s, o) = lc.inv_std[o] * (dxhat - mean_dxhat - lc.xhat(s, o) * mean_dxhat_xhat);
        }
      }
    }

    lg.weights = Matrix(ls.out_dim, ls.in_dim);
    lg.bias.assign(ls.out_dim, 0.0);
    for (int s = 0; s < rows; ++s) {
      const double* drow = delta.data.data() + static_cast<size_t>(s) * ls.out_dim;
      const double* xrow = lc.input.data.data() + static_cast<size_t>(s) * ls.in_dim;
      for (int o = 0; o < ls.out_dim; ++o) {
        const double d = drow[o];
        if (d == 0.0) continue;
        lg.bias[o] += d;
        double* wrow = lg.weights.data.data() + static_cast<size_t>(o) * ls.in_dim;
        for (int i = 0; i < ls.in_dim; ++i) wrow[i] += d * xrow[i];
      }
    }

    if (li > 0) {
      Matrix next(rows, ls.in_dim);
      for (int s = 0; s < rows; ++s) {
        const double* drow = delta.data.data() + static_cast<size_t>(s) * ls.out_dim;
        double* nrow = next.data.data() + static_cast<size_t>(s) * ls.in_dim;
        for (int o = 0; o < ls.out_dim; ++o) {
          const double d = drow[o];
          if (d == 0.0) continue;
          const double* wrow = layer.weights.data.data() + static_cast<size_t>(o) * ls.in_dim;
          for (int i = 0; i < ls.in_dim; ++i) nrow[i] += d * wrow[i];
        }
      }
      delta = std::move(next);
    }
  }
  return grads;
}

Prediction predict(const MlpModel& model, const Matrix& features) {
  Prediction p;
  p.probs = forward_infer(model, features);
  p.labels.resize(features.rows);
  for (int r = 0; r < p.probs.rows; ++r) {
    int best = 0;
    for (int c = 1; c < p.probs.cols; ++c)
      if (p.probs(r, c) > p.probs(r, best)) best = c;
    p.labels[r] = best;
  }
  return p;
}

long param_count(const std::vector<LayerSpec>& spec) {
  long total = 0;
  for (const auto& l : spec) total += static_cast<long>(l.in_dim + 1) * l.out_dim;
  return total;
}

Matrix one_hot(std::span<const int> labels, int class_count) {
  Matrix m(static_cast<int>(labels.size()), class_count);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= class_count)
      throw DataError("one_hot: label " + std::to_string(labels[i]) + " out of range");
    m(static_cast<int>(i), labels[i]) = 1.0;
  }
  return m;
}

}  // namespace fhc
