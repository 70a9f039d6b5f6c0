// Copyright 2026 The FedCAV Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedcav/nn/mlp.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fedcav/base/error.h"
#include "fedcav/simd/kernels.h"

namespace fedcav::nn {

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
  }
  return "unknown";
}

Activation ParseActivation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw ShapeError("unknown activation '" + std::string(name) + "'");
}

std::size_t ParamCount(std::span<const std::size_t> layer_sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    n += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
  }
  return n;
}

MlpParams::MlpParams(std::vector<std::size_t> layer_sizes,
                     std::vector<Activation> activations)
    : sizes_(std::move(layer_sizes)), activations_(std::move(activations)) {
  FEDCAV_CHECK(sizes_.size() >= 2, ShapeError,
               "an MLP needs at least input and output sizes");
  FEDCAV_CHECK(activations_.size() == sizes_.size() - 1, ShapeError,
               "expected " + std::to_string(sizes_.size() - 1) +
                   " activations, got " + std::to_string(activations_.size()));
  for (std::size_t s : sizes_) {
    FEDCAV_CHECK(s > 0, ShapeError, "layer sizes must be positive");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(offset);
    offset += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(offset, 0.0);
}

MlpParams MlpParams::Init(std::vector<std::size_t> layer_sizes,
                          std::vector<Activation> activations,
                          std::uint64_t seed) {
  MlpParams p(std::move(layer_sizes), std::move(activations));
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < p.num_layers(); ++l) {
    LayerParams layer = p.layer(l);
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : layer.weight) w = dist(rng);
  }
  return p;
}

LayerParams MlpParams::layer(std::size_t l) {
  const std::size_t in = sizes_[l], out = sizes_[l + 1];
  double* base = params_.data() + offsets_[l];
  return {in, out, {base, in * out}, {base + in * out, out}};
}

ConstLayerParams MlpParams::layer(std::size_t l) const {
  const std::size_t in = sizes_[l], out = sizes_[l + 1];
  const double* base = params_.data() + offsets_[l];
  return {in, out, {base, in * out}, {base + in * out, out}};
}

void MlpParams::Unflatten(std::span<const double> values) {
  FEDCAV_CHECK(values.size() == params_.size(), ShapeError,
               "unflatten: expected " + std::to_string(params_.size()) +
                   " values, got " + std::to_string(values.size()));
  std::copy(values.begin(), values.end(), params_.begin());
}

namespace {

void ApplyActivation(Activation a, const Matrix& pre, Matrix& out) {
  const double* z = pre.data();
  double* y = out.data();
  const std::size_t n = pre.size();
  switch (a) {
    case Activation::kIdentity:
      std::copy(z, z + n, y);
      break;
    case Activation::kRelu:
      for (std::size_t i = 0; i < n; ++i) y[i] = z[i] > 0.0 ? z[i] : 0.0;
      break;
    case Activation::kTanh:
      for (std::size_t i = 0; i < n; ++i) y[i] = std::tanh(z[i]);
      break;
  }
}

// delta *= f'(z), using the cached output y = f(z) where convenient.
void ApplyDerivative(Activation a, const Matrix& pre, const Matrix& out,
                     Matrix& delta) {
  double* d = delta.data();
  const std::size_t n = delta.size();
  switch (a) {
    case Activation::kIdentity:
      break;
    case Activation::kRelu: {
      const double* z = pre.data();
      for (std::size_t i = 0; i < n; ++i) d[i] = z[i] > 0.0 ? d[i] : 0.0;
      break;
    }
    case Activation::kTanh: {
      const double* y = out.data();
      for (std::size_t i = 0; i < n; ++i) d[i] *= 1.0 - y[i] * y[i];
      break;
    }
  }
}

}  // namespace

Matrix Forward(const MlpParams& params, const Matrix& input,
               ForwardCache* cache) {
  FEDCAV_CHECK(input.cols() == params.input_size(), ShapeError,
               "forward: input width " + std::to_string(input.cols()) +
                   " != layer size " + std::to_string(params.input_size()));
  const simd::KernelTable& k = simd::Active();
  const std::size_t batch = input.rows();
  if (cache) {
    cache->activations.assign(1, input);
    cache->pre_activations.clear();
  }
  Matrix current = input;
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    const ConstLayerParams layer = params.layer(l);
    Matrix pre(batch, layer.out);
    k.gemm_nt(current.data(), layer.weight.data(), layer.bias.data(),
              pre.data(), batch, layer.out, layer.in);
    Matrix out(batch, layer.out);
    ApplyActivation(params.activations()[l], pre, out);
    if (cache) {
      cache->pre_activations.push_back(std::move(pre));
      cache->activations.push_back(out);
    }
    current = std::move(out);
  }
  return current;
}

Gradients Backward(const MlpParams& params, const ForwardCache& cache,
                   const Matrix& output_grad, GradMode mode) {
  const std::size_t layers = params.num_layers();
  FEDCAV_CHECK(cache.pre_activations.size() == layers &&
                   cache.activations.size() == layers + 1,
               ShapeError, "backward: cache does not match network depth");
  const std::size_t batch = cache.activations.front().rows();
  FEDCAV_CHECK(output_grad.rows() == batch &&
                   output_grad.cols() == params.output_size(),
               ShapeError, "backward: output gradient shape mismatch");

  const simd::KernelTable& k = simd::Active();
  const bool want_params = mode != GradMode::kInputOnly;
  const bool want_input = mode != GradMode::kParamsOnly;

  Gradients grads;
  if (want_params) grads.params.assign(params.num_params(), 0.0);

  Matrix delta = output_grad;
  std::size_t offset = params.num_params();
  for (std::size_t l = layers; l-- > 0;) {
    const ConstLayerParams layer = params.layer(l);
    ApplyDerivative(params.activations()[l], cache.pre_activations[l],
                    cache.activations[l + 1], delta);
    offset -= layer.in * layer.out + layer.out;
    if (want_params) {
      double* dw = grads.params.data() + offset;
      double* db = dw + layer.in * layer.out;
      k.gemm_tn_acc(delta.data(), cache.activations[l].data(), dw, layer.out,
                    layer.in, batch);
      for (std::size_t b = 0; b < batch; ++b) {
        k.axpy(1.0, delta.data() + b * layer.out, db, layer.out);
      }
    }
    if (l > 0 || want_input) {
      Matrix next(batch, layer.in);
      k.gemm_nn_acc(delta.data(), layer.weight.data(), next.data(), batch,
                    layer.in, layer.out);
      delta = std::move(next);
    }
  }
  if (want_input) grads.input = std::move(delta);
  return grads;
}

}  // namespace fedcav::nn
