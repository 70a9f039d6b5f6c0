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

#ifndef FEDCAV_NN_MLP_H_
#define FEDCAV_NN_MLP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedcav/nn/matrix.h"

namespace fedcav::nn {

enum class Activation : std::uint8_t { kIdentity = 0, kRelu = 1, kTanh = 2 };

std::string_view ActivationName(Activation a);
Activation ParseActivation(std::string_view name);

// View of one dense layer inside an MlpParams buffer.
// weight is out x in row-major; bias has `out` entries.
template <typename T>
struct BasicLayerParams {
  std::size_t in = 0;
  std::size_t out = 0;
  std::span<T> weight;
  std::span<T> bias;

  T& w(std::size_t o, std::size_t i) const { return weight[o * in + i]; }
};
using LayerParams = BasicLayerParams<double>;
using ConstLayerParams = BasicLayerParams<const double>;

// Number of parameters of a dense chain with the given layer widths.
std::size_t ParamCount(std::span<const std::size_t> layer_sizes);

// Fully connected network parameters. All weights and biases live in one
// contiguous buffer in flatten order (layer 0 weight, layer 0 bias, layer 1
// weight, ...), so flatten/unflatten are copies and optimizer or averaging
// kernels run over a single span.
class MlpParams {
 public:
  MlpParams() = default;
  // Zero-initialized. layer_sizes has >= 2 entries; one activation per layer.
  MlpParams(std::vector<std::size_t> layer_sizes,
            std::vector<Activation> activations);

  // Weights ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
  static MlpParams Init(std::vector<std::size_t> layer_sizes,
                        std::vector<Activation> activations,
                        std::uint64_t seed);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  const std::vector<Activation>& activations() const { return activations_; }
  std::size_t num_layers() const { return activations_.size(); }
  std::size_t num_params() const { return params_.size(); }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  LayerParams layer(std::size_t l);
  ConstLayerParams layer(std::size_t l) const;

  std::vector<double> Flatten() const { return params_; }
  // Throws ShapeError when values.size() != num_params().
  void Unflatten(std::span<const double> values);

  bool SameArchitecture(const MlpParams& other) const {
    return sizes_ == other.sizes_ && activations_ == other.activations_;
  }
  bool operator==(const MlpParams&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Activation> activations_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights
  std::vector<double> params_;
};

// activations[0] is the network input; activations[l + 1] and
// pre_activations[l] are layer l's output after/before its nonlinearity.
struct ForwardCache {
  std::vector<Matrix> activations;
  std::vector<Matrix> pre_activations;
};

// Throws ShapeError when input.cols() != params.input_size().
Matrix Forward(const MlpParams& params, const Matrix& input,
               ForwardCache* cache = nullptr);

enum class GradMode { kParamsAndInput, kParamsOnly, kInputOnly };

struct Gradients {
  std::vector<double> params;  // flatten order; empty in kInputOnly
  Matrix input;                // empty in kParamsOnly
};

// Reverse-mode gradients of sum(output .* output_grad).
Gradients Backward(const MlpParams& params, const ForwardCache& cache,
                   const Matrix& output_grad,
                   GradMode mode = GradMode::kParamsAndInput);

}  // namespace fedcav::nn

#endif  // FEDCAV_NN_MLP_H_
