#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ldwa/nn/params.hpp"

namespace ldwa::nn {

template <typename T>
struct OptimizerState {
  std::vector<Tensor<T>> velocity;  // one per parameter tensor, in visiting order
  double momentum = 0.9;
  double base_lr = 0.01;
  double decay = 1e-6;
  std::uint64_t step_count = 0;

  // base_lr / (1 + decay * step_count)
  double learning_rate() const {
    return base_lr / (1.0 + decay * static_cast<double>(step_count));
  }
};

// SGD with Nesterov momentum in look-ahead form:
//   v <- mu v - lr g;   theta <- theta + mu v - lr g
// Gradients are consumed and reset to zero. The step counter advances once
// per call.
template <typename T>
void sgd_nesterov_step(std::span<LayerParams<T>* const> layers, OptimizerState<T>& state) {
  std::size_t count = 0;
  for (const auto* layer : layers) count += layer->size();
  if (state.velocity.empty()) {
    state.velocity.reserve(count);
    for (const auto* layer : layers) {
      for (const auto& w : layer->weights) state.velocity.emplace_back(w.dims());
    }
  }
  if (state.velocity.size() != count) {
    throw ShapeError("optimizer velocity holds " + std::to_string(state.velocity.size()) +
                     " tensors, parameters have " + std::to_string(count));
  }

  const T lr = static_cast<T>(state.learning_rate());
  const T mu = static_cast<T>(state.momentum);
  std::size_t slot = 0;
  for (auto* layer : layers) {
    for (std::size_t i = 0; i < layer->size(); ++i, ++slot) {
      Tensor<T>& w = layer->weights[i];
      Tensor<T>& g = layer->grads[i];
      Tensor<T>& v = state.velocity[slot];
      expect_dims(v.dims(), w.dims(), "velocity of " + layer->full_name(i));
      for (std::size_t k = 0; k < w.size(); ++k) {
        v[k] = mu * v[k] - lr * g[k];
        w[k] = w[k] + (mu * v[k] - lr * g[k]);
      }
      g.fill(T(0));
    }
  }
  ++state.step_count;
}

template <typename T>
void sgd_nesterov_step(std::vector<LayerParams<T>*>& layers, OptimizerState<T>& state) {
  sgd_nesterov_step(std::span<LayerParams<T>* const>(layers), state);
}

}  // namespace ldwa::nn
