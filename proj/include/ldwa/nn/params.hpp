#pragma once

#include <random>
#include <string>
#include <vector>

#include "ldwa/tensor.hpp"

namespace ldwa::nn {

// Named trainable tensors of one layer, each paired with a gradient buffer
// of identical dims. Backward passes accumulate into `grads`.
template <typename T>
struct LayerParams {
  std::string name;
  std::vector<std::string> names;
  std::vector<Tensor<T>> weights;
  std::vector<Tensor<T>> grads;

  LayerParams() = default;
  explicit LayerParams(std::string layer_name) : name(std::move(layer_name)) {}

  std::size_t add(std::string tensor_name, Dims dims) {
    names.push_back(std::move(tensor_name));
    weights.emplace_back(dims);
    grads.emplace_back(std::move(dims));
    return weights.size() - 1;
  }

  std::size_t size() const noexcept { return weights.size(); }

  std::string full_name(std::size_t i) const { return name + "." + names[i]; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += w.size();
    return n;
  }

  void zero_grads() {
    for (auto& g : grads) g.fill(T(0));
  }
};

enum class Activation { kLinear, kRelu, kSigmoid, kTanh };

template <typename T>
inline T activate(Activation act, T x) {
  switch (act) {
    case Activation::kRelu:
      return x > T(0) ? x : T(0);
    case Activation::kSigmoid:
      return T(1) / (T(1) + std::exp(-x));
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kLinear:
      break;
  }
  return x;
}

// Derivative expressed through the activation output y = act(x).
template <typename T>
inline T activate_grad_from_output(Activation act, T y) {
  switch (act) {
    case Activation::kRelu:
      return y > T(0) ? T(1) : T(0);
    case Activation::kSigmoid:
      return y * (T(1) - y);
    case Activation::kTanh:
      return T(1) - y * y;
    case Activation::kLinear:
      break;
  }
  return T(1);
}

template <typename T>
inline T sigmoid(T x) {
  return activate(Activation::kSigmoid, x);
}

enum class Init { kZeros, kHeUniform, kGlorotUniform };

template <typename T, typename Rng>
void initialize(Tensor<T>& w, Init scheme, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  double limit = 0.0;
  switch (scheme) {
    case Init::kZeros:
      w.fill(T(0));
      return;
    case Init::kHeUniform:
      limit = std::sqrt(6.0 / static_cast<double>(fan_in));
      break;
    case Init::kGlorotUniform:
      limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      break;
  }
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (auto& v : w.values()) v = static_cast<T>(dist(rng));
}

}  // namespace ldwa::nn
