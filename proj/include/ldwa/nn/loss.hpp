#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ldwa/tensor.hpp"

namespace ldwa::nn {

template <typename T>
struct LossResult {
  T loss = T(0);
  Tensor<T> grad;
};

// Mean squared error over every element; grad = 2 (pred - target) / n.
template <typename T>
LossResult<T> mse_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  expect_dims(target.dims(), pred.dims(), "mse target");
  const std::size_t n = pred.size();
  LossResult<T> out{T(0), Tensor<T>(pred.dims())};
  for (std::size_t i = 0; i < n; ++i) {
    const T d = pred[i] - target[i];
    out.loss += d * d;
    out.grad[i] = T(2) * d / static_cast<T>(n);
  }
  out.loss /= static_cast<T>(n);
  return out;
}

inline constexpr double kBceEpsilon = 1e-7;

// Binary cross-entropy averaged over every element. Predictions are clamped
// to [eps, 1 - eps] before the logarithm; the gradient is evaluated at the
// clamped value. Targets must be exactly 0 or 1.
template <typename T>
LossResult<T> bce_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  expect_dims(target.dims(), pred.dims(), "bce target");
  const std::size_t n = pred.size();
  const T eps = static_cast<T>(kBceEpsilon);
  LossResult<T> out{T(0), Tensor<T>(pred.dims())};
  for (std::size_t i = 0; i < n; ++i) {
    const T t = target[i];
    if (t != T(0) && t != T(1)) {
      throw DomainError("bce target must be 0 or 1, got " + std::to_string(t));
    }
    const T p = std::clamp(pred[i], eps, T(1) - eps);
    out.loss -= t == T(1) ? std::log(p) : std::log(T(1) - p);
    out.grad[i] = (t == T(1) ? -T(1) / p : T(1) / (T(1) - p)) / static_cast<T>(n);
  }
  out.loss /= static_cast<T>(n);
  return out;
}

}  // namespace ldwa::nn
