#pragma once

#include <string>

#include "ldwa/nn/params.hpp"
#include "ldwa/tensor.hpp"

namespace ldwa::nn {

template <typename T>
struct AttentionCache {
  bool unbatched = false;
  std::size_t batch = 0;
  std::size_t steps = 0;
  Tensor<T> hidden;  // [batch * steps, width]
  Tensor<T> scores;  // tanh(W h + b), [batch * steps, units]
  Tensor<T> alpha;   // [batch, steps]
};

template <typename T>
struct AttentionOutput {
  Tensor<T> context;  // [batch, width] or [width]
  Tensor<T> alpha;    // [batch, steps] or [steps]
};

// Feed-forward attention over encoder states:
//   e_t = v . tanh(W h_t + b),  alpha = softmax(e),  c = sum_t alpha_t h_t.
// W is [units, width], b and v are [units]. The softmax subtracts max(e).
template <typename T>
class Attention {
 public:
  Attention() = default;
  Attention(std::string name, std::size_t width, std::size_t units)
      : width_(width), units_(units), params_(std::move(name)) {
    if (width == 0 || units == 0) {
      throw ShapeError("attention " + params_.name + ": width and units must be >= 1");
    }
    params_.add("W_a", {units, width});
    params_.add("b_a", {units});
    params_.add("V_a", {units});
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t units() const noexcept { return units_; }
  LayerParams<T>& params() noexcept { return params_; }
  const LayerParams<T>& params() const noexcept { return params_; }
  Tensor<T>& w() noexcept { return params_.weights[0]; }
  Tensor<T>& b() noexcept { return params_.weights[1]; }
  Tensor<T>& v() noexcept { return params_.weights[2]; }

  template <typename Rng>
  void initialize(Rng& rng) {
    nn::initialize(w(), Init::kGlorotUniform, width_, units_, rng);
    b().fill(T(0));
    nn::initialize(v(), Init::kGlorotUniform, units_, 1, rng);
  }

  // hidden: [steps, width] or [batch, steps, width].
  AttentionOutput<T> forward(const Tensor<T>& hidden, AttentionCache<T>& cache) const {
    if (hidden.rank() != 2 && hidden.rank() != 3) {
      throw ShapeError("attention " + params_.name + ": input must be rank 2 or 3, got " +
                       dims_to_string(hidden.dims()));
    }
    const bool unbatched = hidden.rank() == 2;
    const std::size_t batch = unbatched ? 1 : hidden.dim(0);
    const std::size_t steps = hidden.dim(unbatched ? 0 : 1);
    if (hidden.dims().back() != width_) {
      throw ShapeError("attention " + params_.name + ": state width " +
                       std::to_string(hidden.dims().back()) + " != " + std::to_string(width_));
    }
    cache.unbatched = unbatched;
    cache.batch = batch;
    cache.steps = steps;
    cache.hidden = hidden.reshaped({batch * steps, width_});
    cache.scores = Tensor<T>({batch * steps, units_});
    auto u = as_matrix(cache.scores, batch * steps, units_);
    u.noalias() = as_matrix(cache.hidden, batch * steps, width_) *
                  as_matrix(params_.weights[0], units_, width_).transpose();
    u.rowwise() += as_vector(params_.weights[1]).transpose();
    u = u.array().tanh();

    Tensor<T> energy({batch * steps});
    as_vector(energy).noalias() = u * as_vector(params_.weights[2]);

    cache.alpha = Tensor<T>({batch, steps});
    Tensor<T> context(unbatched ? Dims{width_} : Dims{batch, width_});
    for (std::size_t b = 0; b < batch; ++b) {
      const T* e = energy.data() + b * steps;
      T* a = cache.alpha.data() + b * steps;
      T peak = e[0];
      for (std::size_t t = 1; t < steps; ++t) peak = std::max(peak, e[t]);
      T total = T(0);
      for (std::size_t t = 0; t < steps; ++t) {
        a[t] = std::exp(e[t] - peak);
        total += a[t];
      }
      for (std::size_t t = 0; t < steps; ++t) a[t] /= total;
      T* c = context.data() + b * width_;
      for (std::size_t t = 0; t < steps; ++t) {
        const T* h = cache.hidden.data() + (b * steps + t) * width_;
        for (std::size_t k = 0; k < width_; ++k) c[k] += a[t] * h[k];
      }
    }
    Tensor<T> alpha = unbatched ? cache.alpha.reshaped({steps}) : cache.alpha;
    return {std::move(context), std::move(alpha)};
  }

  // upstream: gradient w.r.t. the context vector. Returns the gradient
  // w.r.t. the hidden states, same dims as the forward input.
  Tensor<T> backward(const AttentionCache<T>& cache, const Tensor<T>& upstream) {
    const std::size_t batch = cache.batch, steps = cache.steps;
    expect_dims(upstream.dims(), cache.unbatched ? Dims{width_} : Dims{batch, width_},
                "attention " + params_.name + " upstream");

    Tensor<T> grad_hidden({batch * steps, width_});
    Tensor<T> grad_energy({batch * steps});
    for (std::size_t b = 0; b < batch; ++b) {
      const T* a = cache.alpha.data() + b * steps;
      const T* dc = upstream.data() + b * width_;
      // d alpha_t = dc . h_t; softmax Jacobian couples all steps.
      T weighted = T(0);
      for (std::size_t t = 0; t < steps; ++t) {
        const T* h = cache.hidden.data() + (b * steps + t) * width_;
        T da = T(0);
        for (std::size_t k = 0; k < width_; ++k) da += dc[k] * h[k];
        grad_energy[b * steps + t] = da;
        weighted += a[t] * da;
      }
      for (std::size_t t = 0; t < steps; ++t) {
        T& ge = grad_energy[b * steps + t];
        ge = a[t] * (ge - weighted);
        T* gh = grad_hidden.data() + (b * steps + t) * width_;
        for (std::size_t k = 0; k < width_; ++k) gh[k] = a[t] * dc[k];
      }
    }

    const auto u = as_matrix(cache.scores, batch * steps, units_);
    const auto ge = as_vector(grad_energy);
    as_vector(params_.grads[2]).noalias() += u.transpose() * ge;
    RowMatrix<T> grad_pre = (ge * as_vector(params_.weights[2]).transpose()).array() *
                            (T(1) - u.array().square());
    as_matrix(params_.grads[0], units_, width_).noalias() +=
        grad_pre.transpose() * as_matrix(cache.hidden, batch * steps, width_);
    as_vector(params_.grads[1]).noalias() += grad_pre.colwise().sum().transpose();
    as_matrix(grad_hidden, batch * steps, width_).noalias() +=
        grad_pre * as_matrix(params_.weights[0], units_, width_);

    grad_hidden.reshape(cache.unbatched ? Dims{steps, width_} : Dims{batch, steps, width_});
    return grad_hidden;
  }

 private:
  std::size_t width_ = 0;
  std::size_t units_ = 0;
  LayerParams<T> params_;
};

}  // namespace ldwa::nn
