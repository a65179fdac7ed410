#pragma once

#include <string>

#include "ldwa/nn/params.hpp"
#include "ldwa/tensor.hpp"

namespace ldwa::nn {

template <typename T>
struct DenseCache {
  Tensor<T> input;   // [batch, in]
  Tensor<T> output;  // post-activation, [batch, out] (or [out] if unbatched)
  bool unbatched = false;
};

// Fully connected layer: output = act(weight * input + bias). Accepts a
// single vector [in] or a batch [batch, in].
template <typename T>
class Dense {
 public:
  Dense() = default;
  Dense(std::string name, std::size_t inputs, std::size_t units, Activation act)
      : inputs_(inputs), units_(units), act_(act), params_(std::move(name)) {
    if (inputs == 0 || units == 0) {
      throw ShapeError("dense " + params_.name + ": inputs and units must be >= 1");
    }
    params_.add("weight", {units, inputs});
    params_.add("bias", {units});
  }

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t units() const noexcept { return units_; }
  Activation activation() const noexcept { return act_; }

  LayerParams<T>& params() noexcept { return params_; }
  const LayerParams<T>& params() const noexcept { return params_; }
  Tensor<T>& weight() noexcept { return params_.weights[0]; }
  Tensor<T>& bias() noexcept { return params_.weights[1]; }

  template <typename Rng>
  void initialize(Rng& rng) {
    const Init scheme = act_ == Activation::kRelu ? Init::kHeUniform : Init::kGlorotUniform;
    nn::initialize(weight(), scheme, inputs_, units_, rng);
    bias().fill(T(0));
  }

  Tensor<T> forward(const Tensor<T>& input, DenseCache<T>& cache) const {
    const bool unbatched = input.rank() == 1;
    if (!unbatched && input.rank() != 2) {
      throw ShapeError("dense " + params_.name + ": input must be rank 1 or 2, got " +
                       dims_to_string(input.dims()));
    }
    const std::size_t batch = unbatched ? 1 : input.dim(0);
    const std::size_t width = input.dim(unbatched ? 0 : 1);
    if (width != inputs_) {
      throw ShapeError("dense " + params_.name + ": input width " + std::to_string(width) +
                       " != weight columns " + std::to_string(inputs_));
    }
    cache.unbatched = unbatched;
    cache.input = input.reshaped({batch, inputs_});

    Tensor<T> out(unbatched ? Dims{units_} : Dims{batch, units_});
    auto y = as_matrix(out, batch, units_);
    y.noalias() = as_matrix(cache.input, batch, inputs_) *
                  as_matrix(params_.weights[0], units_, inputs_).transpose();
    const T* bias_data = params_.weights[1].data();
    for (std::size_t b = 0; b < batch; ++b) {
      T* row = out.data() + b * units_;
      for (std::size_t j = 0; j < units_; ++j) row[j] = activate(act_, row[j] + bias_data[j]);
    }
    cache.output = out;
    return out;
  }

  Tensor<T> backward(const DenseCache<T>& cache, const Tensor<T>& upstream) {
    expect_dims(upstream.dims(), cache.output.dims(), "dense " + params_.name + " upstream");
    const std::size_t batch = cache.input.dim(0);
    RowMatrix<T> grad_pre(batch, units_);
    for (std::size_t i = 0; i < batch * units_; ++i) {
      grad_pre.data()[i] = upstream[i] * activate_grad_from_output(act_, cache.output[i]);
    }
    as_matrix(params_.grads[0], units_, inputs_).noalias() +=
        grad_pre.transpose() * as_matrix(cache.input, batch, inputs_);
    as_vector(params_.grads[1]).noalias() += grad_pre.colwise().sum().transpose();

    Tensor<T> grad_in(cache.unbatched ? Dims{inputs_} : Dims{batch, inputs_});
    as_matrix(grad_in, batch, inputs_).noalias() =
        grad_pre * as_matrix(params_.weights[0], units_, inputs_);
    return grad_in;
  }

 private:
  std::size_t inputs_ = 0;
  std::size_t units_ = 0;
  Activation act_ = Activation::kLinear;
  LayerParams<T> params_;
};

}  // namespace ldwa::nn
