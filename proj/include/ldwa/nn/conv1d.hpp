#pragma once

#include <string>

#include "ldwa/nn/params.hpp"
#include "ldwa/tensor.hpp"

namespace ldwa::nn {

template <typename T>
struct Conv1dCache {
  std::size_t batch = 0;
  std::size_t length = 0;
  bool unbatched = false;
  // im2col of the padded input: (in_channels * kernel) x (batch * length).
  Tensor<T> columns;
  // Post-activation output, [batch, filters, length].
  Tensor<T> output;
};

// Stride-1 one-dimensional convolution with "same" zero padding:
// floor(K/2) samples on the left and K-1-floor(K/2) on the right, so the
// output length equals the input length for every kernel size.
//
// Accepts [in_channels, L] or [batch, in_channels, L]; the output has the
// same rank with in_channels replaced by filters.
template <typename T>
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(std::string name, std::size_t in_channels, std::size_t filters, std::size_t kernel,
         Activation act)
      : in_channels_(in_channels), filters_(filters), kernel_(kernel), act_(act),
        params_(std::move(name)) {
    if (in_channels == 0 || filters == 0 || kernel == 0) {
      throw ShapeError("conv1d " + params_.name + ": channels, filters and kernel must be >= 1");
    }
    params_.add("weight", {filters, in_channels, kernel});
    params_.add("bias", {filters});
  }

  std::size_t in_channels() const noexcept { return in_channels_; }
  std::size_t filters() const noexcept { return filters_; }
  std::size_t kernel() const noexcept { return kernel_; }
  std::size_t pad_left() const noexcept { return kernel_ / 2; }
  Activation activation() const noexcept { return act_; }

  LayerParams<T>& params() noexcept { return params_; }
  const LayerParams<T>& params() const noexcept { return params_; }
  Tensor<T>& weight() noexcept { return params_.weights[0]; }
  Tensor<T>& bias() noexcept { return params_.weights[1]; }

  template <typename Rng>
  void initialize(Rng& rng) {
    const Init scheme = act_ == Activation::kRelu ? Init::kHeUniform : Init::kGlorotUniform;
    nn::initialize(weight(), scheme, in_channels_ * kernel_, filters_ * kernel_, rng);
    bias().fill(T(0));
  }

  Tensor<T> forward(const Tensor<T>& input, Conv1dCache<T>& cache) const {
    const bool unbatched = input.rank() == 2;
    if (!unbatched && input.rank() != 3) {
      throw ShapeError("conv1d " + params_.name + ": input must be rank 2 or 3, got " +
                       dims_to_string(input.dims()));
    }
    const std::size_t batch = unbatched ? 1 : input.dim(0);
    const std::size_t channels = input.dim(unbatched ? 0 : 1);
    const std::size_t length = input.dim(unbatched ? 1 : 2);
    if (channels != in_channels_) {
      throw ShapeError("conv1d " + params_.name + ": input has " + std::to_string(channels) +
                       " channels, filters expect " + std::to_string(in_channels_));
    }

    cache.batch = batch;
    cache.length = length;
    cache.unbatched = unbatched;
    cache.columns = Tensor<T>({in_channels_ * kernel_, batch * length});
    const std::size_t width = batch * length;
    const auto left = static_cast<std::ptrdiff_t>(pad_left());
    T* cols = cache.columns.data();
    const T* in = input.data();
    for (std::size_t c = 0; c < in_channels_; ++c) {
      for (std::size_t k = 0; k < kernel_; ++k) {
        T* row = cols + (c * kernel_ + k) * width;
        const auto shift = static_cast<std::ptrdiff_t>(k) - left;
        for (std::size_t b = 0; b < batch; ++b) {
          const T* src = in + (b * in_channels_ + c) * length;
          T* dst = row + b * length;
          for (std::size_t t = 0; t < length; ++t) {
            const auto j = static_cast<std::ptrdiff_t>(t) + shift;
            dst[t] = (j >= 0 && j < static_cast<std::ptrdiff_t>(length)) ? src[j] : T(0);
          }
        }
      }
    }

    RowMatrix<T> pre(filters_, width);
    pre.noalias() = as_matrix(params_.weights[0], filters_, in_channels_ * kernel_) *
                    as_matrix(cache.columns, in_channels_ * kernel_, width);

    Tensor<T> out(unbatched ? Dims{filters_, length} : Dims{batch, filters_, length});
    const T* bias_data = params_.weights[1].data();
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t f = 0; f < filters_; ++f) {
        T* dst = out.data() + (b * filters_ + f) * length;
        const T* src = pre.data() + f * width + b * length;
        for (std::size_t t = 0; t < length; ++t) dst[t] = activate(act_, src[t] + bias_data[f]);
      }
    }
    cache.output = out;
    return out;
  }

  // Accumulates parameter gradients and returns the gradient w.r.t. the
  // forward input.
  Tensor<T> backward(const Conv1dCache<T>& cache, const Tensor<T>& upstream) {
    expect_dims(upstream.dims(), cache.output.dims(), "conv1d " + params_.name + " upstream");
    const std::size_t batch = cache.batch;
    const std::size_t length = cache.length;
    const std::size_t width = batch * length;

    RowMatrix<T> grad_pre(filters_, width);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t f = 0; f < filters_; ++f) {
        const std::size_t off = (b * filters_ + f) * length;
        T* dst = grad_pre.data() + f * width + b * length;
        for (std::size_t t = 0; t < length; ++t) {
          dst[t] = upstream[off + t] * activate_grad_from_output(act_, cache.output[off + t]);
        }
      }
    }

    const auto cols = as_matrix(cache.columns, in_channels_ * kernel_, width);
    as_matrix(params_.grads[0], filters_, in_channels_ * kernel_).noalias() +=
        grad_pre * cols.transpose();
    as_vector(params_.grads[1]).noalias() += grad_pre.rowwise().sum();

    RowMatrix<T> grad_cols(in_channels_ * kernel_, width);
    grad_cols.noalias() =
        as_matrix(params_.weights[0], filters_, in_channels_ * kernel_).transpose() * grad_pre;

    Tensor<T> grad_in(cache.unbatched ? Dims{in_channels_, length}
                                      : Dims{batch, in_channels_, length});
    const auto left = static_cast<std::ptrdiff_t>(pad_left());
    for (std::size_t c = 0; c < in_channels_; ++c) {
      for (std::size_t k = 0; k < kernel_; ++k) {
        const T* row = grad_cols.data() + (c * kernel_ + k) * width;
        const auto shift = static_cast<std::ptrdiff_t>(k) - left;
        for (std::size_t b = 0; b < batch; ++b) {
          T* dst = grad_in.data() + (b * in_channels_ + c) * length;
          const T* src = row + b * length;
          for (std::size_t t = 0; t < length; ++t) {
            const auto j = static_cast<std::ptrdiff_t>(t) + shift;
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(length)) dst[j] += src[t];
          }
        }
      }
    }
    return grad_in;
  }

 private:
  std::size_t in_channels_ = 0;
  std::size_t filters_ = 0;
  std::size_t kernel_ = 0;
  Activation act_ = Activation::kLinear;
  LayerParams<T> params_;
};

}  // namespace ldwa::nn
