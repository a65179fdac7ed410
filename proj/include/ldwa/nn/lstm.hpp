#pragma once

#include <string>

#include "ldwa/nn/params.hpp"
#include "ldwa/tensor.hpp"

namespace ldwa::nn {

// Gate blocks are stacked along the 4H axis in the order
// input, forget, candidate, output.
enum LstmGate : std::size_t { kInputGate = 0, kForgetGate = 1, kCandidate = 2, kOutputGate = 3 };

template <typename T>
struct LstmStepCache {
  Tensor<T> x, h_prev, c_prev;
  Tensor<T> gates;  // activated, [4H]
  Tensor<T> c, tanh_c;
};

template <typename T>
struct LstmSequenceCache {
  std::size_t batch = 0;
  std::size_t steps = 0;
  bool reverse = false;
  Tensor<T> input;   // [batch * steps, d]
  Tensor<T> gates;   // activated, [steps, batch, 4H], indexed by time
  Tensor<T> cell;    // [steps, batch, H]
  Tensor<T> tanh_cell;
  Tensor<T> hidden;  // [steps, batch, H]
};

// One LSTM direction with zero initial state.
template <typename T>
class Lstm {
 public:
  Lstm() = default;
  Lstm(std::string name, std::size_t input_size, std::size_t hidden_size)
      : input_size_(input_size), hidden_size_(hidden_size), params_(std::move(name)) {
    if (input_size == 0 || hidden_size == 0) {
      throw ShapeError("lstm " + params_.name + ": input and hidden sizes must be >= 1");
    }
    params_.add("w_input", {4 * hidden_size, input_size});
    params_.add("w_hidden", {4 * hidden_size, hidden_size});
    params_.add("bias", {4 * hidden_size});
  }

  std::size_t input_size() const noexcept { return input_size_; }
  std::size_t hidden_size() const noexcept { return hidden_size_; }
  LayerParams<T>& params() noexcept { return params_; }
  const LayerParams<T>& params() const noexcept { return params_; }
  Tensor<T>& w_input() noexcept { return params_.weights[0]; }
  Tensor<T>& w_hidden() noexcept { return params_.weights[1]; }
  Tensor<T>& bias() noexcept { return params_.weights[2]; }

  template <typename Rng>
  void initialize(Rng& rng) {
    const std::size_t h = hidden_size_;
    nn::initialize(w_input(), Init::kGlorotUniform, input_size_, 4 * h, rng);
    nn::initialize(w_hidden(), Init::kGlorotUniform, h, 4 * h, rng);
    bias().fill(T(0));
    for (std::size_t j = 0; j < h; ++j) bias()[kForgetGate * h + j] = T(1);
  }

  // Single time step for one example: x [d], h_prev [H], c_prev [H].
  std::pair<Tensor<T>, Tensor<T>> step(const Tensor<T>& x, const Tensor<T>& h_prev,
                                       const Tensor<T>& c_prev, LstmStepCache<T>& cache) const {
    const std::size_t h = hidden_size_;
    expect_dims(x.dims(), {input_size_}, "lstm " + params_.name + " x_t");
    expect_dims(h_prev.dims(), {h}, "lstm " + params_.name + " h_prev");
    expect_dims(c_prev.dims(), {h}, "lstm " + params_.name + " c_prev");
    cache.x = x;
    cache.h_prev = h_prev;
    cache.c_prev = c_prev;
    cache.gates = Tensor<T>({4 * h});
    as_vector(cache.gates).noalias() =
        as_matrix(params_.weights[0], 4 * h, input_size_) * as_vector(x) +
        as_matrix(params_.weights[1], 4 * h, h) * as_vector(h_prev) + as_vector(params_.weights[2]);
    activate_gates(cache.gates.data(), h);
    Tensor<T> c({h}), hidden({h});
    cache.tanh_c = Tensor<T>({h});
    const T* g = cache.gates.data();
    for (std::size_t j = 0; j < h; ++j) {
      c[j] = g[kForgetGate * h + j] * c_prev[j] + g[kInputGate * h + j] * g[kCandidate * h + j];
      cache.tanh_c[j] = std::tanh(c[j]);
      hidden[j] = g[kOutputGate * h + j] * cache.tanh_c[j];
    }
    cache.c = c;
    return {hidden, c};
  }

  // x: [batch, steps, d] -> hidden states [batch, steps, H]. With
  // `reverse`, the sequence is read from the last step to the first and
  // hidden[t] is the state after consuming x[t..T-1].
  Tensor<T> forward(const Tensor<T>& x, bool reverse, LstmSequenceCache<T>& cache) const {
    if (x.rank() != 3) {
      throw ShapeError("lstm " + params_.name + ": input must be [batch, steps, d], got " +
                       dims_to_string(x.dims()));
    }
    const std::size_t batch = x.dim(0), steps = x.dim(1), h = hidden_size_;
    if (x.dim(2) != input_size_) {
      throw ShapeError("lstm " + params_.name + ": feature size " + std::to_string(x.dim(2)) +
                       " != " + std::to_string(input_size_));
    }
    cache.batch = batch;
    cache.steps = steps;
    cache.reverse = reverse;
    cache.input = x.reshaped({batch * steps, input_size_});
    cache.gates = Tensor<T>({steps, batch, 4 * h});
    cache.cell = Tensor<T>({steps, batch, h});
    cache.tanh_cell = Tensor<T>({steps, batch, h});
    cache.hidden = Tensor<T>({steps, batch, h});

    RowMatrix<T> projected(batch * steps, 4 * h);
    projected.noalias() = as_matrix(cache.input, batch * steps, input_size_) *
                          as_matrix(params_.weights[0], 4 * h, input_size_).transpose();
    projected.rowwise() += as_vector(params_.weights[2]).transpose();

    const auto w_h = as_matrix(params_.weights[1], 4 * h, h);
    RowMatrix<T> z(batch, 4 * h);
    for (std::size_t s = 0; s < steps; ++s) {
      const std::size_t t = reverse ? steps - 1 - s : s;
      for (std::size_t b = 0; b < batch; ++b) z.row(b) = projected.row(b * steps + t);
      if (s > 0) {
        const std::size_t prev = reverse ? t + 1 : t - 1;
        z.noalias() += ConstMatrixMap<T>(cache.hidden.data() + prev * batch * h, batch, h) *
                       w_h.transpose();
      }
      T* gates = cache.gates.data() + t * batch * 4 * h;
      std::copy(z.data(), z.data() + batch * 4 * h, gates);
      for (std::size_t b = 0; b < batch; ++b) {
        T* g = gates + b * 4 * h;
        activate_gates(g, h);
        const std::size_t row = (t * batch + b) * h;
        const T* c_prev =
            s > 0 ? cache.cell.data() + ((reverse ? t + 1 : t - 1) * batch + b) * h : nullptr;
        for (std::size_t j = 0; j < h; ++j) {
          const T cp = c_prev ? c_prev[j] : T(0);
          const T c = g[kForgetGate * h + j] * cp + g[kInputGate * h + j] * g[kCandidate * h + j];
          const T tc = std::tanh(c);
          cache.cell[row + j] = c;
          cache.tanh_cell[row + j] = tc;
          cache.hidden[row + j] = g[kOutputGate * h + j] * tc;
        }
      }
    }

    Tensor<T> out({batch, steps, h});
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t b = 0; b < batch; ++b) {
        std::copy_n(cache.hidden.data() + (t * batch + b) * h, h,
                    out.data() + (b * steps + t) * h);
      }
    }
    return out;
  }

  // Backpropagation through time. upstream: [batch, steps, H].
  Tensor<T> backward(const LstmSequenceCache<T>& cache, const Tensor<T>& upstream) {
    const std::size_t batch = cache.batch, steps = cache.steps, h = hidden_size_;
    expect_dims(upstream.dims(), {batch, steps, h}, "lstm " + params_.name + " upstream");
    const bool reverse = cache.reverse;

    RowMatrix<T> grad_z_all(batch * steps, 4 * h);
    RowMatrix<T> grad_z(batch, 4 * h);
    RowMatrix<T> dh_next = RowMatrix<T>::Zero(batch, h);
    RowMatrix<T> dc_next = RowMatrix<T>::Zero(batch, h);
    const auto w_h = as_matrix(params_.weights[1], 4 * h, h);
    auto grad_w_h = as_matrix(params_.grads[1], 4 * h, h);

    for (std::size_t s = steps; s-- > 0;) {
      const std::size_t t = reverse ? steps - 1 - s : s;
      const std::size_t prev = reverse ? t + 1 : t - 1;
      for (std::size_t b = 0; b < batch; ++b) {
        const T* g = cache.gates.data() + (t * batch + b) * 4 * h;
        const std::size_t row = (t * batch + b) * h;
        const T* c_prev = s > 0 ? cache.cell.data() + (prev * batch + b) * h : nullptr;
        const T* up = upstream.data() + (b * steps + t) * h;
        T* dz = grad_z.data() + b * 4 * h;
        for (std::size_t j = 0; j < h; ++j) {
          const T i_g = g[kInputGate * h + j], f_g = g[kForgetGate * h + j];
          const T c_g = g[kCandidate * h + j], o_g = g[kOutputGate * h + j];
          const T tc = cache.tanh_cell[row + j];
          const T dh = up[j] + dh_next(b, j);
          const T dc = dc_next(b, j) + dh * o_g * (T(1) - tc * tc);
          const T cp = c_prev ? c_prev[j] : T(0);
          dz[kInputGate * h + j] = dc * c_g * i_g * (T(1) - i_g);
          dz[kForgetGate * h + j] = dc * cp * f_g * (T(1) - f_g);
          dz[kCandidate * h + j] = dc * i_g * (T(1) - c_g * c_g);
          dz[kOutputGate * h + j] = dh * tc * o_g * (T(1) - o_g);
          dc_next(b, j) = dc * f_g;
        }
        grad_z_all.row(b * steps + t) = grad_z.row(b);
      }
      if (s > 0) {
        const ConstMatrixMap<T> h_prev(cache.hidden.data() + prev * batch * h, batch, h);
        grad_w_h.noalias() += grad_z.transpose() * h_prev;
        dh_next.noalias() = grad_z * w_h;
      } else {
        dh_next.setZero();
      }
    }

    as_matrix(params_.grads[0], 4 * h, input_size_).noalias() +=
        grad_z_all.transpose() * as_matrix(cache.input, batch * steps, input_size_);
    as_vector(params_.grads[2]).noalias() += grad_z_all.colwise().sum().transpose();
    Tensor<T> grad_in({batch, steps, input_size_});
    as_matrix(grad_in, batch * steps, input_size_).noalias() =
        grad_z_all * as_matrix(params_.weights[0], 4 * h, input_size_);
    return grad_in;
  }

 private:
  static void activate_gates(T* g, std::size_t h) {
    for (std::size_t j = 0; j < h; ++j) {
      g[kInputGate * h + j] = sigmoid(g[kInputGate * h + j]);
      g[kForgetGate * h + j] = sigmoid(g[kForgetGate * h + j]);
      g[kCandidate * h + j] = std::tanh(g[kCandidate * h + j]);
      g[kOutputGate * h + j] = sigmoid(g[kOutputGate * h + j]);
    }
  }

  std::size_t input_size_ = 0;
  std::size_t hidden_size_ = 0;
  LayerParams<T> params_;
};

template <typename T>
struct BiLstmCache {
  bool unbatched = false;
  LstmSequenceCache<T> forward, backward;
};

// Bidirectional LSTM: hidden[t] = [forward state at t ; backward state at t],
// width 2H. Accepts [steps, d] or [batch, steps, d].
template <typename T>
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(const std::string& name, std::size_t input_size, std::size_t hidden_size)
      : fwd_(name + ".fwd", input_size, hidden_size), bwd_(name + ".bwd", input_size, hidden_size) {}

  std::size_t hidden_size() const noexcept { return fwd_.hidden_size(); }
  std::size_t output_size() const noexcept { return 2 * fwd_.hidden_size(); }
  Lstm<T>& forward_direction() noexcept { return fwd_; }
  Lstm<T>& backward_direction() noexcept { return bwd_; }
  const Lstm<T>& forward_direction() const noexcept { return fwd_; }
  const Lstm<T>& backward_direction() const noexcept { return bwd_; }

  template <typename Rng>
  void initialize(Rng& rng) {
    fwd_.initialize(rng);
    bwd_.initialize(rng);
  }

  Tensor<T> forward(const Tensor<T>& x, BiLstmCache<T>& cache) const {
    if (x.rank() != 2 && x.rank() != 3) {
      throw ShapeError("bilstm: input must be rank 2 or 3, got " + dims_to_string(x.dims()));
    }
    if (x.size() == 0) throw ShapeError("bilstm: empty sequence");
    cache.unbatched = x.rank() == 2;
    const Tensor<T> batched = cache.unbatched ? x.reshaped({1, x.dim(0), x.dim(1)}) : x;
    const std::size_t batch = batched.dim(0), steps = batched.dim(1), h = hidden_size();
    const Tensor<T> hf = fwd_.forward(batched, false, cache.forward);
    const Tensor<T> hb = bwd_.forward(batched, true, cache.backward);
    Tensor<T> out(cache.unbatched ? Dims{steps, 2 * h} : Dims{batch, steps, 2 * h});
    for (std::size_t r = 0; r < batch * steps; ++r) {
      std::copy_n(hf.data() + r * h, h, out.data() + r * 2 * h);
      std::copy_n(hb.data() + r * h, h, out.data() + r * 2 * h + h);
    }
    return out;
  }

  Tensor<T> backward(const BiLstmCache<T>& cache, const Tensor<T>& upstream) {
    const std::size_t batch = cache.forward.batch, steps = cache.forward.steps, h = hidden_size();
    expect_dims(upstream.dims(),
                cache.unbatched ? Dims{steps, 2 * h} : Dims{batch, steps, 2 * h},
                "bilstm upstream");
    Tensor<T> uf({batch, steps, h}), ub({batch, steps, h});
    for (std::size_t r = 0; r < batch * steps; ++r) {
      std::copy_n(upstream.data() + r * 2 * h, h, uf.data() + r * h);
      std::copy_n(upstream.data() + r * 2 * h + h, h, ub.data() + r * h);
    }
    Tensor<T> grad = fwd_.backward(cache.forward, uf);
    const Tensor<T> gb = bwd_.backward(cache.backward, ub);
    as_vector(grad) += as_vector(gb);
    if (cache.unbatched) grad.reshape({steps, fwd_.input_size()});
    return grad;
  }

 private:
  Lstm<T> fwd_, bwd_;
};

}  // namespace ldwa::nn
