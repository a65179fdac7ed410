#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ldwa/nn/attention.hpp"
#include "ldwa/nn/conv1d.hpp"
#include "ldwa/nn/dense.hpp"
#include "ldwa/nn/loss.hpp"
#include "ldwa/nn/lstm.hpp"
#include "ldwa/normalization.hpp"

namespace ldwa {

// Regression subnetwork hyperparameters: window length L, filters per conv
// layer F, kernel size K, and the BiLSTM/attention/dense width H.
struct RegressionConfig {
  static constexpr std::size_t kConvLayers = 4;

  std::size_t window_length = 0;
  std::size_t filters = 0;
  std::size_t kernel = 0;
  std::size_t hidden = 0;

  void validate() const {
    if (window_length == 0 || filters == 0 || kernel == 0 || hidden == 0) {
      throw ShapeError("regression config: L, F, K and H must all be >= 1");
    }
  }
  friend bool operator==(const RegressionConfig&, const RegressionConfig&) = default;
};

// Classification subnetwork layer table. The default table is the
// six-layer CNN (30,30,40,50,50,50 filters; kernels 10,8,6,5,5,5) followed
// by a 1024-unit dense layer and a sigmoid output of width L.
struct ClassificationConfig {
  std::size_t window_length = 0;
  std::vector<std::size_t> filters{30, 30, 40, 50, 50, 50};
  std::vector<std::size_t> kernels{10, 8, 6, 5, 5, 5};
  std::size_t dense_units = 1024;

  static ClassificationConfig standard(std::size_t window_length) {
    ClassificationConfig cfg;
    cfg.window_length = window_length;
    return cfg;
  }

  // Same depth and kernels with narrow filters and dense layer; used for
  // gradient checks at toy dimensions.
  static ClassificationConfig toy(std::size_t window_length) {
    ClassificationConfig cfg;
    cfg.window_length = window_length;
    cfg.filters = {3, 3, 4, 5, 5, 5};
    cfg.dense_units = 16;
    return cfg;
  }

  bool is_standard() const {
    const auto ref = standard(window_length);
    return filters == ref.filters && kernels == ref.kernels && dense_units == ref.dense_units;
  }

  void validate() const {
    if (window_length == 0 || dense_units == 0 || filters.empty() ||
        filters.size() != kernels.size()) {
      throw ShapeError("classification config: need L >= 1, dense >= 1 and matching "
                       "non-empty filter/kernel lists");
    }
    for (std::size_t i = 0; i < filters.size(); ++i) {
      if (filters[i] == 0 || kernels[i] == 0) {
        throw ShapeError("classification config: filters and kernels must be >= 1");
      }
    }
  }

  // Trainable parameter count, a pure function of the table and L.
  std::size_t parameter_count() const {
    std::size_t count = 0, channels = 1;
    for (std::size_t i = 0; i < filters.size(); ++i) {
      count += filters[i] * channels * kernels[i] + filters[i];
      channels = filters[i];
    }
    count += dense_units * channels * window_length + dense_units;
    count += window_length * dense_units + window_length;
    return count;
  }

  friend bool operator==(const ClassificationConfig&, const ClassificationConfig&) = default;
};

namespace detail {

// [batch, a, b] -> [batch, b, a]
template <typename T>
Tensor<T> swap_last_two(const Tensor<T>& x) {
  const std::size_t batch = x.dim(0), a = x.dim(1), b = x.dim(2);
  Tensor<T> out({batch, b, a});
  for (std::size_t n = 0; n < batch; ++n) {
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = 0; j < b; ++j) out.at(n, j, i) = x.at(n, i, j);
    }
  }
  return out;
}

}  // namespace detail

template <typename T>
struct RegressionTrace {
  std::array<nn::Conv1dCache<T>, RegressionConfig::kConvLayers> conv;
  nn::BiLstmCache<T> bilstm;
  nn::AttentionCache<T> attention;
  nn::DenseCache<T> hidden, output;
};

template <typename T>
struct RegressionOutput {
  Tensor<T> p_hat;  // [batch, L], normalized target units
  Tensor<T> alpha;  // [batch, L]
};

// 4 x Conv1D(F, K, relu) -> BiLSTM(H) -> attention(H) -> Dense(H, relu)
// -> Dense(L, linear). The decoder sees only the context vector.
template <typename T>
class RegressionNet {
 public:
  RegressionNet() = default;
  explicit RegressionNet(const RegressionConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    std::size_t channels = 1;
    for (std::size_t i = 0; i < RegressionConfig::kConvLayers; ++i) {
      conv_[i] = nn::Conv1d<T>("reg.conv" + std::to_string(i), channels, cfg.filters, cfg.kernel,
                               nn::Activation::kRelu);
      channels = cfg.filters;
    }
    bilstm_ = nn::BiLstm<T>("reg.bilstm", cfg.filters, cfg.hidden);
    attention_ = nn::Attention<T>("reg.attention", 2 * cfg.hidden, cfg.hidden);
    hidden_ = nn::Dense<T>("reg.dense_hidden", 2 * cfg.hidden, cfg.hidden, nn::Activation::kRelu);
    output_ = nn::Dense<T>("reg.dense_out", cfg.hidden, cfg.window_length,
                           nn::Activation::kLinear);
  }

  const RegressionConfig& config() const noexcept { return cfg_; }

  template <typename Rng>
  void initialize(Rng& rng) {
    for (auto& c : conv_) c.initialize(rng);
    bilstm_.initialize(rng);
    attention_.initialize(rng);
    hidden_.initialize(rng);
    output_.initialize(rng);
  }

  std::vector<nn::LayerParams<T>*> parameters() {
    std::vector<nn::LayerParams<T>*> out;
    for (auto& c : conv_) out.push_back(&c.params());
    out.push_back(&bilstm_.forward_direction().params());
    out.push_back(&bilstm_.backward_direction().params());
    out.push_back(&attention_.params());
    out.push_back(&hidden_.params());
    out.push_back(&output_.params());
    return out;
  }

  // x: [batch, L] standardized windows.
  RegressionOutput<T> forward(const Tensor<T>& x, RegressionTrace<T>& trace) const {
    expect_dims({x.dim(1)}, {cfg_.window_length}, "regression input length");
    const std::size_t batch = x.dim(0), length = cfg_.window_length;
    Tensor<T> h = x.reshaped({batch, 1, length});
    for (std::size_t i = 0; i < conv_.size(); ++i) h = conv_[i].forward(h, trace.conv[i]);
    const Tensor<T> states = bilstm_.forward(detail::swap_last_two(h), trace.bilstm);
    auto attended = attention_.forward(states, trace.attention);
    const Tensor<T> hidden = hidden_.forward(attended.context, trace.hidden);
    return {output_.forward(hidden, trace.output), std::move(attended.alpha)};
  }

  void backward(const RegressionTrace<T>& trace, const Tensor<T>& grad_p_hat) {
    Tensor<T> g = output_.backward(trace.output, grad_p_hat);
    g = hidden_.backward(trace.hidden, g);
    g = attention_.backward(trace.attention, g);
    g = bilstm_.backward(trace.bilstm, g);
    g = detail::swap_last_two(g);
    for (std::size_t i = conv_.size(); i-- > 0;) g = conv_[i].backward(trace.conv[i], g);
  }

  nn::Conv1d<T>& conv(std::size_t i) { return conv_.at(i); }
  nn::BiLstm<T>& bilstm() { return bilstm_; }
  nn::Attention<T>& attention() { return attention_; }
  nn::Dense<T>& dense_hidden() { return hidden_; }
  nn::Dense<T>& dense_output() { return output_; }

 private:
  RegressionConfig cfg_;
  std::array<nn::Conv1d<T>, RegressionConfig::kConvLayers> conv_;
  nn::BiLstm<T> bilstm_;
  nn::Attention<T> attention_;
  nn::Dense<T> hidden_, output_;
};

template <typename T>
struct ClassificationTrace {
  std::vector<nn::Conv1dCache<T>> conv;
  nn::DenseCache<T> hidden, output;
};

// Conv stack (relu) -> Dense(units, relu) -> Dense(L, sigmoid).
template <typename T>
class ClassificationNet {
 public:
  ClassificationNet() = default;
  explicit ClassificationNet(const ClassificationConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    std::size_t channels = 1;
    for (std::size_t i = 0; i < cfg.filters.size(); ++i) {
      conv_.emplace_back("cls.conv" + std::to_string(i), channels, cfg.filters[i], cfg.kernels[i],
                         nn::Activation::kRelu);
      channels = cfg.filters[i];
    }
    hidden_ = nn::Dense<T>("cls.dense_hidden", channels * cfg.window_length, cfg.dense_units,
                           nn::Activation::kRelu);
    output_ = nn::Dense<T>("cls.dense_out", cfg.dense_units, cfg.window_length,
                           nn::Activation::kSigmoid);
  }

  const ClassificationConfig& config() const noexcept { return cfg_; }

  template <typename Rng>
  void initialize(Rng& rng) {
    for (auto& c : conv_) c.initialize(rng);
    hidden_.initialize(rng);
    output_.initialize(rng);
  }

  std::vector<nn::LayerParams<T>*> parameters() {
    std::vector<nn::LayerParams<T>*> out;
    for (auto& c : conv_) out.push_back(&c.params());
    out.push_back(&hidden_.params());
    out.push_back(&output_.params());
    return out;
  }

  Tensor<T> forward(const Tensor<T>& x, ClassificationTrace<T>& trace) const {
    expect_dims({x.dim(1)}, {cfg_.window_length}, "classification input length");
    const std::size_t batch = x.dim(0), length = cfg_.window_length;
    trace.conv.resize(conv_.size());
    Tensor<T> h = x.reshaped({batch, 1, length});
    for (std::size_t i = 0; i < conv_.size(); ++i) h = conv_[i].forward(h, trace.conv[i]);
    const std::size_t flat = h.size() / batch;
    h = hidden_.forward(std::move(h).reshaped({batch, flat}), trace.hidden);
    return output_.forward(h, trace.output);
  }

  void backward(const ClassificationTrace<T>& trace, const Tensor<T>& grad_s_hat) {
    Tensor<T> g = output_.backward(trace.output, grad_s_hat);
    g = hidden_.backward(trace.hidden, g);
    const std::size_t batch = g.dim(0);
    g.reshape({batch, conv_.back().filters(), cfg_.window_length});
    for (std::size_t i = conv_.size(); i-- > 0;) g = conv_[i].backward(trace.conv[i], g);
  }

  nn::Conv1d<T>& conv(std::size_t i) { return conv_.at(i); }
  nn::Dense<T>& dense_hidden() { return hidden_; }
  nn::Dense<T>& dense_output() { return output_; }

 private:
  ClassificationConfig cfg_;
  std::vector<nn::Conv1d<T>> conv_;
  nn::Dense<T> hidden_, output_;
};

template <typename T>
struct LdwaOutput {
  Tensor<T> y_hat;  // p_hat * s_hat
  Tensor<T> p_hat;
  Tensor<T> s_hat;
  Tensor<T> alpha;
};

template <typename T>
struct LdwaTrace {
  RegressionTrace<T> regression;
  ClassificationTrace<T> classification;
  Tensor<T> p_hat, s_hat;
  bool unbatched = false;
};

template <typename T>
struct JointLoss {
  T loss = T(0);
  T mse = T(0);
  T bce = T(0);
  Tensor<T> grad_p_hat;
  Tensor<T> grad_s_hat;
};

// Regression and classification subnetworks over the same window, gated
// elementwise: y_hat = p_hat * s_hat. Windows are [L] or [batch, L].
template <typename T>
class LdwaModel {
 public:
  LdwaModel() = default;
  LdwaModel(std::string appliance, const RegressionConfig& reg, const ClassificationConfig& cls)
      : appliance_(std::move(appliance)), regression_(reg), classification_(cls) {
    if (reg.window_length != cls.window_length) {
      throw ShapeError("regression and classification window lengths differ: " +
                       std::to_string(reg.window_length) + " vs " +
                       std::to_string(cls.window_length));
    }
  }

  const std::string& appliance() const noexcept { return appliance_; }
  const RegressionConfig& regression_config() const noexcept { return regression_.config(); }
  const ClassificationConfig& classification_config() const noexcept {
    return classification_.config();
  }
  std::size_t window_length() const noexcept { return regression_.config().window_length; }

  RegressionNet<T>& regression() noexcept { return regression_; }
  ClassificationNet<T>& classification() noexcept { return classification_; }

  std::optional<NormalizationMeta> normalization;

  void initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    regression_.initialize(rng);
    classification_.initialize(rng);
  }

  // Regression parameters first, then classification, in layer order.
  std::vector<nn::LayerParams<T>*> parameters() {
    auto out = regression_.parameters();
    for (auto* p : classification_.parameters()) out.push_back(p);
    return out;
  }

  std::vector<const nn::LayerParams<T>*> parameters() const {
    auto layers = const_cast<LdwaModel*>(this)->parameters();
    return {layers.begin(), layers.end()};
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto* p : parameters()) n += p->parameter_count();
    return n;
  }

  void zero_grads() {
    for (auto* p : parameters()) p->zero_grads();
  }

  RegressionOutput<T> forward_regression(const Tensor<T>& window) const {
    RegressionTrace<T> trace;
    const bool single = window.rank() == 1;
    auto out = regression_.forward(as_batch(window), trace);
    if (single) {
      out.p_hat.reshape({window_length()});
      out.alpha.reshape({window_length()});
    }
    return out;
  }

  Tensor<T> forward_classification(const Tensor<T>& window) const {
    ClassificationTrace<T> trace;
    Tensor<T> s = classification_.forward(as_batch(window), trace);
    if (window.rank() == 1) s.reshape({window_length()});
    return s;
  }

  LdwaOutput<T> forward(const Tensor<T>& window, LdwaTrace<T>& trace) const {
    trace.unbatched = window.rank() == 1;
    const Tensor<T> x = as_batch(window);
    auto reg = regression_.forward(x, trace.regression);
    Tensor<T> s_hat = classification_.forward(x, trace.classification);
    Tensor<T> y_hat(reg.p_hat.dims());
    for (std::size_t i = 0; i < y_hat.size(); ++i) y_hat[i] = reg.p_hat[i] * s_hat[i];
    trace.p_hat = reg.p_hat;
    trace.s_hat = s_hat;
    LdwaOutput<T> out{std::move(y_hat), std::move(reg.p_hat), std::move(s_hat),
                      std::move(reg.alpha)};
    if (trace.unbatched) {
      for (auto* t : {&out.y_hat, &out.p_hat, &out.s_hat, &out.alpha}) {
        t->reshape({window_length()});
      }
    }
    return out;
  }

  LdwaOutput<T> forward(const Tensor<T>& window) const {
    LdwaTrace<T> trace;
    return forward(window, trace);
  }

  // mse(y_hat, power) + bce(s_hat, state). The MSE gradient reaches both
  // subnetworks through the gate by the product rule.
  JointLoss<T> joint_loss(const LdwaOutput<T>& out, const Tensor<T>& target_power,
                          const Tensor<T>& target_state) const {
    auto mse = nn::mse_loss(out.y_hat, target_power);
    auto bce = nn::bce_loss(out.s_hat, target_state);
    JointLoss<T> loss;
    loss.mse = mse.loss;
    loss.bce = bce.loss;
    loss.loss = mse.loss + bce.loss;
    loss.grad_p_hat = Tensor<T>(out.y_hat.dims());
    loss.grad_s_hat = std::move(bce.grad);
    for (std::size_t i = 0; i < out.y_hat.size(); ++i) {
      loss.grad_p_hat[i] = mse.grad[i] * out.s_hat[i];
      loss.grad_s_hat[i] += mse.grad[i] * out.p_hat[i];
    }
    return loss;
  }

  void backward(const LdwaTrace<T>& trace, const Tensor<T>& grad_p_hat,
                const Tensor<T>& grad_s_hat) {
    const Dims batched = trace.p_hat.dims();
    regression_.backward(trace.regression, grad_p_hat.reshaped(batched));
    classification_.backward(trace.classification, grad_s_hat.reshaped(batched));
  }

 private:
  Tensor<T> as_batch(const Tensor<T>& window) const {
    if (window.rank() == 1) return window.reshaped({1, window.size()});
    if (window.rank() == 2) return window;
    throw ShapeError("model input must be [L] or [batch, L], got " +
                     dims_to_string(window.dims()));
  }

  std::string appliance_;
  RegressionNet<T> regression_;
  ClassificationNet<T> classification_;
};

}  // namespace ldwa
