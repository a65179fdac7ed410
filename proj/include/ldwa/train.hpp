#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ldwa/data.hpp"
#include "ldwa/error.hpp"
#include "ldwa/model.hpp"
#include "ldwa/nn/optimizer.hpp"

namespace ldwa {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  double base_lr = 0.01;
  double momentum = 0.9;
  double decay = 1e-6;
  std::size_t patience = 5;
  double val_fraction = 0.15;
  std::uint64_t seed = 0;
  // Keep every n-th training window; validation and inference use all.
  std::size_t window_stride = 1;

  void validate() const {
    if (batch_size < 1) throw DomainError("train config: batch_size must be >= 1");
    if (patience < 1) throw DomainError("train config: patience must be >= 1");
    if (max_epochs < 1) throw DomainError("train config: max_epochs must be >= 1");
    if (window_stride < 1) throw DomainError("train config: window_stride must be >= 1");
    if (!(base_lr >= 0.0) || !std::isfinite(base_lr)) {
      throw DomainError("train config: base_lr must be finite and >= 0");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
      throw DomainError("train config: momentum must be in [0, 1)");
    }
    if (!(decay >= 0.0)) throw DomainError("train config: decay must be >= 0");
    if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
      throw DomainError("train config: val_fraction must be in [0, 1)");
    }
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

enum class StopReason { kEarlyStop, kMaxEpochs };

inline const char* to_string(StopReason r) {
  return r == StopReason::kEarlyStop ? "early_stop" : "max_epochs";
}

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double learning_rate = 0.0;
  double seconds = 0.0;
};

struct TrainRecord {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
  StopReason stop_reason = StopReason::kMaxEpochs;
};

inline void write_train_record_csv(const TrainRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "epoch,train_loss,val_loss,lr,seconds,best_epoch,stop_reason\n";
  for (const auto& e : record.epochs) {
    out << e.epoch << ',' << detail::format_double(e.train_loss) << ','
        << detail::format_double(e.val_loss) << ',' << detail::format_double(e.learning_rate)
        << ',' << detail::format_double(e.seconds) << ',' << record.best_epoch << ','
        << to_string(record.stop_reason) << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

namespace detail {

template <typename T>
std::vector<Tensor<T>> snapshot(LdwaModel<T>& model) {
  std::vector<Tensor<T>> out;
  for (const auto* layer : model.parameters()) {
    for (const auto& w : layer->weights) out.push_back(w);
  }
  return out;
}

template <typename T>
void restore(LdwaModel<T>& model, const std::vector<Tensor<T>>& weights) {
  std::size_t slot = 0;
  for (auto* layer : model.parameters()) {
    for (auto& w : layer->weights) w = weights.at(slot++);
  }
}

}  // namespace detail

// Sample-weighted mean joint loss over a window set, without touching
// gradients.
template <typename T>
double evaluate_loss(const LdwaModel<T>& model, const WindowSet& windows,
                     std::size_t batch_size = 64) {
  if (!model.normalization) throw DataError("evaluate_loss: model has no normalization metadata");
  if (windows.empty()) throw DataError("evaluate_loss: empty window set");
  double total = 0.0;
  std::vector<std::size_t> idx;
  for (std::size_t first = 0; first < windows.size(); first += batch_size) {
    const std::size_t b = std::min(batch_size, windows.size() - first);
    idx.resize(b);
    std::iota(idx.begin(), idx.end(), first);
    const auto batch = normalize(make_batch<T>(windows, idx), *model.normalization);
    const auto out = model.forward(batch.aggregate);
    total += static_cast<double>(model.joint_loss(out, batch.appliance, batch.state).loss) *
             static_cast<double>(b);
  }
  return total / static_cast<double>(windows.size());
}

// Mini-batch SGD on the joint loss with early stopping. The model must be
// initialized and carry normalization metadata fitted on the training data.
// On return it holds the parameters of the best validation epoch; with an
// empty validation set the training loss stands in for it.
template <typename T>
TrainRecord train(LdwaModel<T>& model, const WindowSet& train_windows,
                  const WindowSet& val_windows, const TrainConfig& cfg,
                  std::ostream* progress = nullptr) {
  cfg.validate();
  if (!model.normalization) throw DataError("train: model has no normalization metadata");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < train_windows.size(); i += cfg.window_stride) order.push_back(i);
  if (order.empty()) throw DataError("train: empty training set");
  if (train_windows.length() != model.window_length()) {
    throw ShapeError("train: windows of length " + std::to_string(train_windows.length()) +
                     " for a model with L = " + std::to_string(model.window_length()));
  }

  nn::OptimizerState<T> opt;
  opt.momentum = cfg.momentum;
  opt.base_lr = cfg.base_lr;
  opt.decay = cfg.decay;
  std::mt19937_64 rng(cfg.seed);
  model.zero_grads();

  TrainRecord record;
  auto best = detail::snapshot(model);
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
      const std::size_t b = std::min(cfg.batch_size, order.size() - first);
      const std::span<const std::size_t> idx(order.data() + first, b);
      const auto batch = normalize(make_batch<T>(train_windows, idx), *model.normalization);
      LdwaTrace<T> trace;
      const auto out = model.forward(batch.aggregate, trace);
      const auto loss = model.joint_loss(out, batch.appliance, batch.state);
      if (!std::isfinite(static_cast<double>(loss.loss))) {
        throw NumericalError("train: non-finite loss at epoch " + std::to_string(epoch) +
                             ", batch " + std::to_string(first / cfg.batch_size) +
                             " (mse=" + std::to_string(loss.mse) +
                             ", bce=" + std::to_string(loss.bce) + ")");
      }
      epoch_loss += static_cast<double>(loss.loss) * static_cast<double>(b);
      model.backward(trace, loss.grad_p_hat, loss.grad_s_hat);
      auto params = model.parameters();
      nn::sgd_nesterov_step<T>(params, opt);
    }
    EpochRecord e;
    e.epoch = epoch;
    e.train_loss = epoch_loss / static_cast<double>(order.size());
    e.val_loss = val_windows.empty() ? e.train_loss : evaluate_loss(model, val_windows);
    if (!std::isfinite(e.val_loss)) {
      throw NumericalError("train: non-finite validation loss at epoch " + std::to_string(epoch));
    }
    e.learning_rate = opt.learning_rate();
    e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    record.epochs.push_back(e);
    if (progress) {
      *progress << "epoch=" << epoch << " train_loss=" << detail::format_double(e.train_loss)
                << " val_loss=" << detail::format_double(e.val_loss)
                << " lr=" << detail::format_double(e.learning_rate) << std::endl;
    }

    if (record.best_epoch == 0 || e.val_loss < record.best_val_loss) {
      record.best_epoch = epoch;
      record.best_val_loss = e.val_loss;
      best = detail::snapshot(model);
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      record.stop_reason = StopReason::kEarlyStop;
      break;
    }
  }
  detail::restore(model, best);
  return record;
}

// Regression hyperparameter grid; points are visited F-major, then K, then H.
struct RegressionGrid {
  std::vector<std::size_t> filters;
  std::vector<std::size_t> kernels;
  std::vector<std::size_t> hidden;

  std::vector<RegressionConfig> points(std::size_t window_length) const {
    std::vector<RegressionConfig> out;
    for (auto f : filters) {
      for (auto k : kernels) {
        for (auto h : hidden) out.push_back({window_length, f, k, h});
      }
    }
    return out;
  }
};

struct GridEntry {
  RegressionConfig config;
  double best_val_loss = 0.0;
  std::size_t parameter_count = 0;
  std::size_t grid_index = 0;
  TrainRecord record;
};

template <typename T>
struct GridResult {
  LdwaModel<T> best_model;
  // Sorted best first.
  std::vector<GridEntry> leaderboard;
};

// Trains one model per grid point from the same seed and ranks them by best
// validation loss, then parameter count, then grid order.
template <typename T>
GridResult<T> grid_search(const std::string& appliance, const ClassificationConfig& cls,
                          const NormalizationMeta& meta, const WindowSet& train_windows,
                          const WindowSet& val_windows, const RegressionGrid& grid,
                          const TrainConfig& cfg, std::ostream* progress = nullptr) {
  const auto points = grid.points(cls.window_length);
  if (points.empty()) throw DomainError("grid_search: empty grid");
  auto better = [](const GridEntry& a, const GridEntry& b) {
    if (a.best_val_loss != b.best_val_loss) return a.best_val_loss < b.best_val_loss;
    if (a.parameter_count != b.parameter_count) return a.parameter_count < b.parameter_count;
    return a.grid_index < b.grid_index;
  };
  std::vector<GridEntry> entries;
  std::optional<LdwaModel<T>> best;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].validate();
    LdwaModel<T> model(appliance, points[i], cls);
    model.initialize(cfg.seed);
    model.normalization = meta;
    if (progress) {
      *progress << "grid point " << i << ": F=" << points[i].filters
                << " K=" << points[i].kernel << " H=" << points[i].hidden << std::endl;
    }
    auto record = train(model, train_windows, val_windows, cfg, progress);
    entries.push_back({points[i], record.best_val_loss, model.parameter_count(), i, std::move(record)});
    if (!best || better(entries.back(), entries[best_index])) {
      best = std::move(model);
      best_index = i;
    }
  }
  std::stable_sort(entries.begin(), entries.end(), better);
  return {std::move(*best), std::move(entries)};
}

}  // namespace ldwa
