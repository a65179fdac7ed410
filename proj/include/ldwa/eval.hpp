#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ldwa/data.hpp"
#include "ldwa/error.hpp"
#include "ldwa/model.hpp"

namespace ldwa {

// Median of a non-empty sample; even counts give the mean of the two middle
// values. Reorders `values`.
inline double median_inplace(std::vector<double>& values) {
  if (values.empty()) throw DomainError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// Streaming per-position median over overlapping windows. Windows must be
// added in non-decreasing start order; positions before the latest start are
// finalized as soon as no later window can cover them.
class MedianReconstructor {
 public:
  explicit MedianReconstructor(std::size_t length) : output_(length, 0.0) {}

  void add(std::size_t start, std::span<const double> values) {
    if (start < last_start_) throw DomainError("median reconstruction: window starts must not decrease");
    if (start + values.size() > output_.size()) {
      throw ShapeError("median reconstruction: window [" + std::to_string(start) + ", " +
                       std::to_string(start + values.size()) + ") exceeds series length " +
                       std::to_string(output_.size()));
    }
    last_start_ = start;
    flush(start);
    if (pending_.size() < start + values.size() - base_) {
      pending_.resize(start + values.size() - base_);
    }
    for (std::size_t k = 0; k < values.size(); ++k) pending_[start - base_ + k].push_back(values[k]);
  }

  std::vector<double> finish() {
    flush(output_.size());
    return std::move(output_);
  }

 private:
  void flush(std::size_t until) {
    while (base_ < until) {
      if (pending_.empty() || pending_.front().empty()) {
        throw DomainError("median reconstruction: position " + std::to_string(base_) +
                          " is not covered by any window");
      }
      output_[base_] = median_inplace(pending_.front());
      pending_.pop_front();
      ++base_;
    }
  }

  std::vector<double> output_;
  std::deque<std::vector<double>> pending_;
  std::size_t base_ = 0;
  std::size_t last_start_ = 0;
};

// output[t] = median of every window value covering t.
inline std::vector<double> reconstruct_median(std::span<const std::vector<double>> windows,
                                              std::span<const std::size_t> starts,
                                              std::size_t length) {
  if (windows.size() != starts.size()) {
    throw ShapeError("median reconstruction: windows and starts differ in count");
  }
  std::vector<std::size_t> order(windows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return starts[a] < starts[b]; });
  MedianReconstructor rec(length);
  for (std::size_t i : order) rec.add(starts[i], windows[i]);
  return rec.finish();
}

// ---------------------------------------------------------------------------
// Disaggregation

template <typename T>
struct DisaggregateOptions {
  std::size_t batch_size = 64;
  // Called once per hop-1 window with its start and attention weights.
  std::function<void(std::size_t, std::span<const T>)> attention_sink;
};

// Runs the model over every hop-1 window of the aggregate and reconstructs
// the appliance power in watts by per-sample median.
template <typename T>
PowerSeries disaggregate(const LdwaModel<T>& model, const PowerSeries& aggregate,
                         const DisaggregateOptions<T>& options = {}) {
  if (!model.normalization) throw DataError("disaggregate: model has no normalization metadata");
  const NormalizationMeta& meta = *model.normalization;
  const std::size_t L = model.window_length();
  const std::size_t n = aggregate.size();
  if (n < L) {
    throw DataError("disaggregate: series of length " + std::to_string(n) +
                    " is shorter than the window length " + std::to_string(L));
  }
  const std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);
  std::vector<T> standardized(n);
  for (std::size_t i = 0; i < n; ++i) standardized[i] = static_cast<T>(meta.normalize_input(aggregate.values[i]));

  const std::size_t windows = n - L + 1;
  MedianReconstructor rec(n);
  std::vector<double> watts(L);
  for (std::size_t first = 0; first < windows; first += batch_size) {
    const std::size_t b = std::min(batch_size, windows - first);
    Tensor<T> x({b, L});
    for (std::size_t i = 0; i < b; ++i) {
      std::copy_n(standardized.begin() + static_cast<std::ptrdiff_t>(first + i), L,
                  x.data() + i * L);
    }
    const auto out = model.forward(x);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t t = 0; t < L; ++t) watts[t] = meta.denormalize(out.y_hat[i * L + t]);
      rec.add(first + i, watts);
      if (options.attention_sink) {
        options.attention_sink(first + i, std::span<const T>(out.alpha.data() + i * L, L));
      }
    }
  }
  PowerSeries prediction{model.appliance(), aggregate.period_s, aggregate.t0, rec.finish()};
  for (auto& v : prediction.values) v = std::max(0.0, v);
  return prediction;
}

// ---------------------------------------------------------------------------
// Metrics

namespace detail {
inline void expect_same_length(std::span<const double> a, std::span<const double> b,
                               const char* what) {
  if (a.size() != b.size()) {
    throw DataError(std::string(what) + ": series lengths differ (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw DataError(std::string(what) + ": empty series");
}
}  // namespace detail

inline double mae(std::span<const double> y, std::span<const double> y_hat) {
  detail::expect_same_length(y, y_hat, "mae");
  double sum = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) sum += std::abs(y[t] - y_hat[t]);
  return sum / static_cast<double>(y.size());
}

struct SaeResult {
  double value = 0.0;
  std::size_t periods = 0;
  std::size_t dropped_samples = 0;
};

// Mean over N = floor(T / K) periods of |sum y - sum y_hat| / K; the
// trailing T mod K samples are dropped.
inline SaeResult sae(std::span<const double> y, std::span<const double> y_hat, std::size_t period_len) {
  detail::expect_same_length(y, y_hat, "sae");
  if (period_len == 0) throw DomainError("sae: period length must be >= 1");
  SaeResult r;
  r.periods = y.size() / period_len;
  r.dropped_samples = y.size() % period_len;
  if (r.periods == 0) {
    throw DataError("sae: series of length " + std::to_string(y.size()) +
                    " is shorter than one period of " + std::to_string(period_len));
  }
  double total = 0.0;
  for (std::size_t p = 0; p < r.periods; ++p) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = p * period_len; k < (p + 1) * period_len; ++k) {
      a += y[k];
      b += y_hat[k];
    }
    total += std::abs(a - b) / static_cast<double>(period_len);
  }
  r.value = total / static_cast<double>(r.periods);
  return r;
}

struct ClassificationScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

// Per-sample on/off agreement, a sample being on when it exceeds the
// threshold. Zero denominators give 0.
inline ClassificationScores classification_scores(std::span<const double> y,
                                                  std::span<const double> y_hat,
                                                  double threshold_w = 15.0) {
  detail::expect_same_length(y, y_hat, "classification_scores");
  ClassificationScores s;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const bool truth = y[t] > threshold_w, pred = y_hat[t] > threshold_w;
    if (truth && pred) ++s.tp;
    else if (pred) ++s.fp;
    else if (truth) ++s.fn;
    else ++s.tn;
  }
  const auto tp = static_cast<double>(s.tp);
  if (s.tp + s.fp > 0) s.precision = tp / static_cast<double>(s.tp + s.fp);
  if (s.tp + s.fn > 0) s.recall = tp / static_cast<double>(s.tp + s.fn);
  if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

struct EvalReport {
  std::string appliance;
  double mae_w = 0.0;
  double sae_w = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double threshold_w = 15.0;
  std::size_t period_len_k = 1200;
  std::size_t tp = 0, fp = 0, fn = 0;
  std::size_t sae_dropped_samples = 0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline EvalReport evaluate(const std::string& appliance, std::span<const double> y,
                           std::span<const double> y_hat, double threshold_w = 15.0,
                           std::size_t period_len = 1200) {
  EvalReport r;
  r.appliance = appliance;
  r.threshold_w = threshold_w;
  r.period_len_k = period_len;
  r.mae_w = mae(y, y_hat);
  const auto s = sae(y, y_hat, period_len);
  r.sae_w = s.value;
  r.sae_dropped_samples = s.dropped_samples;
  const auto c = classification_scores(y, y_hat, threshold_w);
  r.precision = c.precision;
  r.recall = c.recall;
  r.f1 = c.f1;
  r.tp = c.tp;
  r.fp = c.fp;
  r.fn = c.fn;
  return r;
}

inline constexpr const char* kEvalCsvHeader =
    "appliance,mae_w,sae_w,precision,recall,f1,threshold_w,period_len_k";

inline void write_eval_csv(std::span<const EvalReport> reports, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << kEvalCsvHeader << '\n';
  for (const auto& r : reports) {
    out << r.appliance << ',' << detail::format_double(r.mae_w) << ','
        << detail::format_double(r.sae_w) << ',' << detail::format_double(r.precision) << ','
        << detail::format_double(r.recall) << ',' << detail::format_double(r.f1) << ','
        << detail::format_double(r.threshold_w) << ',' << r.period_len_k << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace ldwa
