#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include "ldwa/error.hpp"
#include "ldwa/log.hpp"
#include "ldwa/normalization.hpp"
#include "ldwa/tensor.hpp"

namespace ldwa {

// Uniformly sampled real power of one channel. Timestamps are integer
// seconds; sample i is at t0 + i * period_s.
struct PowerSeries {
  std::string name;
  std::int64_t period_s = 1;
  std::int64_t t0 = 0;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  std::int64_t timestamp(std::size_t i) const {
    return t0 + static_cast<std::int64_t>(i) * period_s;
  }
  std::int64_t end() const { return timestamp(values.size()); }

  friend bool operator==(const PowerSeries&, const PowerSeries&) = default;
};

struct ApplianceSpec {
  std::string name;
  std::size_t window_length = 0;
  double on_threshold_w = 15.0;
  double min_on_s = 60.0;
  double min_off_s = 60.0;
  double max_power_w = 0.0;

  void validate() const {
    if (name.empty()) throw DataError("appliance spec: empty name");
    if (window_length == 0) throw DataError("appliance spec " + name + ": window_L must be > 0");
    if (!(on_threshold_w > 0.0)) {
      throw DataError("appliance spec " + name + ": on_threshold_w must be > 0");
    }
    if (min_on_s < 0.0 || min_off_s < 0.0) {
      throw DataError("appliance spec " + name + ": durations must be >= 0");
    }
    if (!(max_power_w >= 0.0)) throw DataError("appliance spec " + name + ": max_power_w < 0");
  }

  friend bool operator==(const ApplianceSpec&, const ApplianceSpec&) = default;
};

// Window lengths (in samples at the dataset's native rate) for the REDD and
// UK-DALE appliances.
inline std::optional<std::size_t> default_window_length(std::string_view dataset,
                                                        std::string_view appliance) {
  struct Entry {
    std::string_view dataset, appliance;
    std::size_t length;
  };
  static constexpr Entry kTable[] = {
      {"redd", "dishwasher", 2304},     {"redd", "fridge", 496},
      {"redd", "microwave", 128},       {"ukdale", "dishwasher", 1536},
      {"ukdale", "fridge", 512},        {"ukdale", "kettle", 128},
      {"ukdale", "microwave", 288},     {"ukdale", "washing_machine", 1024},
  };
  for (const auto& e : kTable) {
    if (e.dataset == dataset && e.appliance == appliance) return e.length;
  }
  return std::nullopt;
}

// Default activation-extraction durations: 60 s on / 60 s off, except the
// fridge (60 s on / 12 s off).
inline ApplianceSpec default_appliance_spec(const std::string& name, std::size_t window_length,
                                            double max_power_w) {
  ApplianceSpec spec;
  spec.name = name;
  spec.window_length = window_length;
  spec.max_power_w = max_power_w;
  if (name == "fridge") spec.min_off_s = 12.0;
  return spec;
}

// ---------------------------------------------------------------------------
// Channel CSV: header `timestamp,power_w`, integer-second timestamps.

struct ColumnSpec {
  std::string timestamp_column = "timestamp";
  std::string power_column = "power_w";
};

struct LoadStats {
  std::size_t rows = 0;
  std::size_t clamped_negative = 0;
  std::size_t filled_gaps = 0;
};

inline constexpr std::size_t kMaxFillSamples = 3;

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) {
      f.remove_suffix(1);
    }
  }
  return out;
}

template <typename Number>
bool parse_number(std::string_view text, Number& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Reads a channel CSV into a uniform series. The period is the smallest
// timestamp step; gaps of up to three missing samples are forward-filled,
// longer gaps are rejected. Negative readings are clamped to 0 and counted.
inline PowerSeries load_channel_csv(const std::string& path, const ColumnSpec& columns = {},
                                    LoadStats* stats = nullptr) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open channel file " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  const auto header = detail::split_csv_line(line);
  std::optional<std::size_t> ts_col, pw_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == columns.timestamp_column) ts_col = i;
    if (header[i] == columns.power_column) pw_col = i;
  }
  if (!ts_col || !pw_col) {
    throw DataError(path + ":1: header must contain '" + columns.timestamp_column + "' and '" +
                    columns.power_column + "'");
  }

  LoadStats local;
  std::vector<std::int64_t> stamps;
  std::vector<double> readings;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    std::int64_t ts = 0;
    double watts = 0.0;
    if (fields.size() <= std::max(*ts_col, *pw_col) ||
        !detail::parse_number(fields[*ts_col], ts) ||
        !detail::parse_number(fields[*pw_col], watts) || !std::isfinite(watts)) {
      throw DataError(path + ":" + std::to_string(line_no) + ": unparsable row '" + line + "'");
    }
    if (!stamps.empty() && ts <= stamps.back()) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": timestamps must be strictly increasing");
    }
    if (watts < 0.0) {
      watts = 0.0;
      ++local.clamped_negative;
    }
    stamps.push_back(ts);
    readings.push_back(watts);
  }
  local.rows = stamps.size();
  if (stamps.empty()) throw DataError(path + ": no data rows");

  PowerSeries series;
  series.name = columns.power_column;
  series.t0 = stamps.front();
  series.period_s = 1;
  if (stamps.size() > 1) {
    std::int64_t step = stamps[1] - stamps[0];
    for (std::size_t i = 2; i < stamps.size(); ++i) step = std::min(step, stamps[i] - stamps[i - 1]);
    series.period_s = step;
  }
  series.values.reserve(stamps.size());
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    const std::int64_t offset = stamps[i] - series.t0;
    if (offset % series.period_s != 0) {
      throw DataError(path + ": timestamp " + std::to_string(stamps[i]) +
                      " is off the sampling grid of period " + std::to_string(series.period_s));
    }
    const auto index = static_cast<std::size_t>(offset / series.period_s);
    const std::size_t missing = index - series.values.size();
    if (missing > kMaxFillSamples) {
      throw DataError(path + ": gap of " + std::to_string(missing) + " samples before timestamp " +
                      std::to_string(stamps[i]) + "; split the file at the gap");
    }
    local.filled_gaps += missing;
    for (std::size_t k = 0; k < missing; ++k) series.values.push_back(series.values.back());
    series.values.push_back(readings[i]);
  }
  if (local.clamped_negative > 0) {
    warn(path + ": clamped " + std::to_string(local.clamped_negative) + " negative readings to 0");
  }
  if (stats) *stats = local;
  return series;
}

inline void write_channel_csv(const PowerSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "timestamp,power_w\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << series.timestamp(i) << ',' << detail::format_double(series.values[i]) << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Alignment

struct AlignedPair {
  PowerSeries aggregate;
  PowerSeries appliance;
};

namespace detail {

// Mean of the samples falling in each bin [start + k P, start + (k+1) P);
// empty bins are forward-filled for runs of at most three bins.
inline std::vector<std::optional<double>> resample(const PowerSeries& s, std::int64_t start,
                                                   std::size_t bins, std::int64_t period) {
  std::vector<double> sum(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::int64_t ts = s.timestamp(i);
    if (ts < start) continue;
    const auto k = static_cast<std::size_t>((ts - start) / period);
    if (k >= bins) break;
    sum[k] += s.values[i];
    ++count[k];
  }
  std::vector<std::optional<double>> out(bins);
  std::optional<double> last;
  std::size_t empty_run = 0;
  for (std::size_t k = 0; k < bins; ++k) {
    if (count[k] > 0) {
      out[k] = sum[k] / static_cast<double>(count[k]);
      last = out[k];
      empty_run = 0;
    } else if (last && ++empty_run <= kMaxFillSamples) {
      out[k] = last;
    }
  }
  // A run longer than the fill limit is a gap in its entirety.
  for (std::size_t k = 0; k < bins;) {
    if (count[k] > 0) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j < bins && count[j] == 0) ++j;
    if (j - k > kMaxFillSamples) {
      for (std::size_t m = k; m < j; ++m) out[m].reset();
    }
    k = j;
  }
  return out;
}

}  // namespace detail

// Resamples both series onto a common grid of `target_period_s` over their
// overlapping time range (mean pooling when downsampling, forward fill of up
// to three samples otherwise). Gaps longer than that split the result into
// several aligned segments; each segment has equal-length series.
inline std::vector<AlignedPair> align_pair(const PowerSeries& aggregate,
                                           const PowerSeries& appliance,
                                           std::int64_t target_period_s) {
  if (target_period_s <= 0) throw DataError("align: target period must be positive");
  const std::int64_t start = std::max(aggregate.t0, appliance.t0);
  const std::int64_t stop = std::min(aggregate.end(), appliance.end());
  if (stop <= start) throw DataError("align: series have no temporal overlap");
  const auto bins = static_cast<std::size_t>((stop - start) / target_period_s);
  if (bins == 0) throw DataError("align: overlap shorter than one target period");

  const auto agg = detail::resample(aggregate, start, bins, target_period_s);
  const auto app = detail::resample(appliance, start, bins, target_period_s);
  std::vector<AlignedPair> segments;
  AlignedPair* current = nullptr;
  for (std::size_t k = 0; k < bins; ++k) {
    if (!agg[k] || !app[k]) {
      current = nullptr;
      continue;
    }
    if (!current) {
      const std::int64_t t = start + static_cast<std::int64_t>(k) * target_period_s;
      segments.push_back({{aggregate.name, target_period_s, t, {}},
                          {appliance.name, target_period_s, t, {}}});
      current = &segments.back();
    }
    current->aggregate.values.push_back(*agg[k]);
    current->appliance.values.push_back(*app[k]);
  }
  if (segments.empty()) throw DataError("align: no gap-free overlapping samples");
  return segments;
}

// ---------------------------------------------------------------------------
// On/off states

inline std::size_t duration_to_samples(double seconds, std::int64_t period_s) {
  if (seconds <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(seconds / static_cast<double>(period_s) - 1e-9));
}

// s_t = 1 iff y_t > threshold, then interior off-gaps shorter than min_off
// are closed and on-runs shorter than min_on are removed.
inline std::vector<double> make_state_sequence(const PowerSeries& appliance,
                                               const ApplianceSpec& spec) {
  const std::size_t n = appliance.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = appliance.values[i] > spec.on_threshold_w ? 1.0 : 0.0;

  auto for_each_run = [&](double value, auto&& fn) {
    for (std::size_t i = 0; i < n;) {
      if (s[i] != value) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n && s[j] == value) ++j;
      fn(i, j);
      i = j;
    }
  };

  const std::size_t min_off = duration_to_samples(spec.min_off_s, appliance.period_s);
  const std::size_t min_on = duration_to_samples(spec.min_on_s, appliance.period_s);
  if (min_off > 0) {
    for_each_run(0.0, [&](std::size_t a, std::size_t b) {
      if (a > 0 && b < n && b - a < min_off) std::fill(s.begin() + a, s.begin() + b, 1.0);
    });
  }
  if (min_on > 0) {
    for_each_run(1.0, [&](std::size_t a, std::size_t b) {
      if (b - a < min_on) std::fill(s.begin() + a, s.begin() + b, 0.0);
    });
  }
  return s;
}

// ---------------------------------------------------------------------------
// Windows

// Aggregate, appliance and state samples for one aligned recording.
struct AlignedSeries {
  std::vector<double> aggregate;
  std::vector<double> appliance;
  std::vector<double> state;
};

// Index set of length-L windows over a shared aligned recording. Window i
// covers samples [start(i), start(i) + L).
class WindowSet {
 public:
  WindowSet() = default;
  WindowSet(std::shared_ptr<const AlignedSeries> data, std::size_t length,
            std::vector<std::size_t> starts)
      : data_(std::move(data)), length_(length), starts_(std::move(starts)) {}

  std::size_t size() const noexcept { return starts_.size(); }
  bool empty() const noexcept { return starts_.empty(); }
  std::size_t length() const noexcept { return length_; }
  std::size_t start(std::size_t i) const { return starts_.at(i); }
  const std::vector<std::size_t>& starts() const noexcept { return starts_; }
  const std::shared_ptr<const AlignedSeries>& data() const noexcept { return data_; }

  std::span<const double> aggregate(std::size_t i) const {
    return std::span<const double>(data_->aggregate).subspan(starts_.at(i), length_);
  }
  std::span<const double> appliance(std::size_t i) const {
    return std::span<const double>(data_->appliance).subspan(starts_.at(i), length_);
  }
  std::span<const double> state(std::size_t i) const {
    return std::span<const double>(data_->state).subspan(starts_.at(i), length_);
  }

  WindowSet subset(std::vector<std::size_t> starts) const {
    return WindowSet(data_, length_, std::move(starts));
  }

 private:
  std::shared_ptr<const AlignedSeries> data_;
  std::size_t length_ = 0;
  std::vector<std::size_t> starts_;
};

// Windows of length L starting at 0, hop, 2 hop, ... (T - L + 1 windows for
// hop 1). A recording shorter than L yields no windows and a warning.
inline WindowSet sliding_windows(std::vector<double> x, std::vector<double> y,
                                 std::vector<double> s, std::size_t length,
                                 std::size_t hop = 1) {
  if (x.size() != y.size() || x.size() != s.size()) {
    throw DataError("sliding_windows: aggregate, appliance and state lengths differ");
  }
  if (length == 0 || hop == 0) throw DataError("sliding_windows: L and hop must be >= 1");
  const std::size_t n = x.size();
  auto data = std::make_shared<const AlignedSeries>(
      AlignedSeries{std::move(x), std::move(y), std::move(s)});
  std::vector<std::size_t> starts;
  if (n < length) {
    warn("sliding_windows: series of length " + std::to_string(n) +
         " is shorter than the window length " + std::to_string(length));
  } else {
    for (std::size_t i = 0; i + length <= n; i += hop) starts.push_back(i);
  }
  return WindowSet(std::move(data), length, std::move(starts));
}

// Concatenates aligned segments into one recording; windows never straddle
// a segment boundary.
inline WindowSet windows_from_segments(std::span<const AlignedPair> segments,
                                       const ApplianceSpec& spec, std::size_t hop = 1) {
  AlignedSeries joined;
  std::vector<std::size_t> starts;
  const std::size_t length = spec.window_length;
  for (const auto& seg : segments) {
    const std::size_t offset = joined.aggregate.size();
    const auto states = make_state_sequence(seg.appliance, spec);
    joined.aggregate.insert(joined.aggregate.end(), seg.aggregate.values.begin(),
                            seg.aggregate.values.end());
    joined.appliance.insert(joined.appliance.end(), seg.appliance.values.begin(),
                            seg.appliance.values.end());
    joined.state.insert(joined.state.end(), states.begin(), states.end());
    for (std::size_t i = 0; i + length <= seg.aggregate.size(); i += hop) starts.push_back(offset + i);
  }
  if (starts.empty()) {
    warn("no segment is at least " + std::to_string(length) + " samples long");
  }
  return WindowSet(std::make_shared<const AlignedSeries>(std::move(joined)), length,
                   std::move(starts));
}

// Normalization fitted on exactly the samples covered by `windows`.
inline NormalizationMeta fit_normalization(const WindowSet& windows) {
  if (windows.empty()) throw DataError("normalization: cannot fit on an empty training set");
  const AlignedSeries& data = *windows.data();
  std::vector<char> covered(data.aggregate.size(), 0);
  for (auto start : windows.starts()) {
    std::fill_n(covered.begin() + static_cast<std::ptrdiff_t>(start), windows.length(), 1);
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) continue;
    x.push_back(data.aggregate[i]);
    y.push_back(data.appliance[i]);
  }
  return fit_normalization(x, y);
}

// Contiguous tail split: the last round(n * val_fraction) windows validate;
// training keeps only windows that end before the first validation window
// starts, so no sample is shared between the two sets.
inline std::pair<WindowSet, WindowSet> split_train_val(const WindowSet& windows,
                                                       double val_fraction) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw DataError("split_train_val: val_fraction must be in [0, 1)");
  }
  const std::size_t n = windows.size();
  const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * val_fraction));
  const std::vector<std::size_t>& starts = windows.starts();
  std::vector<std::size_t> val(starts.end() - static_cast<std::ptrdiff_t>(n_val), starts.end());
  std::vector<std::size_t> train;
  for (std::size_t i = 0; i < n - n_val; ++i) {
    if (val.empty() || starts[i] + windows.length() <= val.front()) train.push_back(starts[i]);
  }
  return {windows.subset(std::move(train)), windows.subset(std::move(val))};
}

template <typename T>
struct WindowBatch {
  Tensor<T> aggregate;  // [batch, L]
  Tensor<T> appliance;  // [batch, L]
  Tensor<T> state;      // [batch, L]
  std::vector<std::size_t> starts;
};

template <typename T>
WindowBatch<T> make_batch(const WindowSet& set, std::span<const std::size_t> indices) {
  const std::size_t length = set.length();
  WindowBatch<T> batch{Tensor<T>({indices.size(), length}), Tensor<T>({indices.size(), length}),
                       Tensor<T>({indices.size(), length}), {}};
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const std::size_t i = indices[b];
    batch.starts.push_back(set.start(i));
    const auto x = set.aggregate(i), y = set.appliance(i), s = set.state(i);
    for (std::size_t t = 0; t < length; ++t) {
      batch.aggregate[b * length + t] = static_cast<T>(x[t]);
      batch.appliance[b * length + t] = static_cast<T>(y[t]);
      batch.state[b * length + t] = static_cast<T>(s[t]);
    }
  }
  return batch;
}

// Standardizes the aggregate and min-max scales the appliance target; the
// state is unchanged.
template <typename T>
WindowBatch<T> normalize(WindowBatch<T> batch, const NormalizationMeta& meta) {
  for (auto& v : batch.aggregate.values()) v = static_cast<T>(meta.normalize_input(v));
  for (auto& v : batch.appliance.values()) v = static_cast<T>(meta.normalize_target(v));
  return batch;
}

template <typename T>
std::vector<double> denormalize(std::span<const T> p_hat, const NormalizationMeta& meta) {
  std::vector<double> out(p_hat.size());
  for (std::size_t i = 0; i < p_hat.size(); ++i) out[i] = meta.denormalize(p_hat[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic households

struct SynthOptions {
  double duration_s = 0.0;
  std::int64_t period_s = 1;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  // Multiplies every activation duration; 1 is the nominal distribution.
  double duration_scale = 1.0;
};

struct Household {
  PowerSeries aggregate;
  std::vector<PowerSeries> appliances;
  // Signed noise added before the aggregate is clamped at 0 W.
  std::vector<double> noise;
};

// Each appliance emits rectangular activations. With m = ceil(min_on / period)
// and g = max(1, ceil(min_off / period)) samples: duration uniform in
// [m, 3m] (times duration_scale), level uniform in [2 threshold, max_power],
// off gap uniform in [g, g + 12m]. The aggregate is the sum plus Gaussian
// noise, clamped at 0.
inline Household synth_household(std::span<const ApplianceSpec> specs, const SynthOptions& opt) {
  if (opt.period_s <= 0) throw DataError("synth: period must be positive");
  if (!(opt.duration_s > 0.0)) throw DataError("synth: duration must be positive");
  if (opt.noise_std < 0.0) throw DataError("synth: noise_std must be >= 0");
  if (!(opt.duration_scale > 0.0)) throw DataError("synth: duration_scale must be positive");
  const auto n = static_cast<std::size_t>(opt.duration_s / static_cast<double>(opt.period_s));
  if (n == 0) throw DataError("synth: duration shorter than one period");

  Household house;
  house.aggregate = {"aggregate", opt.period_s, 0, std::vector<double>(n, 0.0)};
  for (std::size_t a = 0; a < specs.size(); ++a) {
    const ApplianceSpec& spec = specs[a];
    spec.validate();
    if (spec.max_power_w < 2.0 * spec.on_threshold_w) {
      throw DataError("synth: appliance " + spec.name + " max_power_w below 2x threshold");
    }
    std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(a), std::uint64_t{0x5eed}};
    std::mt19937_64 rng(seq);
    const std::size_t m = std::max<std::size_t>(1, duration_to_samples(spec.min_on_s, opt.period_s));
    const std::size_t g =
        std::max<std::size_t>(1, duration_to_samples(spec.min_off_s, opt.period_s));
    const auto lo = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(m) * opt.duration_scale)));
    const auto hi = std::max<std::size_t>(
        lo, static_cast<std::size_t>(std::llround(static_cast<double>(3 * m) * opt.duration_scale)));
    std::uniform_int_distribution<std::size_t> duration(lo, hi);
    std::uniform_int_distribution<std::size_t> gap(g, g + 12 * m);
    std::uniform_real_distribution<double> level(2.0 * spec.on_threshold_w, spec.max_power_w);

    PowerSeries series{spec.name, opt.period_s, 0, std::vector<double>(n, 0.0)};
    std::size_t t = std::uniform_int_distribution<std::size_t>(0, g + 12 * m)(rng);
    while (t < n) {
      const std::size_t len = duration(rng);
      const double watts = level(rng);
      for (std::size_t k = t; k < std::min(n, t + len); ++k) series.values[k] = watts;
      t += len + gap(rng);
    }
    for (std::size_t k = 0; k < n; ++k) house.aggregate.values[k] += series.values[k];
    house.appliances.push_back(std::move(series));
  }

  house.noise.assign(n, 0.0);
  if (opt.noise_std > 0.0) {
    std::seed_seq seq{opt.seed, std::uint64_t{0xa99}};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, opt.noise_std);
    for (std::size_t k = 0; k < n; ++k) {
      house.noise[k] = noise(rng);
      house.aggregate.values[k] = std::max(0.0, house.aggregate.values[k] + house.noise[k]);
    }
  }
  return house;
}

}  // namespace ldwa
