#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "ldwa/error.hpp"

namespace ldwa {

// Input standardization (aggregate) and target min-max scaling
// (appliance), both fitted on training data only.
struct NormalizationMeta {
  double input_mean = 0.0;
  double input_std = 1.0;
  double target_min = 0.0;
  double target_max = 1.0;

  void validate() const {
    if (!(input_std > 0.0) || !std::isfinite(input_std) || !std::isfinite(input_mean)) {
      throw DataError("normalization: input std must be positive and finite");
    }
    if (!(target_min >= 0.0) || !(target_max > target_min) || !std::isfinite(target_max)) {
      throw DataError("normalization: need 0 <= target_min < target_max, got [" +
                      std::to_string(target_min) + ", " + std::to_string(target_max) + "]");
    }
  }

  double normalize_input(double x) const { return (x - input_mean) / input_std; }
  double normalize_target(double y) const { return (y - target_min) / (target_max - target_min); }
  // Inverse of normalize_target, clamped at 0 W.
  double denormalize(double p) const {
    return std::max(0.0, p * (target_max - target_min) + target_min);
  }

  friend bool operator==(const NormalizationMeta&, const NormalizationMeta&) = default;
};

// Population mean/std of the aggregate and min/max of the appliance.
inline NormalizationMeta fit_normalization(std::span<const double> aggregate,
                                           std::span<const double> appliance) {
  if (aggregate.empty() || appliance.empty()) {
    throw DataError("normalization: cannot fit on an empty training set");
  }
  NormalizationMeta meta;
  double sum = 0.0;
  for (double x : aggregate) sum += x;
  meta.input_mean = sum / static_cast<double>(aggregate.size());
  double sq = 0.0;
  for (double x : aggregate) sq += (x - meta.input_mean) * (x - meta.input_mean);
  meta.input_std = std::sqrt(sq / static_cast<double>(aggregate.size()));
  const auto [lo, hi] = std::minmax_element(appliance.begin(), appliance.end());
  meta.target_min = *lo;
  meta.target_max = *hi;
  meta.validate();
  return meta;
}

}  // namespace ldwa
