#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ldwa/nn/params.hpp"

namespace ldwa::nn {

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-5;
  // Errors on entries whose analytic and numeric magnitudes are both below
  // this floor are measured relative to the floor.
  double magnitude_floor = 1e-6;
};

struct TensorGradCheck {
  std::string name;
  std::size_t entries = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  // Largest |numeric gradient|; zero means the check says nothing about
  // this tensor (e.g. it sits behind dead ReLU units).
  double max_abs_gradient = 0.0;
  std::size_t worst_index = 0;
  bool passed = true;
};

struct GradCheckReport {
  double tolerance = 0.0;
  std::vector<TensorGradCheck> tensors;

  bool passed() const {
    return std::all_of(tensors.begin(), tensors.end(), [](const auto& t) { return t.passed; });
  }
  std::size_t vacuous_count() const {
    return static_cast<std::size_t>(std::count_if(
        tensors.begin(), tensors.end(), [](const auto& t) { return t.max_abs_gradient == 0.0; }));
  }
  double max_rel_error() const {
    double worst = 0.0;
    for (const auto& t : tensors) worst = std::max(worst, t.max_rel_error);
    return worst;
  }
};

inline double relative_error(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Central finite difference of a scalar function w.r.t. every entry of x.
template <typename T>
Tensor<T> numeric_gradient(const std::function<double()>& loss, Tensor<T>& x, double step) {
  Tensor<T> grad(x.dims());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const T saved = x[i];
    x[i] = static_cast<T>(saved + step);
    const double plus = loss();
    x[i] = static_cast<T>(saved - step);
    const double minus = loss();
    x[i] = saved;
    grad[i] = static_cast<T>((plus - minus) / (2.0 * step));
  }
  return grad;
}

// Compares the gradients written by `backprop` into each layer's grads
// against central finite differences of `loss`. `backprop` must run the
// forward and backward pass for the same scalar objective; grads are zeroed
// before it is called.
template <typename T>
GradCheckReport gradient_check(const std::vector<LayerParams<T>*>& layers,
                               const std::function<double()>& loss,
                               const std::function<void()>& backprop,
                               const GradCheckOptions& opts = {}) {
  for (auto* layer : layers) layer->zero_grads();
  backprop();

  GradCheckReport report;
  report.tolerance = opts.tolerance;
  for (auto* layer : layers) {
    for (std::size_t i = 0; i < layer->size(); ++i) {
      const Tensor<T> analytic = layer->grads[i];
      const Tensor<T> numeric = numeric_gradient<T>(loss, layer->weights[i], opts.step);
      TensorGradCheck check;
      check.name = layer->full_name(i);
      check.entries = analytic.size();
      for (std::size_t k = 0; k < analytic.size(); ++k) {
        const double a = analytic[k], n = numeric[k];
        const double rel = relative_error(a, n, opts.magnitude_floor);
        if (!(rel <= check.max_rel_error)) {
          check.max_rel_error = std::isnan(rel) ? INFINITY : rel;
          check.worst_index = k;
        }
        check.max_abs_error = std::max(check.max_abs_error, std::abs(a - n));
        check.max_abs_gradient = std::max(check.max_abs_gradient, std::abs(n));
      }
      check.passed = check.max_rel_error < opts.tolerance;
      report.tensors.push_back(std::move(check));
    }
  }
  return report;
}

inline void print_report(std::ostream& os, const GradCheckReport& report) {
  for (const auto& t : report.tensors) {
    os << (t.passed ? "ok   " : "FAIL ") << t.name << " entries=" << t.entries
       << " max_rel_error=" << t.max_rel_error << " max_abs_error=" << t.max_abs_error
       << " max_abs_gradient=" << t.max_abs_gradient << '\n';
  }
  os << (report.passed() ? "PASS" : "FAIL") << " tolerance=" << report.tolerance
     << " worst=" << report.max_rel_error() << '\n';
}

}  // namespace ldwa::nn
