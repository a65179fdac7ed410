#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <new>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ldwa/error.hpp"

namespace ldwa {

using Dims = std::vector<std::size_t>;

inline std::string dims_to_string(const Dims& dims) {
  std::ostringstream oss;
  oss << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) oss << 'x';
    oss << dims[i];
  }
  oss << ']';
  return oss.str();
}

inline std::size_t dims_product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

// Cache-line aligned storage. Vectorized kernels take different code paths
// for differently aligned buffers, so a fixed alignment keeps results
// bit-reproducible between runs.
template <typename T, std::size_t Align = 64>
struct AlignedAllocator {
  using value_type = T;
  template <typename U>
  struct rebind {
    using other = AlignedAllocator<U, Align>;
  };

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U, Align>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{Align}));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{Align}); }

  template <typename U>
  bool operator==(const AlignedAllocator<U, Align>&) const noexcept {
    return true;
  }
};

// Dense row-major n-dimensional array. The product of dims always equals
// the number of stored values.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;

  explicit Tensor(Dims dims, T fill = T(0))
      : dims_(std::move(dims)), data_(checked_size(dims_), fill) {}

  Tensor(Dims dims, const std::vector<T>& data)
      : dims_(std::move(dims)), data_(data.begin(), data.end()) {
    if (checked_size(dims_) != data_.size()) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match dims " + dims_to_string(dims_));
    }
  }

  Tensor(std::initializer_list<std::size_t> dims, std::initializer_list<T> data)
      : Tensor(Dims(dims), std::vector<T>(data)) {}

  const Dims& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  std::vector<T> vector() const { return std::vector<T>(data_.begin(), data_.end()); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& at(std::size_t i, std::size_t j) { return data_[i * dims_[1] + j]; }
  const T& at(std::size_t i, std::size_t j) const { return data_[i * dims_[1] + j]; }
  T& at(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  // Same storage, new dims of equal total size.
  Tensor reshaped(Dims dims) const& {
    Tensor out = *this;
    out.reshape(std::move(dims));
    return out;
  }
  Tensor reshaped(Dims dims) && {
    reshape(std::move(dims));
    return std::move(*this);
  }
  void reshape(Dims dims) {
    if (dims_product(dims) != data_.size()) {
      throw ShapeError("cannot reshape " + dims_to_string(dims_) + " to " + dims_to_string(dims));
    }
    dims_ = std::move(dims);
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
  }

  template <typename U>
  Tensor<U> cast() const {
    return Tensor<U>(dims_, std::vector<U>(data_.begin(), data_.end()));
  }

  friend bool operator==(const Tensor& a, const Tensor& b) = default;

 private:
  static std::size_t checked_size(const Dims& dims) {
    for (std::size_t d : dims) {
      if (d == 0) throw ShapeError("tensor dims must be positive, got " + dims_to_string(dims));
    }
    return dims_product(dims);
  }

  Dims dims_;
  std::vector<T, AlignedAllocator<T>> data_;
};

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const RowMatrix<T>>;
template <typename T>
using VectorMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <typename T>
using ConstVectorMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

// Views a contiguous tensor as a rows x cols row-major matrix.
template <typename T>
MatrixMap<T> as_matrix(Tensor<T>& t, std::size_t rows, std::size_t cols) {
  if (rows * cols != t.size()) {
    throw ShapeError("matrix view " + std::to_string(rows) + "x" + std::to_string(cols) +
                     " of tensor " + dims_to_string(t.dims()));
  }
  return MatrixMap<T>(t.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

template <typename T>
ConstMatrixMap<T> as_matrix(const Tensor<T>& t, std::size_t rows, std::size_t cols) {
  if (rows * cols != t.size()) {
    throw ShapeError("matrix view " + std::to_string(rows) + "x" + std::to_string(cols) +
                     " of tensor " + dims_to_string(t.dims()));
  }
  return ConstMatrixMap<T>(t.data(), static_cast<Eigen::Index>(rows),
                           static_cast<Eigen::Index>(cols));
}

template <typename T>
VectorMap<T> as_vector(Tensor<T>& t) {
  return VectorMap<T>(t.data(), static_cast<Eigen::Index>(t.size()));
}

template <typename T>
ConstVectorMap<T> as_vector(const Tensor<T>& t) {
  return ConstVectorMap<T>(t.data(), static_cast<Eigen::Index>(t.size()));
}

inline void expect_dims(const Dims& actual, const Dims& expected, const std::string& what) {
  if (actual != expected) {
    throw ShapeError(what + ": expected " + dims_to_string(expected) + ", got " +
                     dims_to_string(actual));
  }
}

}  // namespace ldwa
