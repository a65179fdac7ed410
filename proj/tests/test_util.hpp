#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ldwa/tensor.hpp"
#include "oracles.hpp"

namespace testutil {

template <typename T = double>
ldwa::Tensor<T> random_tensor(std::mt19937_64& rng, ldwa::Dims dims, double lo = -1.0,
                              double hi = 1.0) {
  ldwa::Tensor<T> t(std::move(dims));
  std::uniform_real_distribution<double> d(lo, hi);
  for (auto& v : t.values()) v = static_cast<T>(d(rng));
  return t;
}

template <typename T>
void randomize(ldwa::Tensor<T>& t, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  for (auto& v : t.values()) v = static_cast<T>(d(rng));
}

// Sum of upstream * output: a scalar objective whose gradient w.r.t. the
// output is exactly `upstream`.
template <typename T>
double project(const ldwa::Tensor<T>& out, const ldwa::Tensor<T>& upstream) {
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += static_cast<double>(out[i]) * upstream[i];
  return s;
}

inline oracle::Mat to_mat(const ldwa::Tensor<double>& t) {
  oracle::Mat m(t.dim(0), oracle::Vec(t.dim(1)));
  for (std::size_t i = 0; i < t.dim(0); ++i) {
    for (std::size_t j = 0; j < t.dim(1); ++j) m[i][j] = t.at(i, j);
  }
  return m;
}

// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ldwa_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline oracle::Vec to_vec(const ldwa::Tensor<double>& t) { return t.vector(); }

}  // namespace testutil
