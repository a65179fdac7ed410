#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "ldwa/error.hpp"
#include "ldwa/model.hpp"

namespace ldwa {

// Binary model file, little-endian throughout:
//   "LDWA", u32 version, str appliance,
//   u32 L, F, K, H                      regression config
//   u32 L, u32 n, n x u32 filters, n x u32 kernels, u32 dense
//   u8 has_normalization, 4 x f64 (mean, std, min, max)
//   u32 tensor count, then per tensor: str name, u32 rank, rank x u32 dims,
//   f32 values
// where str is a u32 byte length followed by the bytes.
inline constexpr char kCheckpointMagic[4] = {'L', 'D', 'W', 'A'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

class ByteWriter {
 public:
  template <typename U>
  void put(U value) {
    static_assert(std::is_trivially_copyable_v<U>);
    unsigned char raw[sizeof(U)];
    std::memcpy(raw, &value, sizeof(U));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(U));
    bytes_.insert(bytes_.end(), raw, raw + sizeof(U));
  }
  void u32(std::size_t v) {
    if (v > std::numeric_limits<std::uint32_t>::max()) {
      throw DataError("checkpoint: value " + std::to_string(v) + " does not fit in 32 bits");
    }
    put(static_cast<std::uint32_t>(v));
  }
  void str(const std::string& s) {
    u32(s.size());
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void raw(const char* data, std::size_t n) { bytes_.insert(bytes_.end(), data, data + n); }
  const std::vector<char>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::vector<char>& bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  template <typename U>
  U get() {
    need(sizeof(U));
    unsigned char raw[sizeof(U)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(U));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(U));
    pos_ += sizeof(U);
    U value;
    std::memcpy(&value, raw, sizeof(U));
    return value;
  }
  std::size_t u32() { return get<std::uint32_t>(); }
  std::string str() {
    const std::size_t n = u32();
    need(n);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  void expect_end() const {
    if (pos_ != bytes_.size()) {
      throw DataError(source_ + ": " + std::to_string(bytes_.size() - pos_) +
                      " unexpected trailing bytes");
    }
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw DataError(source_ + ": " + message);
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) fail("truncated checkpoint");
  }

  const std::vector<char>& bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<char> serialize_checkpoint(const LdwaModel<float>& model) {
  detail::ByteWriter w;
  w.raw(kCheckpointMagic, 4);
  w.put(kCheckpointVersion);
  w.str(model.appliance());
  const auto& reg = model.regression_config();
  for (auto v : {reg.window_length, reg.filters, reg.kernel, reg.hidden}) w.u32(v);
  const auto& cls = model.classification_config();
  w.u32(cls.window_length);
  w.u32(cls.filters.size());
  for (auto v : cls.filters) w.u32(v);
  for (auto v : cls.kernels) w.u32(v);
  w.u32(cls.dense_units);
  const NormalizationMeta meta = model.normalization.value_or(NormalizationMeta{});
  w.put(static_cast<std::uint8_t>(model.normalization.has_value()));
  for (double v : {meta.input_mean, meta.input_std, meta.target_min, meta.target_max}) w.put(v);

  const auto layers = model.parameters();
  std::size_t count = 0;
  for (const auto* layer : layers) count += layer->size();
  w.u32(count);
  for (const auto* layer : layers) {
    for (std::size_t i = 0; i < layer->size(); ++i) {
      const Tensor<float>& t = layer->weights[i];
      w.str(layer->full_name(i));
      w.u32(t.rank());
      for (auto d : t.dims()) w.u32(d);
      for (float v : t.values()) w.put(v);
    }
  }
  return w.bytes();
}

inline LdwaModel<float> deserialize_checkpoint(const std::vector<char>& bytes,
                                               const std::string& source = "checkpoint") {
  detail::ByteReader r(bytes, source);
  char magic[4];
  for (char& c : magic) c = r.get<char>();
  if (std::memcmp(magic, kCheckpointMagic, 4) != 0) r.fail("not an LDWA checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    r.fail("unsupported checkpoint version " + std::to_string(version) + " (expected " +
           std::to_string(kCheckpointVersion) + ")");
  }
  const std::string appliance = r.str();
  RegressionConfig reg;
  reg.window_length = r.u32();
  reg.filters = r.u32();
  reg.kernel = r.u32();
  reg.hidden = r.u32();
  ClassificationConfig cls;
  cls.window_length = r.u32();
  const std::size_t layers_n = r.u32();
  if (layers_n > 1024) r.fail("implausible classification depth " + std::to_string(layers_n));
  cls.filters.assign(layers_n, 0);
  cls.kernels.assign(layers_n, 0);
  for (auto& v : cls.filters) v = r.u32();
  for (auto& v : cls.kernels) v = r.u32();
  cls.dense_units = r.u32();
  const bool has_meta = r.get<std::uint8_t>() != 0;
  NormalizationMeta meta;
  meta.input_mean = r.get<double>();
  meta.input_std = r.get<double>();
  meta.target_min = r.get<double>();
  meta.target_max = r.get<double>();

  LdwaModel<float> model = [&] {
    try {
      reg.validate();
      cls.validate();
      return LdwaModel<float>(appliance, reg, cls);
    } catch (const ShapeError& e) {
      r.fail(std::string("invalid model configuration: ") + e.what());
    }
  }();
  if (has_meta) model.normalization = meta;

  const std::size_t count = r.u32();
  std::size_t expected = 0;
  for (auto* layer : model.parameters()) expected += layer->size();
  if (count != expected) {
    r.fail("holds " + std::to_string(count) + " tensors, model expects " + std::to_string(expected));
  }
  for (auto* layer : model.parameters()) {
    for (std::size_t i = 0; i < layer->size(); ++i) {
      Tensor<float>& t = layer->weights[i];
      const std::string name = r.str();
      if (name != layer->full_name(i)) {
        r.fail("expected tensor '" + layer->full_name(i) + "', found '" + name + "'");
      }
      Dims dims(r.u32());
      for (auto& d : dims) d = r.u32();
      if (dims != t.dims()) {
        r.fail("tensor " + name + " has dims " + dims_to_string(dims) + ", expected " +
               dims_to_string(t.dims()));
      }
      for (float& v : t.values()) v = r.get<float>();
    }
  }
  r.expect_end();
  return model;
}

inline void save_checkpoint(const LdwaModel<float>& model, const std::string& path) {
  const auto bytes = serialize_checkpoint(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path);
}

inline LdwaModel<float> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes, path);
}

}  // namespace ldwa
