#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldwa/data.hpp"
#include "ldwa/error.hpp"
#include "ldwa/model.hpp"
#include "ldwa/train.hpp"

namespace ldwa {

struct ModelSettings {
  std::size_t filters = 32;
  std::size_t kernel = 8;
  std::size_t hidden = 512;
  // "standard" or "toy"
  std::string classification = "standard";

  friend bool operator==(const ModelSettings&, const ModelSettings&) = default;
};

struct DataSettings {
  std::string aggregate;
  std::string appliance;
  // Common sampling period after alignment; 0 keeps the appliance period.
  std::int64_t period_s = 0;

  friend bool operator==(const DataSettings&, const DataSettings&) = default;
};

struct MetricSettings {
  double threshold_w = 15.0;
  std::size_t period_len_k = 1200;

  friend bool operator==(const MetricSettings&, const MetricSettings&) = default;
};

struct SynthSettings {
  double duration_s = 86400.0;
  std::int64_t period_s = 1;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  double duration_scale = 1.0;

  friend bool operator==(const SynthSettings&, const SynthSettings&) = default;
};

// Everything a command needs besides file paths given on the command line.
struct RunConfig {
  std::vector<ApplianceSpec> appliances;
  std::string target;
  TrainConfig train;
  ModelSettings model;
  std::optional<RegressionGrid> grid;
  DataSettings data;
  MetricSettings metrics;
  SynthSettings synth;

  const ApplianceSpec& target_spec() const {
    if (target.empty()) {
      if (appliances.size() == 1) return appliances.front();
      throw UsageError("config: 'target' must name one of the " +
                       std::to_string(appliances.size()) + " appliances");
    }
    for (const auto& a : appliances) {
      if (a.name == target) return a;
    }
    throw UsageError("config: target appliance '" + target + "' is not listed");
  }

  ClassificationConfig classification_config(std::size_t window_length) const {
    if (model.classification == "standard") return ClassificationConfig::standard(window_length);
    if (model.classification == "toy") return ClassificationConfig::toy(window_length);
    throw UsageError("config: model.classification must be 'standard' or 'toy'");
  }

  RegressionConfig regression_config(std::size_t window_length) const {
    return {window_length, model.filters, model.kernel, model.hidden};
  }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    const bool grids_equal =
        a.grid.has_value() == b.grid.has_value() &&
        (!a.grid || (a.grid->filters == b.grid->filters && a.grid->kernels == b.grid->kernels &&
                     a.grid->hidden == b.grid->hidden));
    return a.appliances == b.appliances && a.target == b.target && a.train == b.train &&
           a.model == b.model && grids_equal && a.data == b.data && a.metrics == b.metrics &&
           a.synth == b.synth;
  }
};

namespace detail {

using Json = nlohmann::json;

class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw UsageError("config: " + where_ + " must be an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) unknown_.insert(it.key());
  }

  template <typename U>
  void get(const char* key, U& out) {
    if (!j_.contains(key)) return;
    unknown_.erase(key);
    try {
      out = j_.at(key).get<U>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError("config: " + where_ + "." + key + " has the wrong type");
    }
  }

  template <typename U>
  void require(const char* key, U& out) {
    if (!j_.contains(key)) throw UsageError("config: " + where_ + "." + key + " is required");
    get(key, out);
  }

  const Json* child(const char* key) {
    if (!j_.contains(key)) return nullptr;
    unknown_.erase(key);
    return &j_.at(key);
  }

  void finish() const {
    if (!unknown_.empty()) {
      throw UsageError("config: unknown key '" + *unknown_.begin() + "' in " + where_);
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> unknown_;
};

inline ApplianceSpec parse_appliance(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  ApplianceSpec spec;
  r.require("name", spec.name);
  spec = default_appliance_spec(spec.name, 0, 0.0);
  r.require("window_L", spec.window_length);
  r.get("on_threshold_w", spec.on_threshold_w);
  r.get("min_on_s", spec.min_on_s);
  r.get("min_off_s", spec.min_off_s);
  r.get("max_power_w", spec.max_power_w);
  r.finish();
  try {
    spec.validate();
  } catch (const DataError& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return spec;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  using detail::ObjectReader;
  RunConfig cfg;
  ObjectReader root(j, "config");
  if (const auto* list = root.child("appliances")) {
    if (!list->is_array()) throw UsageError("config: appliances must be a list");
    for (std::size_t i = 0; i < list->size(); ++i) {
      cfg.appliances.push_back(
          detail::parse_appliance((*list)[i], "appliances[" + std::to_string(i) + "]"));
    }
  }
  root.get("target", cfg.target);
  if (const auto* t = root.child("train")) {
    ObjectReader r(*t, "train");
    r.get("batch_size", cfg.train.batch_size);
    r.get("max_epochs", cfg.train.max_epochs);
    r.get("base_lr", cfg.train.base_lr);
    r.get("momentum", cfg.train.momentum);
    r.get("decay", cfg.train.decay);
    r.get("patience", cfg.train.patience);
    r.get("val_fraction", cfg.train.val_fraction);
    r.get("seed", cfg.train.seed);
    r.get("window_stride", cfg.train.window_stride);
    r.finish();
    try {
      cfg.train.validate();
    } catch (const DomainError& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  if (const auto* m = root.child("model")) {
    ObjectReader r(*m, "model");
    r.get("filters", cfg.model.filters);
    r.get("kernel", cfg.model.kernel);
    r.get("hidden", cfg.model.hidden);
    r.get("classification", cfg.model.classification);
    r.finish();
    if (cfg.model.classification != "standard" && cfg.model.classification != "toy") {
      throw UsageError("config: model.classification must be 'standard' or 'toy'");
    }
  }
  if (const auto* g = root.child("grid")) {
    ObjectReader r(*g, "grid");
    RegressionGrid grid;
    r.require("filters", grid.filters);
    r.require("kernels", grid.kernels);
    r.require("hidden", grid.hidden);
    r.finish();
    cfg.grid = grid;
  }
  if (const auto* d = root.child("data")) {
    ObjectReader r(*d, "data");
    r.get("aggregate", cfg.data.aggregate);
    r.get("appliance", cfg.data.appliance);
    r.get("period_s", cfg.data.period_s);
    r.finish();
  }
  if (const auto* m = root.child("metrics")) {
    ObjectReader r(*m, "metrics");
    r.get("threshold_w", cfg.metrics.threshold_w);
    r.get("period_len_k", cfg.metrics.period_len_k);
    r.finish();
  }
  if (const auto* s = root.child("synth")) {
    ObjectReader r(*s, "synth");
    r.get("duration_s", cfg.synth.duration_s);
    r.get("period_s", cfg.synth.period_s);
    r.get("noise_std", cfg.synth.noise_std);
    r.get("seed", cfg.synth.seed);
    r.get("duration_scale", cfg.synth.duration_scale);
    r.finish();
  }
  root.finish();
  return cfg;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["appliances"] = nlohmann::json::array();
  for (const auto& a : cfg.appliances) {
    j["appliances"].push_back({{"name", a.name},
                               {"window_L", a.window_length},
                               {"on_threshold_w", a.on_threshold_w},
                               {"min_on_s", a.min_on_s},
                               {"min_off_s", a.min_off_s},
                               {"max_power_w", a.max_power_w}});
  }
  j["target"] = cfg.target;
  const auto& t = cfg.train;
  j["train"] = {{"batch_size", t.batch_size}, {"max_epochs", t.max_epochs},
                {"base_lr", t.base_lr},       {"momentum", t.momentum},
                {"decay", t.decay},           {"patience", t.patience},
                {"val_fraction", t.val_fraction}, {"seed", t.seed},
                {"window_stride", t.window_stride}};
  j["model"] = {{"filters", cfg.model.filters},
                {"kernel", cfg.model.kernel},
                {"hidden", cfg.model.hidden},
                {"classification", cfg.model.classification}};
  if (cfg.grid) {
    j["grid"] = {{"filters", cfg.grid->filters},
                 {"kernels", cfg.grid->kernels},
                 {"hidden", cfg.grid->hidden}};
  }
  j["data"] = {{"aggregate", cfg.data.aggregate},
               {"appliance", cfg.data.appliance},
               {"period_s", cfg.data.period_s}};
  j["metrics"] = {{"threshold_w", cfg.metrics.threshold_w},
                  {"period_len_k", cfg.metrics.period_len_k}};
  j["synth"] = {{"duration_s", cfg.synth.duration_s},
                {"period_s", cfg.synth.period_s},
                {"noise_std", cfg.synth.noise_std},
                {"seed", cfg.synth.seed},
                {"duration_scale", cfg.synth.duration_scale}};
  return j;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  return parse_run_config(j);
}

inline void save_run_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace ldwa
