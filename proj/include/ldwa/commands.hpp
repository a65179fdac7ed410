#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ldwa/checkpoint.hpp"
#include "ldwa/config.hpp"
#include "ldwa/data.hpp"
#include "ldwa/eval.hpp"
#include "ldwa/nn/gradcheck.hpp"
#include "ldwa/train.hpp"

namespace ldwa {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

// Runs `body` and maps library exceptions to exit codes, printing the
// message to `err`.
template <typename Body>
int run_guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

// "F=16,32:K=4,8:H=256" -> grid. Every axis must be present.
inline RegressionGrid parse_grid(const std::string& text) {
  RegressionGrid grid;
  std::stringstream axes(text);
  std::string axis;
  while (std::getline(axes, axis, ':')) {
    const auto eq = axis.find('=');
    if (eq == std::string::npos) throw UsageError("--grid: expected AXIS=v1,v2,... in '" + axis + "'");
    const std::string name = axis.substr(0, eq);
    std::vector<std::size_t>* target = name == "F"   ? &grid.filters
                                       : name == "K" ? &grid.kernels
                                       : name == "H" ? &grid.hidden
                                                     : nullptr;
    if (!target) throw UsageError("--grid: unknown axis '" + name + "' (use F, K, H)");
    std::stringstream values(axis.substr(eq + 1));
    std::string v;
    while (std::getline(values, v, ',')) {
      std::size_t n = 0;
      if (!detail::parse_number(v, n) || n == 0) {
        throw UsageError("--grid: bad value '" + v + "' for axis " + name);
      }
      target->push_back(n);
    }
  }
  if (grid.filters.empty() || grid.kernels.empty() || grid.hidden.empty()) {
    throw UsageError("--grid: F, K and H must each list at least one value");
  }
  return grid;
}

// ---------------------------------------------------------------------------
// train

struct TrainCommand {
  std::string config;
  std::string aggregate;  // overrides data.aggregate
  std::string appliance;  // overrides data.appliance
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
};

inline int cmd_train(const TrainCommand& cmd, std::ostream& out = std::cout,
                     std::ostream& err = std::cerr) {
  return run_guarded(err, [&] {
    if (cmd.config.empty()) throw UsageError("train: --config is required");
    if (cmd.out.empty()) throw UsageError("train: --out is required");
    RunConfig cfg = load_run_config(cmd.config);
    if (cmd.seed) cfg.train.seed = *cmd.seed;
    if (cmd.grid) cfg.grid = parse_grid(*cmd.grid);
    const std::string agg_path = cmd.aggregate.empty() ? cfg.data.aggregate : cmd.aggregate;
    const std::string app_path = cmd.appliance.empty() ? cfg.data.appliance : cmd.appliance;
    if (agg_path.empty() || app_path.empty()) {
      throw UsageError("train: aggregate and appliance CSV paths are required");
    }
    const ApplianceSpec& spec = cfg.target_spec();

    const PowerSeries aggregate = load_channel_csv(agg_path);
    const PowerSeries appliance = load_channel_csv(app_path);
    const std::int64_t period = cfg.data.period_s > 0 ? cfg.data.period_s : appliance.period_s;
    const auto segments = align_pair(aggregate, appliance, period);
    const WindowSet windows = windows_from_segments(segments, spec);
    const auto [train_set, val_set] = split_train_val(windows, cfg.train.val_fraction);
    if (train_set.empty()) {
      throw DataError("train: no training windows of length " + std::to_string(spec.window_length));
    }
    const NormalizationMeta meta = fit_normalization(train_set);
    out << "windows: train=" << train_set.size() << " val=" << val_set.size()
        << " stride=" << cfg.train.window_stride << '\n';

    const ClassificationConfig cls = cfg.classification_config(spec.window_length);
    LdwaModel<float> model;
    TrainRecord record;
    if (cfg.grid) {
      auto result = grid_search<float>(spec.name, cls, meta, train_set, val_set, *cfg.grid,
                                       cfg.train, &out);
      std::ofstream board(cmd.out + ".grid.csv", std::ios::binary);
      board << "rank,filters,kernel,hidden,best_val_loss,parameter_count\n";
      for (std::size_t i = 0; i < result.leaderboard.size(); ++i) {
        const auto& e = result.leaderboard[i];
        board << i + 1 << ',' << e.config.filters << ',' << e.config.kernel << ','
              << e.config.hidden << ',' << detail::format_double(e.best_val_loss) << ','
              << e.parameter_count << '\n';
      }
      record = result.leaderboard.front().record;
      model = std::move(result.best_model);
    } else {
      const RegressionConfig reg = cfg.regression_config(spec.window_length);
      reg.validate();
      model = LdwaModel<float>(spec.name, reg, cls);
      model.initialize(cfg.train.seed);
      model.normalization = meta;
      record = train(model, train_set, val_set, cfg.train, &out);
    }
    save_checkpoint(model, cmd.out);
    write_train_record_csv(record, cmd.out + ".record.csv");
    out << "best_epoch=" << record.best_epoch
        << " best_val_loss=" << detail::format_double(record.best_val_loss)
        << " stop=" << to_string(record.stop_reason) << '\n';
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// disaggregate

struct DisaggregateCommand {
  std::string checkpoint;
  std::string aggregate;
  std::string out;
  bool export_attention = false;
};

inline std::string attention_path(const std::string& out) { return out + ".attention.csv"; }

inline int cmd_disaggregate(const DisaggregateCommand& cmd, std::ostream& out = std::cout,
                            std::ostream& err = std::cerr) {
  return run_guarded(err, [&] {
    if (cmd.checkpoint.empty() || cmd.aggregate.empty() || cmd.out.empty()) {
      throw UsageError("disaggregate: --checkpoint, --aggregate and --out are required");
    }
    const LdwaModel<float> model = load_checkpoint(cmd.checkpoint);
    const PowerSeries aggregate = load_channel_csv(cmd.aggregate);
    DisaggregateOptions<float> options;
    std::ofstream attention;
    if (cmd.export_attention) {
      attention.open(attention_path(cmd.out), std::ios::binary);
      if (!attention) throw DataError("cannot write " + attention_path(cmd.out));
      attention << "window_start";
      for (std::size_t t = 0; t < model.window_length(); ++t) attention << ",alpha_" << t;
      attention << '\n';
      options.attention_sink = [&](std::size_t start, std::span<const float> alpha) {
        char buf[32];
        attention << start;
        for (float a : alpha) {
          const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), a);
          attention << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        attention << '\n';
      };
    }
    const PowerSeries prediction = disaggregate(model, aggregate, options);
    write_channel_csv(prediction, cmd.out);
    if (attention.is_open() && !attention.flush()) {
      throw DataError("write failed for " + attention_path(cmd.out));
    }
    out << "wrote " << prediction.size() << " samples to " << cmd.out << '\n';
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateCommand {
  std::string prediction;
  std::string ground_truth;
  std::string appliance = "appliance";
  std::string config;  // optional; supplies metric settings and the target name
  std::optional<double> threshold_w;
  std::optional<std::size_t> period_k;
  std::string out;  // results CSV; empty writes only to `out`
};

inline int cmd_evaluate(const EvaluateCommand& cmd, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  return run_guarded(err, [&] {
    if (cmd.prediction.empty() || cmd.ground_truth.empty()) {
      throw UsageError("evaluate: --prediction and --ground-truth are required");
    }
    MetricSettings metrics;
    std::string name = cmd.appliance;
    if (!cmd.config.empty()) {
      const RunConfig cfg = load_run_config(cmd.config);
      metrics = cfg.metrics;
      if (!cfg.appliances.empty()) name = cfg.target_spec().name;
    }
    if (cmd.threshold_w) metrics.threshold_w = *cmd.threshold_w;
    if (cmd.period_k) metrics.period_len_k = *cmd.period_k;
    if (!(metrics.threshold_w >= 0.0)) throw UsageError("evaluate: threshold must be >= 0");

    const PowerSeries pred = load_channel_csv(cmd.prediction);
    const PowerSeries truth = load_channel_csv(cmd.ground_truth);
    if (pred.size() != truth.size()) {
      throw DataError("evaluate: prediction has " + std::to_string(pred.size()) +
                      " samples, ground truth " + std::to_string(truth.size()));
    }
    if (pred.t0 != truth.t0 || pred.period_s != truth.period_s) {
      throw DataError("evaluate: prediction and ground truth are on different time grids");
    }
    const EvalReport report =
        evaluate(name, truth.values, pred.values, metrics.threshold_w, metrics.period_len_k);
    if (report.sae_dropped_samples > 0) {
      warn("sae: dropped " + std::to_string(report.sae_dropped_samples) +
           " trailing samples of a partial period");
    }
    const std::vector<EvalReport> reports{report};
    if (!cmd.out.empty()) write_eval_csv(reports, cmd.out);
    out << "appliance=" << report.appliance << " mae_w=" << detail::format_double(report.mae_w)
        << " sae_w=" << detail::format_double(report.sae_w)
        << " precision=" << detail::format_double(report.precision)
        << " recall=" << detail::format_double(report.recall)
        << " f1=" << detail::format_double(report.f1) << " tp=" << report.tp
        << " fp=" << report.fp << " fn=" << report.fn << '\n';
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// synth

struct SynthCommand {
  std::string config;  // appliance list plus synth settings
  std::optional<double> duration_s;
  std::optional<double> noise_std;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_scale;
  std::string out_dir;
};

// Writes aggregate.csv and one <appliance>.csv per appliance.
inline int cmd_synth(const SynthCommand& cmd, std::ostream& out = std::cout,
                     std::ostream& err = std::cerr) {
  return run_guarded(err, [&] {
    if (cmd.config.empty() || cmd.out_dir.empty()) {
      throw UsageError("synth: --config and --out are required");
    }
    const RunConfig cfg = load_run_config(cmd.config);
    SynthOptions opt{cfg.synth.duration_s, cfg.synth.period_s, cfg.synth.noise_std,
                     cfg.synth.seed, cfg.synth.duration_scale};
    if (cmd.duration_s) opt.duration_s = *cmd.duration_s;
    if (cmd.noise_std) opt.noise_std = *cmd.noise_std;
    if (cmd.seed) opt.seed = *cmd.seed;
    if (cmd.duration_scale) opt.duration_scale = *cmd.duration_scale;
    const Household house = synth_household(cfg.appliances, opt);
    std::filesystem::create_directories(cmd.out_dir);
    const std::filesystem::path dir(cmd.out_dir);
    write_channel_csv(house.aggregate, (dir / "aggregate.csv").string());
    for (const auto& a : house.appliances) write_channel_csv(a, (dir / (a.name + ".csv")).string());
    out << "wrote " << house.appliances.size() + 1 << " channels of " << house.aggregate.size()
        << " samples to " << cmd.out_dir << '\n';
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// gradcheck

struct GradcheckCommand {
  std::size_t window_length = 16;
  std::size_t filters = 2;
  std::size_t kernel = 4;
  std::size_t hidden = 3;
  bool standard_classification = false;
  std::size_t batch = 2;
  std::uint64_t seed = 0;
  double tolerance = 1e-4;
  // Adds 1 to one analytic gradient entry to show that faults are caught.
  bool inject_fault = false;
};

inline int cmd_gradcheck(const GradcheckCommand& cmd, std::ostream& out = std::cout,
                         std::ostream& err = std::cerr) {
  return run_guarded(err, [&] {
    const std::size_t L = cmd.window_length;
    const RegressionConfig reg{L, cmd.filters, cmd.kernel, cmd.hidden};
    reg.validate();
    if (cmd.batch == 0) throw UsageError("gradcheck: batch must be >= 1");
    LdwaModel<double> model(
        "gradcheck", reg,
        cmd.standard_classification ? ClassificationConfig::standard(L) : ClassificationConfig::toy(L));
    model.initialize(cmd.seed);
    std::mt19937_64 rng(cmd.seed + 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    // Small positive biases keep ReLU units active so that no tensor is
    // checked against an all-zero gradient.
    std::uniform_real_distribution<double> positive(0.05, 0.3);
    for (auto* layer : model.parameters()) {
      for (std::size_t i = 0; i < layer->size(); ++i) {
        if (layer->names[i] == "bias") {
          for (auto& v : layer->weights[i].values()) v = positive(rng);
        } else if (layer->names[i] == "b_a") {
          for (auto& v : layer->weights[i].values()) v = 0.1 * unit(rng);
        }
      }
    }
    Tensor<double> x({cmd.batch, L}), power({cmd.batch, L}), state({cmd.batch, L});
    for (auto& v : x.values()) v = unit(rng);
    for (std::size_t i = 0; i < power.size(); ++i) {
      power[i] = 0.5 * (unit(rng) + 1.0);
      state[i] = power[i] > 0.5 ? 1.0 : 0.0;
    }
    auto loss = [&] {
      return static_cast<double>(model.joint_loss(model.forward(x), power, state).loss);
    };
    auto layers = model.parameters();
    const auto report = nn::gradient_check<double>(
        layers, loss,
        [&] {
          LdwaTrace<double> trace;
          const auto o = model.forward(x, trace);
          const auto l = model.joint_loss(o, power, state);
          model.backward(trace, l.grad_p_hat, l.grad_s_hat);
          if (cmd.inject_fault) layers.front()->grads.front()[0] += 1.0;
        },
        {.step = 1e-5, .tolerance = cmd.tolerance, .magnitude_floor = 1e-6});
    nn::print_report(out, report);
    if (const std::size_t vacuous = report.vacuous_count(); vacuous > 0) {
      out << "FAIL " << vacuous << " tensors have an all-zero gradient; try another --seed\n";
      return static_cast<int>(kExitNumerical);
    }
    return static_cast<int>(report.passed() ? kExitOk : kExitNumerical);
  });
}

}  // namespace ldwa
