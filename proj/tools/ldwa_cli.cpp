#include <iostream>

#include <CLI11.hpp>

#include "ldwa/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ldwa: appliance-level load disaggregation with attention"};
  app.require_subcommand(1);

  ldwa::TrainCommand train;
  std::uint64_t train_seed = 0;
  std::string grid;
  auto* train_cmd = app.add_subcommand("train", "train one appliance model");
  train_cmd->add_option("--config", train.config, "run configuration (JSON)")->required();
  train_cmd->add_option("--aggregate", train.aggregate, "aggregate channel CSV");
  train_cmd->add_option("--appliance", train.appliance, "appliance channel CSV");
  train_cmd->add_option("--out", train.out, "checkpoint path")->required();
  auto* seed_opt = train_cmd->add_option("--seed", train_seed, "override train.seed");
  auto* grid_opt = train_cmd->add_option("--grid", grid, "grid search, e.g. F=16,32:K=4,8:H=256");

  ldwa::DisaggregateCommand disagg;
  auto* disagg_cmd = app.add_subcommand("disaggregate", "estimate appliance power");
  disagg_cmd->add_option("--checkpoint", disagg.checkpoint, "trained model")->required();
  disagg_cmd->add_option("--aggregate", disagg.aggregate, "aggregate channel CSV")->required();
  disagg_cmd->add_option("--out", disagg.out, "predicted channel CSV")->required();
  disagg_cmd->add_flag("--export-attention", disagg.export_attention,
                       "also write <out>.attention.csv");

  ldwa::EvaluateCommand eval;
  double threshold = 0.0;
  std::size_t period_k = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a prediction against ground truth");
  eval_cmd->add_option("--prediction", eval.prediction, "predicted channel CSV")->required();
  eval_cmd->add_option("--ground-truth", eval.ground_truth, "true channel CSV")->required();
  eval_cmd->add_option("--appliance", eval.appliance, "name used in the report");
  eval_cmd->add_option("--config", eval.config, "run configuration for metric settings");
  auto* threshold_opt = eval_cmd->add_option("--threshold-w", threshold, "on/off threshold in W");
  auto* period_opt = eval_cmd->add_option("--period-k", period_k, "SAE period in samples");
  eval_cmd->add_option("--out", eval.out, "results CSV");

  ldwa::SynthCommand synth;
  double duration = 0.0, noise = 0.0, scale = 1.0;
  std::uint64_t synth_seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic household");
  synth_cmd->add_option("--config", synth.config, "appliance list and synth settings")->required();
  auto* duration_opt = synth_cmd->add_option("--duration", duration, "seconds");
  auto* noise_opt = synth_cmd->add_option("--noise", noise, "noise standard deviation in W");
  auto* synth_seed_opt = synth_cmd->add_option("--seed", synth_seed, "generator seed");
  auto* scale_opt = synth_cmd->add_option("--duration-scale", scale, "activation length factor");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();

  ldwa::GradcheckCommand gc;
  auto* gc_cmd = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gc_cmd->add_option("--L", gc.window_length, "window length")->capture_default_str();
  gc_cmd->add_option("--F", gc.filters, "regression filters")->capture_default_str();
  gc_cmd->add_option("--K", gc.kernel, "regression kernel")->capture_default_str();
  gc_cmd->add_option("--H", gc.hidden, "hidden units")->capture_default_str();
  gc_cmd->add_flag("--standard-classification", gc.standard_classification,
                   "use the full classification table instead of the toy one");
  gc_cmd->add_option("--seed", gc.seed, "model seed")->capture_default_str();
  gc_cmd->add_option("--tolerance", gc.tolerance, "max relative error")->capture_default_str();
  gc_cmd->add_flag("--inject-fault", gc.inject_fault, "corrupt one analytic gradient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ldwa::kExitOk : ldwa::kExitUsage;
  }

  if (*train_cmd) {
    if (*seed_opt) train.seed = train_seed;
    if (*grid_opt) train.grid = grid;
    return ldwa::cmd_train(train);
  }
  if (*disagg_cmd) return ldwa::cmd_disaggregate(disagg);
  if (*eval_cmd) {
    if (*threshold_opt) eval.threshold_w = threshold;
    if (*period_opt) eval.period_k = period_k;
    return ldwa::cmd_evaluate(eval);
  }
  if (*synth_cmd) {
    if (*duration_opt) synth.duration_s = duration;
    if (*noise_opt) synth.noise_std = noise;
    if (*synth_seed_opt) synth.seed = synth_seed;
    if (*scale_opt) synth.duration_scale = scale;
    return ldwa::cmd_synth(synth);
  }
  return ldwa::cmd_gradcheck(gc);
}
