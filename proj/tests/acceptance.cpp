// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ldwa/ldwa.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using ldwa::Tensor;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

int run_shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

Outcome gradient_correctness(const testutil::TempDir& dir) {
  const auto start = Clock::now();
  const std::string log = dir.file("gradcheck.txt");
  const int code = run_shell(std::string(LDWA_CLI_PATH) +
                             " gradcheck --L 16 --F 2 --K 4 --H 3 --tolerance 1e-4 > " + log + " 2>&1");
  const double elapsed = seconds_since(start);
  const std::string text = testutil::read_text(log);
  const auto tensors = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
  const auto worst = text.find("worst=");
  return {code == 0 && elapsed < 60.0,
          "exit=" + std::to_string(code) + " tensors=" + std::to_string(tensors) + " " +
              (worst == std::string::npos ? std::string("?") : text.substr(worst, text.find('\n', worst) - worst)) +
              " time=" + fmt(elapsed) + "s"};
}

Outcome kernel_oracles() {
  const auto start = Clock::now();
  double worst = 0.0;
  auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
  const int seeds = 25;
  for (int seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    {
      const std::size_t cin = 1 + rng() % 3, filters = 1 + rng() % 4, k = 1 + rng() % 6, len = 4 + rng() % 9;
      const bool relu = seed % 2 == 1;
      ldwa::nn::Conv1d<double> conv("c", cin, filters, k,
                                    relu ? ldwa::nn::Activation::kRelu : ldwa::nn::Activation::kLinear);
      testutil::randomize(conv.weight(), rng);
      testutil::randomize(conv.bias(), rng);
      const auto x = testutil::random_tensor(rng, {cin, len});
      ldwa::nn::Conv1dCache<double> cache;
      const auto out = conv.forward(x, cache);
      std::vector<oracle::Mat> w(filters, oracle::Mat(cin, oracle::Vec(k)));
      for (std::size_t f = 0; f < filters; ++f)
        for (std::size_t c = 0; c < cin; ++c)
          for (std::size_t j = 0; j < k; ++j) w[f][c][j] = conv.weight().at(f, c, j);
      const auto ref = oracle::conv1d(testutil::to_mat(x), w, conv.bias().vector(), relu);
      for (std::size_t f = 0; f < filters; ++f)
        for (std::size_t t = 0; t < len; ++t) track(out.at(f, t), ref[f][t]);
    }
    {
      const std::size_t n = 1 + rng() % 8, m = 1 + rng() % 8;
      const int act = seed % 4;
      const ldwa::nn::Activation acts[] = {ldwa::nn::Activation::kLinear, ldwa::nn::Activation::kRelu,
                                           ldwa::nn::Activation::kSigmoid, ldwa::nn::Activation::kTanh};
      ldwa::nn::Dense<double> dense("d", n, m, acts[act]);
      testutil::randomize(dense.weight(), rng);
      testutil::randomize(dense.bias(), rng);
      const auto x = testutil::random_tensor(rng, {n});
      ldwa::nn::DenseCache<double> cache;
      const auto out = dense.forward(x, cache);
      const auto ref = oracle::dense(testutil::to_mat(dense.weight()), dense.bias().vector(), x.vector(), act);
      for (std::size_t i = 0; i < m; ++i) track(out[i], ref[i]);
    }
    const std::size_t d = 1 + rng() % 3, h = 1 + rng() % 4;
    auto weights_of = [](ldwa::nn::Lstm<double>& l) {
      return oracle::LstmWeights{testutil::to_mat(l.w_input()), testutil::to_mat(l.w_hidden()),
                                 l.bias().vector()};
    };
    {
      ldwa::nn::Lstm<double> lstm("l", d, h);
      for (auto& w : lstm.params().weights) testutil::randomize(w, rng);
      const auto x = testutil::random_tensor(rng, {d});
      const auto h0 = testutil::random_tensor(rng, {h});
      const auto c0 = testutil::random_tensor(rng, {h});
      ldwa::nn::LstmStepCache<double> cache;
      const auto [h1, c1] = lstm.step(x, h0, c0, cache);
      oracle::Vec rh = h0.vector(), rc = c0.vector();
      oracle::lstm_step(weights_of(lstm), x.vector(), rh, rc);
      for (std::size_t j = 0; j < h; ++j) {
        track(h1[j], rh[j]);
        track(c1[j], rc[j]);
      }
    }
    {
      const std::size_t steps = 1 + rng() % 3;
      ldwa::nn::BiLstm<double> bi("b", d, h);
      for (auto* l : {&bi.forward_direction(), &bi.backward_direction()})
        for (auto& w : l->params().weights) testutil::randomize(w, rng);
      const auto x = testutil::random_tensor(rng, {steps, d});
      ldwa::nn::BiLstmCache<double> cache;
      const auto out = bi.forward(x, cache);
      const auto ref = oracle::bilstm(weights_of(bi.forward_direction()),
                                      weights_of(bi.backward_direction()), testutil::to_mat(x), h);
      for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t j = 0; j < 2 * h; ++j) track(out.at(t, j), ref[t][j]);
    }
    {
      const std::size_t steps = 1 + rng() % 10;
      ldwa::nn::Attention<double> att("a", 2 * h, h);
      for (auto& w : att.params().weights) testutil::randomize(w, rng);
      const auto hidden = testutil::random_tensor(rng, {steps, 2 * h});
      ldwa::nn::AttentionCache<double> cache;
      const auto out = att.forward(hidden, cache);
      const auto hm = testutil::to_mat(hidden);
      const auto wm = testutil::to_mat(att.w());
      const auto ref = oracle::attention(hm, wm, att.b().vector(), att.v().vector());
      oracle::Vec scores(steps, 0.0);
      for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t u = 0; u < h; ++u) {
          double z = att.b()[u];
          for (std::size_t k = 0; k < 2 * h; ++k) z += wm[u][k] * hm[t][k];
          scores[t] += att.v()[u] * std::tanh(z);
        }
      const auto alpha = oracle::softmax(scores);
      for (std::size_t t = 0; t < steps; ++t) track(out.alpha[t], alpha[t]);
      for (std::size_t k = 0; k < 2 * h; ++k) track(out.context[k], ref.context[k]);
    }
    {
      const std::size_t n = 1 + rng() % 20;
      const auto p = testutil::random_tensor(rng, {n}, 0.0, 1.0);
      const auto y = testutil::random_tensor(rng, {n}, -1.0, 2.0);
      Tensor<double> s({n});
      for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<double>(rng() % 2);
      track(ldwa::nn::mse_loss(p, y).loss, oracle::mse(p.vector(), y.vector()));
      track(ldwa::nn::bce_loss(p, s).loss, oracle::bce(p.vector(), s.vector()));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-10 && elapsed < 30.0,
          "seeds=" + std::to_string(seeds) + " max|delta|=" + fmt(worst, 3) + " time=" + fmt(elapsed) + "s"};
}

Outcome attention_invariants() {
  double worst_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t L = 8 + rng() % 40;
    ldwa::LdwaModel<float> m("a", {L, 1 + rng() % 4, 1 + rng() % 6, 1 + rng() % 6},
                             ldwa::ClassificationConfig::toy(L));
    m.initialize(seed);
    const auto x = testutil::random_tensor<float>(rng, {3, L}, -3.0, 3.0);
    const auto alpha = m.forward_regression(x).alpha;
    for (std::size_t b = 0; b < 3; ++b) {
      double total = 0.0;
      for (std::size_t t = 0; t < L; ++t) total += alpha.at(b, t);
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    }
  }
  bool single_ok = true, uniform_ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed + 1000);
    ldwa::nn::Attention<double> att("a", 6, 3);
    for (auto& w : att.params().weights) testutil::randomize(w, rng, 2.0);
    ldwa::nn::AttentionCache<double> cache;
    const auto h1 = testutil::random_tensor(rng, {1, 6});
    const auto one = att.forward(h1, cache);
    for (std::size_t k = 0; k < 6; ++k) single_ok = single_ok && one.context[k] == h1[k];
    Tensor<double> same({9, 6});
    const auto row = testutil::random_tensor(rng, {6});
    for (std::size_t t = 0; t < 9; ++t)
      for (std::size_t k = 0; k < 6; ++k) same.at(t, k) = row[k];
    const auto flat = att.forward(same, cache);
    for (std::size_t t = 0; t < 9; ++t) uniform_ok = uniform_ok && std::abs(flat.alpha[t] - 1.0 / 9.0) < 1e-15;
  }
  return {worst_sum <= 1e-6 && single_ok && uniform_ok,
          "max|sum-1|(f32)=" + fmt(worst_sum, 3) + " T=1 exact=" + (single_ok ? "yes" : "no") +
              " identical rows uniform=" + (uniform_ok ? "yes" : "no")};
}

template <typename T>
bool gate_is_exact(const ldwa::LdwaOutput<T>& out) {
  for (std::size_t i = 0; i < out.y_hat.size(); ++i) {
    const T expected = out.p_hat[i] * out.s_hat[i];
    if (std::memcmp(&expected, &out.y_hat[i], sizeof(T)) != 0) return false;
  }
  return true;
}

Outcome gating() {
  std::size_t forwards = 0, exact = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t L = 8 + rng() % 24;
    const ldwa::RegressionConfig reg{L, 1 + rng() % 4, 1 + rng() % 6, 1 + rng() % 6};
    ldwa::LdwaModel<float> mf("g", reg, ldwa::ClassificationConfig::toy(L));
    ldwa::LdwaModel<double> md("g", reg, ldwa::ClassificationConfig::toy(L));
    mf.initialize(seed);
    md.initialize(seed);
    const auto xd = testutil::random_tensor<double>(rng, {4, L}, -3.0, 3.0);
    exact += gate_is_exact(mf.forward(xd.cast<float>()));
    exact += gate_is_exact(md.forward(xd));
    const Tensor<float> single({L}, std::vector<float>(xd.values().begin(), xd.values().begin() + static_cast<std::ptrdiff_t>(L)));
    exact += gate_is_exact(mf.forward(single));
    forwards += 3;
  }
  return {exact == forwards, std::to_string(exact) + "/" + std::to_string(forwards) + " forwards bit-exact"};
}

Outcome metric_identities() {
  std::mt19937_64 rng(5);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t T = 1 + rng() % 400, K = 1 + rng() % 50;
    const auto y = oracle::random_vec(rng, T, 0.0, 80.0);
    const auto y_hat = oracle::random_vec(rng, T, 0.0, 80.0);
    ok = ok && ldwa::sae(y, y_hat, 1).value == ldwa::mae(y, y_hat);
    double abs_sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) abs_sum += std::abs(y[t] - y_hat[t]);
    worst = std::max(worst, std::abs(ldwa::mae(y, y_hat) - abs_sum / static_cast<double>(T)));
    if (K <= T) {
      double total = 0.0;
      for (std::size_t n = 0; n < T / K; ++n) {
        double r = 0.0, r_hat = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          r += y[n * K + k];
          r_hat += y_hat[n * K + k];
        }
        total += std::abs(r - r_hat) / static_cast<double>(K);
      }
      worst = std::max(worst, std::abs(ldwa::sae(y, y_hat, K).value - total / static_cast<double>(T / K)));
    }
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t t = 0; t < T; ++t) {
      tp += y[t] > 15 && y_hat[t] > 15;
      fp += y[t] <= 15 && y_hat[t] > 15;
      fn += y[t] > 15 && y_hat[t] <= 15;
    }
    const double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
    const double r = tp + fn ? double(tp) / double(tp + fn) : 0.0;
    const double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    const auto s = ldwa::classification_scores(y, y_hat, 15.0);
    ok = ok && s.tp == tp && s.fp == fp && s.fn == fn;
    worst = std::max({worst, std::abs(s.precision - p), std::abs(s.recall - r), std::abs(s.f1 - f1)});
  }
  const std::vector<double> truth{0, 50, 60, 0}, off(4, 0.0);
  const auto none = ldwa::classification_scores(truth, off);
  const auto empty = ldwa::classification_scores(off, off);
  const bool conventions = none.precision == 0 && none.f1 == 0 && none.tp == 0 &&
                           empty.precision == 0 && empty.recall == 0 && empty.f1 == 0;
  ok = ok && worst < 1e-9 && conventions;
  return {ok, "100 pairs, max|delta| vs oracles=" + fmt(worst, 3) +
                  " zero-denominator conventions=" + (conventions ? "hold" : "broken")};
}

Outcome median_reconstruction() {
  std::mt19937_64 rng(6);
  std::size_t exact = 0, even_positions = 0, even_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t T = 2 + rng() % 199, L = 1 + rng() % std::min<std::size_t>(32, T);
    const auto signal = oracle::random_vec(rng, T, 0.0, 500.0);
    std::vector<std::vector<double>> slices, noisy;
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + L <= T; ++s) {
      slices.emplace_back(signal.begin() + static_cast<std::ptrdiff_t>(s),
                          signal.begin() + static_cast<std::ptrdiff_t>(s + L));
      noisy.push_back(oracle::random_vec(rng, L, 0.0, 500.0));
      starts.push_back(s);
    }
    exact += ldwa::reconstruct_median(slices, starts, T) == signal;
    const auto rec = ldwa::reconstruct_median(noisy, starts, T);
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<double> covering;
      for (std::size_t w = 0; w < starts.size(); ++w)
        if (starts[w] <= t && t < starts[w] + L) covering.push_back(noisy[w][t - starts[w]]);
      if (covering.size() % 2 != 0) continue;
      std::sort(covering.begin(), covering.end());
      const std::size_t n = covering.size();
      ++even_positions;
      even_ok += rec[t] == 0.5 * (covering[n / 2 - 1] + covering[n / 2]);
    }
  }
  return {exact == 100 && even_ok == even_positions && even_positions > 0,
          std::to_string(exact) + "/100 signals exact, " + std::to_string(even_ok) + "/" +
              std::to_string(even_positions) + " even-coverage positions match"};
}

Outcome checkpoint_round_trip(const testutil::TempDir& dir) {
  std::size_t identical = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed + 77);
    const std::size_t L = 8 + rng() % 56;
    ldwa::LdwaModel<float> m("m" + std::to_string(seed), {L, 1 + rng() % 8, 1 + rng() % 8, 1 + rng() % 16},
                             seed % 3 == 0 ? ldwa::ClassificationConfig::standard(L)
                                           : ldwa::ClassificationConfig::toy(L));
    m.initialize(seed);
    m.normalization = ldwa::NormalizationMeta{static_cast<double>(rng() % 500), 1.0 + static_cast<double>(rng() % 100),
                                              0.0, 10.0 + static_cast<double>(rng() % 3000)};
    ldwa::save_checkpoint(m, dir.file("a.ldwa"));
    ldwa::save_checkpoint(ldwa::load_checkpoint(dir.file("a.ldwa")), dir.file("b.ldwa"));
    identical += testutil::read_text(dir.file("a.ldwa")) == testutil::read_text(dir.file("b.ldwa"));
  }
  return {identical == 10, std::to_string(identical) + "/10 save-load-save byte-identical"};
}

// ---------------------------------------------------------------------------
// End-to-end experiment shared by criteria 7, 8, 9 and 11.

const char* kExperimentConfig = R"({
  "appliances": [
    {"name": "kettle", "window_L": 64, "on_threshold_w": 200, "min_on_s": 12,
     "min_off_s": 12, "max_power_w": 2000},
    {"name": "fridge", "window_L": 64, "min_on_s": 20, "min_off_s": 12, "max_power_w": 150}
  ],
  "target": "kettle",
  "train": {"max_epochs": 30, "seed": 1, "window_stride": 4},
  "model": {"filters": 8, "kernel": 4, "hidden": 32, "classification": "standard"},
  "metrics": {"threshold_w": 15, "period_len_k": 1200},
  "synth": {"duration_s": 20000, "noise_std": 10}
})";

struct Experiment {
  const testutil::TempDir& dir;
  std::string config;
  std::ofstream log;

  explicit Experiment(const testutil::TempDir& d)
      : dir(d), config(d.file("experiment.json")), log(d.file("experiment.log")) {
    testutil::write_text(config, kExperimentConfig);
  }

  bool synth(const std::string& name, std::uint64_t seed, double scale) {
    ldwa::SynthCommand cmd;
    cmd.config = config;
    cmd.seed = seed;
    cmd.duration_scale = scale;
    cmd.out_dir = dir.file(name);
    return ldwa::cmd_synth(cmd, log, log) == 0;
  }

  bool train(const std::string& checkpoint, double& seconds) {
    ldwa::TrainCommand cmd;
    cmd.config = config;
    cmd.aggregate = dir.file("train_house/aggregate.csv");
    cmd.appliance = dir.file("train_house/kettle.csv");
    cmd.out = dir.file(checkpoint);
    cmd.seed = 1;
    const auto start = Clock::now();
    const int code = ldwa::cmd_train(cmd, log, log);
    seconds = seconds_since(start);
    return code == 0;
  }

  // Disaggregates `house` and returns the evaluation; the report CSV lands
  // next to the prediction.
  std::optional<ldwa::EvalReport> test(const std::string& checkpoint, const std::string& house,
                                       bool attention = false) {
    const std::string pred = dir.file(house + "_" + checkpoint + ".csv");
    ldwa::DisaggregateCommand d{dir.file(checkpoint), dir.file(house + "/aggregate.csv"), pred, attention};
    if (ldwa::cmd_disaggregate(d, log, log) != 0) return std::nullopt;
    ldwa::EvaluateCommand e;
    e.prediction = pred;
    e.ground_truth = dir.file(house + "/kettle.csv");
    e.config = config;
    e.out = pred + ".report.csv";
    if (ldwa::cmd_evaluate(e, log, log) != 0) return std::nullopt;
    const auto truth = ldwa::load_channel_csv(e.ground_truth).values;
    const auto y_hat = ldwa::load_channel_csv(pred).values;
    return ldwa::evaluate("kettle", truth, y_hat, 15.0, 1200);
  }

  double mean_on_power(const std::string& house) {
    const auto y = ldwa::load_channel_csv(dir.file(house + "/kettle.csv")).values;
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : y) {
      if (v > 15.0) {
        sum += v;
        ++n;
      }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
  }
};

Outcome attention_localization(Experiment& ex, const std::string& checkpoint, const std::string& house) {
  const auto spec = ldwa::load_run_config(ex.config).target_spec();
  const auto truth = ldwa::load_channel_csv(ex.dir.file(house + "/kettle.csv"));
  const auto states = ldwa::make_state_sequence(truth, spec);
  const std::size_t L = spec.window_length;
  std::ifstream in(ex.dir.file(house + "_" + checkpoint + ".csv.attention.csv"));
  if (!in) return {false, "attention export missing"};
  std::string line;
  std::getline(in, line);
  std::size_t windows = 0, above = 0;
  std::vector<double> alpha(L);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string field;
    std::getline(fields, field, ',');
    const std::size_t w = std::stoul(field);
    std::size_t edges = 0, edge = 0;
    for (std::size_t t = w + 1; t < w + L; ++t) {
      if (states[t] != states[t - 1]) {
        ++edges;
        edge = t;
      }
    }
    if (edges != 1) continue;
    for (std::size_t t = 0; t < L; ++t) {
      std::getline(fields, field, ',');
      alpha[t] = std::stod(field);
    }
    const std::size_t lo = std::max(w, edge >= 5 ? edge - 5 : 0), hi = std::min(w + L - 1, edge + 5);
    double mass = 0.0;
    for (std::size_t t = lo; t <= hi; ++t) mass += alpha[t - w];
    const double baseline = static_cast<double>(hi - lo + 1) / static_cast<double>(L);
    ++windows;
    above += mass > baseline;
  }
  const double fraction = windows ? static_cast<double>(above) / static_cast<double>(windows) : 0.0;
  return {windows > 0 && fraction >= 0.70,
          std::to_string(above) + "/" + std::to_string(windows) + " single-edge windows above baseline (" +
              fmt(100.0 * fraction, 3) + "%, need >= 70%)"};
}

}  // namespace

int main() {
  ldwa::warnings_enabled() = false;
  testutil::TempDir dir("acceptance");
  std::vector<std::pair<std::string, Outcome>> results;
  auto record = [&](const std::string& title, Outcome o) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << title << ": " << o.detail << std::endl;
    results.emplace_back(title, std::move(o));
  };

  record("1 gradient correctness", gradient_correctness(dir));
  record("2 kernel oracles", kernel_oracles());
  record("3 attention invariants", attention_invariants());
  record("4 gating", gating());
  record("5 metric identities", metric_identities());
  record("6 median reconstruction", median_reconstruction());

  Experiment ex(dir);
  const bool houses = ex.synth("train_house", 1, 1.0) && ex.synth("test_house", 2, 1.0) &&
                      ex.synth("shift_short", 3, 0.75) && ex.synth("shift_long", 4, 1.25);
  double train_seconds = 0.0, repeat_seconds = 0.0;
  const bool trained = houses && ex.train("run1.ldwa", train_seconds);
  const auto same = trained ? ex.test("run1.ldwa", "test_house", true) : std::nullopt;
  {
    Outcome o;
    if (!same) {
      o = {false, "pipeline failed; see experiment.log"};
    } else {
      const double on_power = ex.mean_on_power("test_house");
      o.pass = same->f1 >= 0.90 && same->mae_w <= 0.15 * on_power && train_seconds < 600.0;
      o.detail = "f1=" + fmt(same->f1) + " mae=" + fmt(same->mae_w) + "W (limit " + fmt(0.15 * on_power) +
                 "W) train_time=" + fmt(train_seconds) + "s";
    }
    record("7 end-to-end desk-scale experiment", o);
  }
  {
    Outcome o{false, "pipeline failed"};
    const auto short_acts = same ? ex.test("run1.ldwa", "shift_short") : std::nullopt;
    const auto long_acts = same ? ex.test("run1.ldwa", "shift_long") : std::nullopt;
    if (short_acts && long_acts) {
      const double drop = std::max(same->f1 - short_acts->f1, same->f1 - long_acts->f1);
      o = {drop <= 0.05, "f1 same=" + fmt(same->f1) + " x0.75=" + fmt(short_acts->f1) +
                             " x1.25=" + fmt(long_acts->f1) + " worst drop=" + fmt(drop, 3)};
    }
    record("8 unseen-house generalization", o);
  }
  {
    Outcome o{false, "pipeline failed"};
    if (trained && ex.train("run2.ldwa", repeat_seconds)) {
      const auto second = ex.test("run2.ldwa", "test_house");
      const bool ckpt_same =
          testutil::read_text(dir.file("run1.ldwa")) == testutil::read_text(dir.file("run2.ldwa"));
      const bool report_same =
          second && testutil::read_text(dir.file("test_house_run1.ldwa.csv.report.csv")) ==
                        testutil::read_text(dir.file("test_house_run2.ldwa.csv.report.csv"));
      o = {ckpt_same && report_same, std::string("checkpoints ") + (ckpt_same ? "identical" : "differ") +
                                         ", reports " + (report_same ? "identical" : "differ")};
    }
    record("9 determinism", o);
  }
  record("10 checkpoint round-trip", checkpoint_round_trip(dir));
  record("11 attention localization",
         same ? attention_localization(ex, "run1.ldwa", "test_house") : Outcome{false, "no trained model"});

  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.second.pass; });
  std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}
