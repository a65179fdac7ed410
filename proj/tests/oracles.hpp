#pragma once

// Brute-force reference implementations used only by tests. Everything here
// is written with scalar loops and shares no code with the library kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Vec random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline Mat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Mat m(r);
  for (auto& row : m) row = random_vec(rng, c);
  return m;
}

// input[c][t], weight[f][c][k]; zero padding floor(K/2) left.
inline Mat conv1d(const Mat& input, const std::vector<Mat>& weight, const Vec& bias, bool relu) {
  const std::size_t cin = input.size(), len = input[0].size();
  const std::size_t filters = weight.size(), k = weight[0][0].size();
  const std::size_t left = k / 2;
  Vec padded_row(len + k - 1);
  Mat padded(cin, Vec(len + k - 1, 0.0));
  for (std::size_t c = 0; c < cin; ++c) {
    for (std::size_t t = 0; t < len; ++t) padded[c][t + left] = input[c][t];
  }
  Mat out(filters, Vec(len));
  for (std::size_t f = 0; f < filters; ++f) {
    for (std::size_t t = 0; t < len; ++t) {
      double acc = bias[f];
      for (std::size_t c = 0; c < cin; ++c) {
        for (std::size_t j = 0; j < k; ++j) acc += weight[f][c][j] * padded[c][t + j];
      }
      out[f][t] = relu ? std::max(acc, 0.0) : acc;
    }
  }
  return out;
}

inline Vec matvec(const Mat& w, const Vec& x) {
  Vec y(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += w[i][j] * x[j];
  }
  return y;
}

inline Vec dense(const Mat& w, const Vec& b, const Vec& x, int act /*0 lin 1 relu 2 sig 3 tanh*/) {
  Vec y = matvec(w, x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] += b[i];
    if (act == 1) y[i] = std::max(y[i], 0.0);
    if (act == 2) y[i] = sigmoid(y[i]);
    if (act == 3) y[i] = std::tanh(y[i]);
  }
  return y;
}

// LSTM with gate rows stacked i, f, g, o in w_x [4H][d], w_h [4H][H], b [4H].
struct LstmWeights {
  Mat w_x, w_h;
  Vec b;
};

inline void lstm_step(const LstmWeights& p, const Vec& x, Vec& h, Vec& c) {
  const std::size_t hs = h.size();
  Vec h_new(hs), c_new(hs);
  for (std::size_t j = 0; j < hs; ++j) {
    double z[4];
    for (int gate = 0; gate < 4; ++gate) {
      const std::size_t row = gate * hs + j;
      double acc = p.b[row];
      for (std::size_t k = 0; k < x.size(); ++k) acc += p.w_x[row][k] * x[k];
      for (std::size_t k = 0; k < hs; ++k) acc += p.w_h[row][k] * h[k];
      z[gate] = acc;
    }
    const double i = sigmoid(z[0]), f = sigmoid(z[1]), g = std::tanh(z[2]), o = sigmoid(z[3]);
    c_new[j] = f * c[j] + i * g;
    h_new[j] = o * std::tanh(c_new[j]);
  }
  h = h_new;
  c = c_new;
}

// xs[t][d] -> out[t][2H]
inline Mat bilstm(const LstmWeights& fwd, const LstmWeights& bwd, const Mat& xs, std::size_t hs) {
  const std::size_t steps = xs.size();
  Mat out(steps, Vec(2 * hs));
  Vec h(hs, 0.0), c(hs, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    lstm_step(fwd, xs[t], h, c);
    for (std::size_t j = 0; j < hs; ++j) out[t][j] = h[j];
  }
  h.assign(hs, 0.0);
  c.assign(hs, 0.0);
  for (std::size_t t = steps; t-- > 0;) {
    lstm_step(bwd, xs[t], h, c);
    for (std::size_t j = 0; j < hs; ++j) out[t][hs + j] = h[j];
  }
  return out;
}

inline Vec softmax(const Vec& e) {
  double peak = *std::max_element(e.begin(), e.end());
  Vec a(e.size());
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) total += (a[i] = std::exp(e[i] - peak));
  for (auto& v : a) v /= total;
  return a;
}

struct AttentionResult {
  Vec context, alpha;
};

inline AttentionResult attention(const Mat& hidden, const Mat& w, const Vec& b, const Vec& v) {
  Vec e(hidden.size());
  for (std::size_t t = 0; t < hidden.size(); ++t) {
    double acc = 0.0;
    for (std::size_t u = 0; u < w.size(); ++u) {
      double z = b[u];
      for (std::size_t k = 0; k < hidden[t].size(); ++k) z += w[u][k] * hidden[t][k];
      acc += v[u] * std::tanh(z);
    }
    e[t] = acc;
  }
  AttentionResult r{Vec(hidden[0].size(), 0.0), softmax(e)};
  for (std::size_t t = 0; t < hidden.size(); ++t) {
    for (std::size_t k = 0; k < hidden[t].size(); ++k) r.context[k] += r.alpha[t] * hidden[t][k];
  }
  return r;
}

inline double mse(const Vec& p, const Vec& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
  return s / static_cast<double>(p.size());
}

inline double bce(const Vec& p, const Vec& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], 1e-7, 1.0 - 1e-7);
    s += t[i] * std::log(q) + (1.0 - t[i]) * std::log(1.0 - q);
  }
  return -s / static_cast<double>(p.size());
}

inline double median(Vec v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle
