#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dynlabel/errors.hpp"
#include "dynlabel/rng.hpp"

// Minimal differentiable kernel for the fixed actor/critic architectures:
// dense layers, self-attention pooling over a variable neighbor set, diagonal
// Gaussian heads, exact reverse-mode gradients, and Adam with linear
// learning-rate decay. No general graphs, no GPU.
namespace dynlabel::nn {

template <typename T>
struct Tensor {
  std::vector<size_t> shape;
  std::vector<T> data;

  size_t size() const { return data.size(); }
};

enum class Act { identity, relu, tanh };

// Flat parameter block with named views; gradients mirror values. Keeping
// everything in one array makes Adam, serialization, and finite-difference
// checks uniform.
template <typename T>
class ParamStore {
 public:
  struct Entry {
    std::string name;
    std::vector<size_t> shape;
    size_t offset = 0;
    size_t size = 0;
  };

  size_t add(const std::string& name, std::vector<size_t> shape) {
    size_t n = 1;
    for (size_t d : shape) n *= d;
    size_t off = values_.size();
    entries_.push_back({name, std::move(shape), off, n});
    values_.resize(off + n, T(0));
    grads_.resize(off + n, T(0));
    return off;
  }

  size_t size() const { return values_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  T* values() { return values_.data(); }
  const T* values() const { return values_.data(); }
  T* grads() { return grads_.data(); }
  const T* grads() const { return grads_.data(); }

  void zero_grads() { std::fill(grads_.begin(), grads_.end(), T(0)); }

 private:
  std::vector<Entry> entries_;
  std::vector<T> values_;
  std::vector<T> grads_;
};

template <typename T>
inline T apply_act(Act act, T pre) {
  switch (act) {
    case Act::relu: return pre > T(0) ? pre : T(0);
    case Act::tanh: return std::tanh(pre);
    case Act::identity: return pre;
  }
  return pre;
}

// Derivative expressed through the activation *output*; avoids caching
// pre-activations.
template <typename T>
inline T act_grad_from_output(Act act, T y) {
  switch (act) {
    case Act::relu: return y > T(0) ? T(1) : T(0);
    case Act::tanh: return T(1) - y * y;
    case Act::identity: return T(1);
  }
  return T(1);
}

// y = act(W^T x + b) with W stored (in x out), row-major by input index.
template <typename T>
struct Dense {
  size_t in = 0, out = 0;
  Act act = Act::identity;
  size_t w_off = 0, b_off = 0;

  void bind(ParamStore<T>& store, const std::string& name, size_t in_dim,
            size_t out_dim, Act activation) {
    in = in_dim;
    out = out_dim;
    act = activation;
    w_off = store.add(name + ".w", {in_dim, out_dim});
    b_off = store.add(name + ".b", {out_dim});
  }

  void init(T* params, Rng& rng, bool zero) const {
    if (zero) {
      for (size_t i = 0; i < in * out; ++i) params[w_off + i] = T(0);
      for (size_t o = 0; o < out; ++o) params[b_off + o] = T(0);
      return;
    }
    double a = std::sqrt(6.0 / static_cast<double>(in + out));
    for (size_t i = 0; i < in * out; ++i)
      params[w_off + i] = static_cast<T>(rng.uniform(-a, a));
    for (size_t o = 0; o < out; ++o) params[b_off + o] = T(0);
  }

  void forward(const T* params, const T* x, T* y) const {
    const T* w = params + w_off;
    const T* b = params + b_off;
    for (size_t o = 0; o < out; ++o) y[o] = b[o];
    for (size_t i = 0; i < in; ++i) {
      T xi = x[i];
      if (xi == T(0)) continue;
      const T* wi = w + i * out;
      for (size_t o = 0; o < out; ++o) y[o] += xi * wi[o];
    }
    if (act != Act::identity)
      for (size_t o = 0; o < out; ++o) y[o] = apply_act(act, y[o]);
  }

  // Accumulates parameter gradients into `grads` and, when dx != nullptr,
  // input gradients into dx. `g_scratch` must hold `out` elements.
  void backward(const T* params, T* grads, const T* x, const T* y,
                const T* dy, T* dx, T* g_scratch) const {
    const T* w = params + w_off;
    T* gw = grads + w_off;
    T* gb = grads + b_off;
    for (size_t o = 0; o < out; ++o)
      g_scratch[o] = dy[o] * act_grad_from_output(act, y[o]);
    for (size_t o = 0; o < out; ++o) gb[o] += g_scratch[o];
    for (size_t i = 0; i < in; ++i) {
      T xi = x[i];
      T* gwi = gw + i * out;
      const T* wi = w + i * out;
      T acc = T(0);
      for (size_t o = 0; o < out; ++o) {
        gwi[o] += xi * g_scratch[o];
        acc += wi[o] * g_scratch[o];
      }
      if (dx) dx[i] += acc;
    }
  }
};

// --- Diagonal Gaussian head ------------------------------------------------

constexpr double kLogStdMin = -5.0;
constexpr double kLogStdMax = 2.0;
constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

// Raw head layout: [mu_x, mu_z, log_std_x, log_std_z]; log-std is clamped and
// the mask records where the clamp pinned it (zero gradient there).
template <typename T>
inline void split_gaussian_head(const T* out4, T* mu, T* log_std,
                                bool* clamped) {
  for (int k = 0; k < 2; ++k) {
    mu[k] = out4[k];
    T s = out4[2 + k];
    clamped[k] = s < T(kLogStdMin) || s > T(kLogStdMax);
    log_std[k] = s < T(kLogStdMin) ? T(kLogStdMin)
                                   : (s > T(kLogStdMax) ? T(kLogStdMax) : s);
  }
}

template <typename T>
inline double gaussian_log_prob2(const T* mu, const T* log_std, const T* a) {
  double lp = 0.0;
  for (int k = 0; k < 2; ++k) {
    double s = std::exp(static_cast<double>(log_std[k]));
    double d = (static_cast<double>(a[k]) - static_cast<double>(mu[k])) / s;
    lp -= 0.5 * d * d + static_cast<double>(log_std[k]) + 0.5 * kLogTwoPi;
  }
  return lp;
}

template <typename T>
inline double gaussian_entropy2(const T* log_std) {
  double h = 0.0;
  for (int k = 0; k < 2; ++k)
    h += 0.5 + 0.5 * kLogTwoPi + static_cast<double>(log_std[k]);
  return h;
}

// d log_prob / d mu_k and d log_prob / d log_std_k.
template <typename T>
inline void gaussian_log_prob2_grad(const T* mu, const T* log_std, const T* a,
                                    double* d_mu, double* d_log_std) {
  for (int k = 0; k < 2; ++k) {
    double s = std::exp(static_cast<double>(log_std[k]));
    double d = (static_cast<double>(a[k]) - static_cast<double>(mu[k])) / s;
    d_mu[k] = d / s;
    d_log_std[k] = d * d - 1.0;
  }
}

template <typename T>
inline void gaussian_sample2(const T* mu, const T* log_std, Rng& rng, T* a) {
  auto [n0, n1] = rng.normal2();
  a[0] = mu[0] + static_cast<T>(std::exp(static_cast<double>(log_std[0])) * n0);
  a[1] = mu[1] + static_cast<T>(std::exp(static_cast<double>(log_std[1])) * n1);
}

// --- Fixed architectures -----------------------------------------------------

struct NetDims {
  size_t self_dim = 22;
  size_t neigh_dim = 13;
  size_t hidden = 128;
  size_t score_hidden = 64;
};

template <typename T>
struct NetWorkspace {
  std::vector<T> self_h, neigh_in, neigh_h, score_h, scores, weights;
  std::vector<T> pooled, trunk_in, h1, h2, out;
  // backward scratch
  std::vector<T> d_self_h, d_pooled, d_trunk_in, d_h1, d_h2, d_hj, d_inj,
      d_scoreh, g1, g2;
};

// Shared topology of actor and critic: per-entity embeddings, attention
// pooling over neighbors, then a three-layer trunk. The actor head emits
// [mu_x, mu_z, log_std_x, log_std_z]; the critic head emits a scalar value.
template <typename T>
class Net {
 public:
  Net(const NetDims& dims, size_t out_dim, const std::string& prefix)
      : dims_(dims), out_dim_(out_dim) {
    self_embed_.bind(store_, prefix + ".self_embed", dims.self_dim, dims.hidden,
                     Act::relu);
    neigh_embed_.bind(store_, prefix + ".neigh_embed",
                      dims.neigh_dim + dims.hidden, dims.hidden, Act::relu);
    score1_.bind(store_, prefix + ".score1", dims.hidden, dims.score_hidden,
                 Act::relu);
    score2_.bind(store_, prefix + ".score2", dims.score_hidden, 1,
                 Act::identity);
    fc1_.bind(store_, prefix + ".fc1", 2 * dims.hidden, dims.hidden, Act::relu);
    fc2_.bind(store_, prefix + ".fc2", dims.hidden, dims.hidden, Act::relu);
    head_.bind(store_, prefix + ".head", dims.hidden, out_dim, Act::identity);
  }

  // Hidden layers Xavier-uniform, output head zero so an untrained critic
  // evaluates to 0 and an untrained actor starts at N(0, 1).
  void init_params(Rng& rng) {
    T* p = store_.values();
    self_embed_.init(p, rng, false);
    neigh_embed_.init(p, rng, false);
    score1_.init(p, rng, false);
    score2_.init(p, rng, false);
    fc1_.init(p, rng, false);
    fc2_.init(p, rng, false);
    head_.init(p, rng, true);
  }

  const NetDims& dims() const { return dims_; }
  size_t out_dim() const { return out_dim_; }
  ParamStore<T>& store() { return store_; }
  const ParamStore<T>& store() const { return store_; }

  // `neighbors` is n contiguous rows of neigh_dim features (may be null when
  // n == 0). Results land in ws.out; intermediate activations stay in ws for
  // the backward pass.
  void forward(const T* self, const T* neighbors, size_t n,
               NetWorkspace<T>& ws) const {
    const T* p = store_.values();
    size_t h = dims_.hidden;
    ws.self_h.resize(h);
    ws.neigh_in.resize(n * (dims_.neigh_dim + h));
    ws.neigh_h.resize(n * h);
    ws.score_h.resize(n * dims_.score_hidden);
    ws.scores.resize(n);
    ws.weights.resize(n);
    ws.pooled.assign(h, T(0));
    ws.trunk_in.resize(2 * h);
    ws.h1.resize(h);
    ws.h2.resize(h);
    ws.out.resize(out_dim_);

    self_embed_.forward(p, self, ws.self_h.data());

    for (size_t j = 0; j < n; ++j) {
      T* in_j = ws.neigh_in.data() + j * (dims_.neigh_dim + h);
      std::copy(neighbors + j * dims_.neigh_dim,
                neighbors + (j + 1) * dims_.neigh_dim, in_j);
      std::copy(ws.self_h.begin(), ws.self_h.end(), in_j + dims_.neigh_dim);
      neigh_embed_.forward(p, in_j, ws.neigh_h.data() + j * h);
      score1_.forward(p, ws.neigh_h.data() + j * h,
                      ws.score_h.data() + j * dims_.score_hidden);
      score2_.forward(p, ws.score_h.data() + j * dims_.score_hidden,
                      ws.scores.data() + j);
    }

    if (n > 0) {
      // Softmax with the usual max shift; neighbor-order reductions run in
      // double so shuffling neighbors cannot perturb the output.
      T zmax = ws.scores[0];
      for (size_t j = 1; j < n; ++j) zmax = std::max(zmax, ws.scores[j]);
      double sum = 0.0;
      for (size_t j = 0; j < n; ++j) {
        ws.weights[j] = std::exp(ws.scores[j] - zmax);
        sum += static_cast<double>(ws.weights[j]);
      }
      for (size_t j = 0; j < n; ++j)
        ws.weights[j] = static_cast<T>(static_cast<double>(ws.weights[j]) / sum);
      for (size_t k = 0; k < h; ++k) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j)
          acc += static_cast<double>(ws.weights[j]) *
                 static_cast<double>(ws.neigh_h[j * h + k]);
        ws.pooled[k] = static_cast<T>(acc);
      }
    }

    std::copy(ws.self_h.begin(), ws.self_h.end(), ws.trunk_in.begin());
    std::copy(ws.pooled.begin(), ws.pooled.end(), ws.trunk_in.begin() + h);
    fc1_.forward(p, ws.trunk_in.data(), ws.h1.data());
    fc2_.forward(p, ws.h1.data(), ws.h2.data());
    head_.forward(p, ws.h2.data(), ws.out.data());
  }

  // Reverse pass for one sample; accumulates into `grads` (same layout as the
  // store). `ws` must hold the activations of the matching forward call.
  void backward(const T* self, const T* neighbors, size_t n,
                NetWorkspace<T>& ws, const T* d_out, T* grads) const {
    const T* p = store_.values();
    size_t h = dims_.hidden;
    ws.d_self_h.assign(h, T(0));
    ws.d_pooled.assign(h, T(0));
    ws.d_trunk_in.assign(2 * h, T(0));
    ws.d_h1.assign(h, T(0));
    ws.d_h2.assign(h, T(0));
    ws.g1.resize(std::max({h, out_dim_, dims_.score_hidden, size_t(1)}));
    ws.g2.resize(std::max({h, dims_.score_hidden, size_t(1)}));

    head_.backward(p, grads, ws.h2.data(), ws.out.data(), d_out,
                   ws.d_h2.data(), ws.g1.data());
    fc2_.backward(p, grads, ws.h1.data(), ws.h2.data(), ws.d_h2.data(),
                  ws.d_h1.data(), ws.g1.data());
    fc1_.backward(p, grads, ws.trunk_in.data(), ws.h1.data(), ws.d_h1.data(),
                  ws.d_trunk_in.data(), ws.g1.data());

    for (size_t k = 0; k < h; ++k) {
      ws.d_self_h[k] = ws.d_trunk_in[k];
      ws.d_pooled[k] = ws.d_trunk_in[h + k];
    }

    if (n > 0) {
      double pd = 0.0;
      for (size_t k = 0; k < h; ++k)
        pd += static_cast<double>(ws.pooled[k]) *
              static_cast<double>(ws.d_pooled[k]);
      ws.d_hj.resize(h);
      ws.d_inj.resize(dims_.neigh_dim + h);
      ws.d_scoreh.resize(dims_.score_hidden);
      for (size_t j = 0; j < n; ++j) {
        const T* h_j = ws.neigh_h.data() + j * h;
        double hd = 0.0;
        for (size_t k = 0; k < h; ++k)
          hd += static_cast<double>(h_j[k]) * static_cast<double>(ws.d_pooled[k]);
        T w_j = ws.weights[j];
        T d_z = static_cast<T>(static_cast<double>(w_j) * (hd - pd));

        // through the score stack (score input is the embedding itself)
        std::fill(ws.d_scoreh.begin(), ws.d_scoreh.end(), T(0));
        std::fill(ws.d_hj.begin(), ws.d_hj.end(), T(0));
        score2_.backward(p, grads, ws.score_h.data() + j * dims_.score_hidden,
                         ws.scores.data() + j, &d_z, ws.d_scoreh.data(),
                         ws.g1.data());
        score1_.backward(p, grads, h_j,
                         ws.score_h.data() + j * dims_.score_hidden,
                         ws.d_scoreh.data(), ws.d_hj.data(), ws.g2.data());
        // plus the pooling path
        for (size_t k = 0; k < h; ++k) ws.d_hj[k] += w_j * ws.d_pooled[k];

        std::fill(ws.d_inj.begin(), ws.d_inj.end(), T(0));
        neigh_embed_.backward(p, grads,
                              ws.neigh_in.data() + j * (dims_.neigh_dim + h),
                              h_j, ws.d_hj.data(), ws.d_inj.data(),
                              ws.g1.data());
        for (size_t k = 0; k < h; ++k)
          ws.d_self_h[k] += ws.d_inj[dims_.neigh_dim + k];
      }
    }

    self_embed_.backward(p, grads, self, ws.self_h.data(), ws.d_self_h.data(),
                         nullptr, ws.g1.data());
    (void)neighbors;
  }

  // Fingerprint of every piecewise-linear branch taken in the last forward:
  // relu signs plus the softmax argmax shift. A finite-difference probe is
  // only a valid derivative estimate while this stays constant.
  uint64_t mask_signature(const NetWorkspace<T>& ws) const {
    uint64_t sig = 0xcbf29ce484222325ULL;
    auto mix_bit = [&sig](bool bit) {
      sig ^= bit ? 0x9e3779b97f4a7c15ULL : 0x85ebca6b0f43ULL;
      sig *= 0x100000001b3ULL;
    };
    for (T v : ws.self_h) mix_bit(v > T(0));
    for (T v : ws.neigh_h) mix_bit(v > T(0));
    for (T v : ws.score_h) mix_bit(v > T(0));
    for (T v : ws.h1) mix_bit(v > T(0));
    for (T v : ws.h2) mix_bit(v > T(0));
    if (out_dim_ == 4) {
      mix_bit(ws.out[2] < T(kLogStdMin) || ws.out[2] > T(kLogStdMax));
      mix_bit(ws.out[3] < T(kLogStdMin) || ws.out[3] > T(kLogStdMax));
    }
    return sig;
  }

 private:
  NetDims dims_;
  size_t out_dim_;
  ParamStore<T> store_;
  Dense<T> self_embed_, neigh_embed_, score1_, score2_, fc1_, fc2_, head_;
};

// Standalone attention pooling (the Net uses the same math inline); exposed
// for direct unit testing against the spec'd behavior.
template <typename T>
struct AttentionPool {
  NetDims dims;
  ParamStore<T> store;
  Dense<T> score1, score2;

  explicit AttentionPool(size_t embed_dim = 128, size_t score_hidden = 64) {
    dims.hidden = embed_dim;
    dims.score_hidden = score_hidden;
    score1.bind(store, "score1", embed_dim, score_hidden, Act::relu);
    score2.bind(store, "score2", score_hidden, 1, Act::identity);
  }

  void init_params(Rng& rng) {
    score1.init(store.values(), rng, false);
    score2.init(store.values(), rng, false);
  }

  // pooled = sum_j softmax(score(e_j)) * e_j; empty input pools to zero.
  void forward(const std::vector<std::vector<T>>& embeds,
               std::vector<T>& pooled, std::vector<T>& weights) const {
    pooled.assign(dims.hidden, T(0));
    weights.assign(embeds.size(), T(0));
    if (embeds.empty()) return;
    std::vector<T> sh(dims.score_hidden);
    std::vector<T> scores(embeds.size());
    for (size_t j = 0; j < embeds.size(); ++j) {
      score1.forward(store.values(), embeds[j].data(), sh.data());
      score2.forward(store.values(), sh.data(), &scores[j]);
    }
    T zmax = scores[0];
    for (T z : scores) zmax = std::max(zmax, z);
    double sum = 0.0;
    for (size_t j = 0; j < scores.size(); ++j) {
      weights[j] = std::exp(scores[j] - zmax);
      sum += static_cast<double>(weights[j]);
    }
    for (auto& w : weights) w = static_cast<T>(static_cast<double>(w) / sum);
    for (size_t k = 0; k < dims.hidden; ++k) {
      double acc = 0.0;
      for (size_t j = 0; j < embeds.size(); ++j)
        acc += static_cast<double>(weights[j]) * static_cast<double>(embeds[j][k]);
      pooled[k] = static_cast<T>(acc);
    }
  }
};

// --- Optimizer ---------------------------------------------------------------

struct LinearLr {
  double lr0 = 3e-4;
  uint64_t total_steps = 1;

  double at(uint64_t step) const {
    double f = 1.0 - static_cast<double>(step) / static_cast<double>(total_steps);
    return lr0 * (f > 0.0 ? f : 0.0);
  }
};

template <typename T>
class Adam {
 public:
  explicit Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(ParamStore<T>& store, double lr) {
    if (m_.empty()) {
      m_.assign(store.size(), 0.0);
      v_.assign(store.size(), 0.0);
    }
    ++t_;
    T* p = store.values();
    const T* g = store.grads();
    double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t i = 0; i < store.size(); ++i) {
      double gi = static_cast<double>(g[i]);
      if (!std::isfinite(gi))
        throw DivergenceError("optimizer: non-finite gradient at " +
                              std::to_string(i));
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * gi;
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * gi * gi;
      double update = lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
      p[i] = static_cast<T>(static_cast<double>(p[i]) - update);
    }
  }

  uint64_t updates() const { return t_; }

 private:
  double beta1_, beta2_, eps_;
  std::vector<double> m_, v_;
  uint64_t t_ = 0;
};

// --- Finite-difference oracle -------------------------------------------------

struct GradCheckResult {
  double max_rel_err = 0.0;
  size_t checked = 0;
  size_t skipped = 0;  // parameters whose probe crossed a relu/clamp kink
};

// Central differences against analytic gradients, in 64-bit. `eval` runs a
// forward pass and reports (loss, activation-mask signature); parameters whose
// +/-h probes change the signature are excluded, since the difference quotient
// does not estimate a derivative across a kink.
GradCheckResult gradient_check(
    ParamStore<double>& store, const std::vector<double>& analytic,
    const std::function<std::pair<double, uint64_t>()>& eval, double h = 1e-3);

}  // namespace dynlabel::nn
