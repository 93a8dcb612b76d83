// models/densenet.cc

// Copyright 2026  The vpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "models/densenet.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "base/error.h"
#include "base/rng.h"

namespace vpd {
namespace {

constexpr double kBnEps = 1e-5;
constexpr int kStemKernel = 3;

template <class T>
void ConvForward(const typename DenseNet1D<T>::Conv &cv, const Tensor3<T> &x, Tensor3<T> *y) {
  *y = Tensor3<T>(x.n, static_cast<size_t>(cv.cout), x.l);
  const long len = static_cast<long>(x.l), pad = cv.k / 2;
  for (size_t i = 0; i < x.n; ++i)
    for (int co = 0; co < cv.cout; ++co) {
      T *out = y->ptr(i, static_cast<size_t>(co));
      for (int ci = 0; ci < cv.cin; ++ci) {
        const T *in = x.ptr(i, static_cast<size_t>(ci));
        const T *w = &cv.w[static_cast<size_t>((co * cv.cin + ci) * cv.k)];
        for (int kk = 0; kk < cv.k; ++kk) {
          const long off = kk - pad;
          const T wk = w[kk];
          const long lo = std::max(0L, -off), hi = std::min(len, len - off);
          for (long t = lo; t < hi; ++t) out[t] += wk * in[t + off];
        }
      }
    }
}

// Accumulates into cv.dw; returns dx.
template <class T>
Tensor3<T> ConvBackward(typename DenseNet1D<T>::Conv &cv, const Tensor3<T> &x,
                        const Tensor3<T> &dy) {
  Tensor3<T> dx(x.n, x.c, x.l);
  const long len = static_cast<long>(x.l), pad = cv.k / 2;
  for (size_t i = 0; i < x.n; ++i)
    for (int co = 0; co < cv.cout; ++co) {
      const T *g = dy.ptr(i, static_cast<size_t>(co));
      for (int ci = 0; ci < cv.cin; ++ci) {
        const T *in = x.ptr(i, static_cast<size_t>(ci));
        T *din = dx.ptr(i, static_cast<size_t>(ci));
        const size_t base = static_cast<size_t>((co * cv.cin + ci) * cv.k);
        for (int kk = 0; kk < cv.k; ++kk) {
          const long off = kk - pad;
          const T wk = cv.w[base + static_cast<size_t>(kk)];
          const long lo = std::max(0L, -off), hi = std::min(len, len - off);
          double acc = 0.0;
          for (long t = lo; t < hi; ++t) {
            acc += static_cast<double>(g[t]) * in[t + off];
            din[t + off] += wk * g[t];
          }
          cv.dw[base + static_cast<size_t>(kk)] += static_cast<T>(acc);
        }
      }
    }
  return dx;
}

template <class T, class Cache>
Tensor3<T> BnForward(typename DenseNet1D<T>::BatchNorm &bn, const Tensor3<T> &x, bool training,
                     double momentum, Cache *cache) {
  Tensor3<T> y(x.n, x.c, x.l);
  const double m = static_cast<double>(x.n * x.l);
  if (training) {
    cache->xhat = Tensor3<T>(x.n, x.c, x.l);
    cache->invstd.assign(x.c, T(0));
  }
  for (size_t ch = 0; ch < x.c; ++ch) {
    double mean, var;
    if (training) {
      double s = 0.0;
      for (size_t i = 0; i < x.n; ++i) {
        const T *p = x.ptr(i, ch);
        for (size_t t = 0; t < x.l; ++t) s += p[t];
      }
      mean = s / m;
      double q = 0.0;
      for (size_t i = 0; i < x.n; ++i) {
        const T *p = x.ptr(i, ch);
        for (size_t t = 0; t < x.l; ++t) q += (p[t] - mean) * (p[t] - mean);
      }
      var = q / m;
      bn.mean[ch] = static_cast<T>(momentum * bn.mean[ch] + (1.0 - momentum) * mean);
      bn.var[ch] = static_cast<T>(momentum * bn.var[ch] + (1.0 - momentum) * var);
    } else {
      mean = bn.mean[ch];
      var = bn.var[ch];
    }
    const double inv = 1.0 / std::sqrt(var + kBnEps);
    if (training) cache->invstd[ch] = static_cast<T>(inv);
    for (size_t i = 0; i < x.n; ++i) {
      const T *p = x.ptr(i, ch);
      T *q = y.ptr(i, ch);
      for (size_t t = 0; t < x.l; ++t) {
        const T xh = static_cast<T>((p[t] - mean) * inv);
        if (training) cache->xhat.ptr(i, ch)[t] = xh;
        q[t] = bn.gamma[ch] * xh + bn.beta[ch];
      }
    }
  }
  return y;
}

template <class T, class Cache>
Tensor3<T> BnBackward(typename DenseNet1D<T>::BatchNorm &bn, const Cache &cache,
                      const Tensor3<T> &dy) {
  const Tensor3<T> &xh = cache.xhat;
  Tensor3<T> dx(dy.n, dy.c, dy.l);
  const double m = static_cast<double>(dy.n * dy.l);
  for (size_t ch = 0; ch < dy.c; ++ch) {
    double sdy = 0.0, sdyx = 0.0;
    for (size_t i = 0; i < dy.n; ++i) {
      const T *g = dy.ptr(i, ch);
      const T *h = xh.ptr(i, ch);
      for (size_t t = 0; t < dy.l; ++t) {
        sdy += g[t];
        sdyx += static_cast<double>(g[t]) * h[t];
      }
    }
    bn.dbeta[ch] += static_cast<T>(sdy);
    bn.dgamma[ch] += static_cast<T>(sdyx);
    const double scale = static_cast<double>(bn.gamma[ch]) * cache.invstd[ch] / m;
    for (size_t i = 0; i < dy.n; ++i) {
      const T *g = dy.ptr(i, ch);
      const T *h = xh.ptr(i, ch);
      T *d = dx.ptr(i, ch);
      for (size_t t = 0; t < dy.l; ++t)
        d[t] = static_cast<T>(scale * (m * g[t] - sdy - h[t] * sdyx));
    }
  }
  return dx;
}

template <class T>
Tensor3<T> Concat(const Tensor3<T> &a, const Tensor3<T> &b) {
  Tensor3<T> out(a.n, a.c + b.c, a.l);
  for (size_t i = 0; i < a.n; ++i) {
    std::copy(a.ptr(i, 0), a.ptr(i, 0) + a.c * a.l, out.ptr(i, 0));
    std::copy(b.ptr(i, 0), b.ptr(i, 0) + b.c * b.l, out.ptr(i, a.c));
  }
  return out;
}

// Splits channels [0, c) from [c, end).
template <class T>
std::pair<Tensor3<T>, Tensor3<T>> SplitChannels(const Tensor3<T> &x, size_t c) {
  Tensor3<T> a(x.n, c, x.l), b(x.n, x.c - c, x.l);
  for (size_t i = 0; i < x.n; ++i) {
    std::copy(x.ptr(i, 0), x.ptr(i, c), a.ptr(i, 0));
    std::copy(x.ptr(i, c), x.ptr(i, 0) + x.c * x.l, b.ptr(i, 0));
  }
  return {std::move(a), std::move(b)};
}

template <class T>
Tensor3<T> AvgPool2(const Tensor3<T> &x) {
  Tensor3<T> y(x.n, x.c, x.l / 2);
  for (size_t i = 0; i < x.n; ++i)
    for (size_t ch = 0; ch < x.c; ++ch) {
      const T *p = x.ptr(i, ch);
      T *q = y.ptr(i, ch);
      for (size_t t = 0; t < y.l; ++t) q[t] = T(0.5) * (p[2 * t] + p[2 * t + 1]);
    }
  return y;
}

template <class T>
Tensor3<T> AvgPool2Backward(const Tensor3<T> &dy, size_t len) {
  Tensor3<T> dx(dy.n, dy.c, len);
  for (size_t i = 0; i < dy.n; ++i)
    for (size_t ch = 0; ch < dy.c; ++ch) {
      const T *g = dy.ptr(i, ch);
      T *d = dx.ptr(i, ch);
      for (size_t t = 0; t < dy.l; ++t) d[2 * t] = d[2 * t + 1] = T(0.5) * g[t];
    }
  return dx;
}

template <class T>
typename DenseNet1D<T>::Conv MakeConv(int cin, int cout, int k, Rng &rng) {
  typename DenseNet1D<T>::Conv cv;
  cv.cin = cin;
  cv.cout = cout;
  cv.k = k;
  const size_t n = static_cast<size_t>(cin * cout * k);
  const double std = std::sqrt(2.0 / (cin * k));  // He normal
  cv.w.resize(n);
  for (T &v : cv.w) v = static_cast<T>(std * rng.Normal());
  cv.dw.assign(n, T(0));
  return cv;
}

template <class T>
typename DenseNet1D<T>::BatchNorm MakeBn(int c) {
  typename DenseNet1D<T>::BatchNorm bn;
  const size_t n = static_cast<size_t>(c);
  bn.c = c;
  bn.gamma.assign(n, T(1));
  bn.beta.assign(n, T(0));
  bn.dgamma.assign(n, T(0));
  bn.dbeta.assign(n, T(0));
  bn.mean.assign(n, T(0));
  bn.var.assign(n, T(1));
  return bn;
}

}  // namespace

void NetConfig::Validate() const {
  Require(blocks >= 1 && layers_per_block >= 1 && growth_rate >= 1 && initial_filters >= 1,
          Errc::kConfig, "densenet: block, layer, growth and filter counts must be positive");
  Require(kernel >= 1 && kernel % 2 == 1, Errc::kConfig, "densenet: kernel must be odd");
  Require(dropout >= 0.0 && dropout < 1.0, Errc::kConfig, "densenet: dropout outside [0, 1)");
  Require(l2 >= 0.0, Errc::kConfig, "densenet: l2 must be non-negative");
  Require(channels >= 1, Errc::kConfig, "densenet: input needs at least one channel");
  Require(bn_momentum >= 0.0 && bn_momentum < 1.0, Errc::kConfig,
          "densenet: bn_momentum outside [0, 1)");
  Require(time >= (1L << (blocks - 1)), Errc::kConfig,
          "densenet: time axis too short for " + std::to_string(blocks - 1) + " pooling steps");
}

nlohmann::ordered_json ToJson(const NetConfig &c) {
  nlohmann::ordered_json j;
  j["blocks"] = c.blocks;
  j["layers_per_block"] = c.layers_per_block;
  j["growth_rate"] = c.growth_rate;
  j["initial_filters"] = c.initial_filters;
  j["dropout"] = c.dropout;
  j["l2"] = c.l2;
  j["kernel"] = c.kernel;
  j["channels"] = c.channels;
  j["time"] = c.time;
  j["bn_momentum"] = c.bn_momentum;
  return j;
}

NetConfig NetConfigFromJson(const nlohmann::json &j) {
  NetConfig c;
  try {
    c.blocks = j.value("blocks", c.blocks);
    c.layers_per_block = j.value("layers_per_block", c.layers_per_block);
    c.growth_rate = j.value("growth_rate", c.growth_rate);
    c.initial_filters = j.value("initial_filters", c.initial_filters);
    c.dropout = j.value("dropout", c.dropout);
    c.l2 = j.value("l2", c.l2);
    c.kernel = j.value("kernel", c.kernel);
    c.channels = j.value("channels", c.channels);
    c.time = j.value("time", c.time);
    c.bn_momentum = j.value("bn_momentum", c.bn_momentum);
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kConfig, std::string("densenet config: ") + e.what());
  }
  c.Validate();
  return c;
}

template <class T>
DenseNet1D<T>::DenseNet1D(const NetConfig &config, uint64_t seed) : config_(config), seed_(seed) {
  config_.Validate();
  Rng rng(seed);
  int c = config_.initial_filters;
  conv0_ = MakeConv<T>(config_.channels, c, kStemKernel, rng);
  for (int b = 0; b < config_.blocks; ++b) {
    std::vector<Unit> units;
    for (int l = 0; l < config_.layers_per_block; ++l) {
      units.push_back({MakeBn<T>(c), MakeConv<T>(c, config_.growth_rate, config_.kernel, rng)});
      c += config_.growth_rate;
    }
    blocks_.push_back(std::move(units));
    if (b + 1 < config_.blocks) {
      const int half = std::max(1, c / 2);
      transitions_.push_back({MakeBn<T>(c), MakeConv<T>(c, half, 1, rng)});
      c = half;
    }
  }
  final_bn_ = MakeBn<T>(c);
  // Glorot uniform for the single-output dense layer.
  const double limit = std::sqrt(6.0 / (c + 1));
  dense_w_.resize(static_cast<size_t>(c));
  for (T &v : dense_w_) v = static_cast<T>(rng.Uniform(-limit, limit));
  dense_dw_.assign(dense_w_.size(), T(0));
}

template <class T>
void DenseNet1D<T>::ApplyRelu(Tensor3<T> *x, bool training) {
  const size_t index = relu_masks_.size();
  const bool frozen = training && index < frozen_.size();
  if (frozen)
    Require(frozen_[index].size() == x->v.size(), Errc::kDimension,
            "densenet: frozen ReLU pattern does not match the batch");
  std::vector<uint8_t> mask(training ? x->v.size() : 0);
  for (size_t i = 0; i < x->v.size(); ++i) {
    const bool on = frozen ? frozen_[index][i] != 0 : x->v[i] > T(0);
    if (!on) x->v[i] = T(0);
    if (training) mask[i] = on;
  }
  if (training) relu_masks_.push_back(std::move(mask));
}

template <class T>
void DenseNet1D<T>::ReluBackward(size_t index, Tensor3<T> *dy) const {
  const std::vector<uint8_t> &mask = relu_masks_[index];
  for (size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) dy->v[i] = T(0);
}

template <class T>
void DenseNet1D<T>::FreezeRelu(bool on) {
  frozen_ = on ? relu_masks_ : std::vector<std::vector<uint8_t>>{};
}

template <class T>
Tensor3<T> DenseNet1D<T>::RunUnit(Unit &u, const Tensor3<T> &x, bool training, UnitCache *cache) {
  Tensor3<T> h = BnForward<T>(u.bn, x, training, config_.bn_momentum, &cache->bn);
  if (training) cache->relu = relu_masks_.size();
  ApplyRelu(&h, training);
  Tensor3<T> y;
  ConvForward<T>(u.conv, h, &y);
  if (training) cache->act = std::move(h);
  return y;
}

template <class T>
std::vector<T> DenseNet1D<T>::Forward(const Tensor3<T> &x, bool training, uint64_t dropout_seed) {
  if (x.c != static_cast<size_t>(config_.channels) || x.l != static_cast<size_t>(config_.time))
    Fail(Errc::kDimension, "densenet: expected input (" + std::to_string(config_.channels) + ", " +
                               std::to_string(config_.time) + "), got (" + std::to_string(x.c) +
                               ", " + std::to_string(x.l) + ")");
  Rng rng(dropout_seed);
  const bool drop = training && config_.dropout > 0.0;
  const T keep_scale = static_cast<T>(1.0 / (1.0 - config_.dropout));

  Tensor3<T> feat;
  ConvForward<T>(conv0_, x, &feat);
  if (training) {
    input_ = x;
    block_cache_.assign(blocks_.size(), {});
    transition_cache_.assign(transitions_.size(), {});
    pooled_from_.assign(transitions_.size(), 0);
    relu_masks_.clear();
  }
  UnitCache scratch;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (training) block_cache_[b].resize(blocks_[b].size());
    for (size_t l = 0; l < blocks_[b].size(); ++l) {
      UnitCache &cache = training ? block_cache_[b][l] : scratch;
      Tensor3<T> y = RunUnit(blocks_[b][l], feat, training, &cache);
      if (drop) {
        cache.mask.resize(y.v.size());
        for (size_t i = 0; i < y.v.size(); ++i) {
          cache.mask[i] = rng.Uniform() < config_.dropout ? T(0) : keep_scale;
          y.v[i] *= cache.mask[i];
        }
      }
      feat = Concat(feat, y);
    }
    if (b < transitions_.size()) {
      UnitCache &cache = training ? transition_cache_[b] : scratch;
      Tensor3<T> y = RunUnit(transitions_[b], feat, training, &cache);
      if (training) pooled_from_[b] = y.l;
      feat = AvgPool2(y);
    }
  }

  BnCache fcache;
  Tensor3<T> act = BnForward<T>(final_bn_, feat, training, config_.bn_momentum, &fcache);
  ApplyRelu(&act, training);
  std::vector<T> out(x.n);
  std::vector<std::vector<double>> gap(x.n, std::vector<double>(act.c, 0.0));
  std::vector<double> logits(x.n);
  for (size_t i = 0; i < x.n; ++i) {
    double z = dense_b_[0];
    for (size_t ch = 0; ch < act.c; ++ch) {
      const T *p = act.ptr(i, ch);
      double s = 0.0;
      for (size_t t = 0; t < act.l; ++t) s += p[t];
      gap[i][ch] = s / static_cast<double>(act.l);
      z += static_cast<double>(dense_w_[ch]) * gap[i][ch];
    }
    logits[i] = z;
    out[i] = static_cast<T>(1.0 / (1.0 + std::exp(-z)));
  }
  if (training) {
    final_cache_ = std::move(fcache);
    final_act_ = std::move(act);
    gap_ = std::move(gap);
    logits_ = std::move(logits);
  }
  return out;
}

template <class T>
std::vector<T> DenseNet1D<T>::Predict(const Tensor3<T> &x, size_t batch) {
  std::vector<T> out;
  out.reserve(x.n);
  std::vector<size_t> rows;
  for (size_t start = 0; start < x.n; start += batch) {
    rows.resize(std::min(batch, x.n - start));
    std::iota(rows.begin(), rows.end(), start);
    const std::vector<T> p = Forward(GatherRows(x, rows), false);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

template <class T>
double DenseNet1D<T>::Loss(std::span<const int> y, std::span<const double> w) const {
  Require(y.size() == logits_.size() && w.size() == logits_.size(), Errc::kDimension,
          "densenet: labels do not match the cached batch");
  double data = 0.0;
  for (size_t i = 0; i < logits_.size(); ++i) {
    const double z = logits_[i];
    // log(1 + e^z) - y z, computed without overflow.
    const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    data += w[i] * (softplus - y[i] * z);
  }
  data /= static_cast<double>(logits_.size());
  double sq = 0.0;
  auto add = [&](const std::vector<T> &v) {
    for (T x : v) sq += static_cast<double>(x) * x;
  };
  add(conv0_.w);
  for (const auto &blk : blocks_)
    for (const auto &u : blk) add(u.conv.w);
  for (const auto &u : transitions_) add(u.conv.w);
  add(dense_w_);
  return data + 0.5 * config_.l2 * sq;
}

template <class T>
double DenseNet1D<T>::Backward(std::span<const int> y, std::span<const double> w) {
  const double loss = Loss(y, w);
  for (auto &p : Params())
    if (p.grad) std::fill(p.grad->begin(), p.grad->end(), T(0));

  const size_t n = logits_.size();
  const size_t c = final_act_.c, len = final_act_.l;
  Tensor3<T> d(n, c, len);
  double db = 0.0;
  std::vector<double> dw(c, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-logits_[i]));
    const double dz = w[i] * (p - y[i]) / static_cast<double>(n);
    db += dz;
    for (size_t ch = 0; ch < c; ++ch) {
      dw[ch] += dz * gap_[i][ch];
      const T g = static_cast<T>(dz * dense_w_[ch] / static_cast<double>(len));
      std::fill(d.ptr(i, ch), d.ptr(i, ch) + len, g);
    }
  }
  dense_db_[0] = static_cast<T>(db);
  for (size_t ch = 0; ch < c; ++ch) dense_dw_[ch] = static_cast<T>(dw[ch]);
  ReluBackward(relu_masks_.size() - 1, &d);
  d = BnBackward<T>(final_bn_, final_cache_, d);

  for (size_t b = blocks_.size(); b-- > 0;) {
    if (b < transitions_.size()) {
      Unit &u = transitions_[b];
      UnitCache &cache = transition_cache_[b];
      Tensor3<T> dy = AvgPool2Backward(d, pooled_from_[b]);
      Tensor3<T> da = ConvBackward<T>(u.conv, cache.act, dy);
      ReluBackward(cache.relu, &da);
      d = BnBackward<T>(u.bn, cache.bn, da);
    }
    for (size_t l = blocks_[b].size(); l-- > 0;) {
      Unit &u = blocks_[b][l];
      UnitCache &cache = block_cache_[b][l];
      auto [dprev, dy] = SplitChannels(d, d.c - static_cast<size_t>(u.conv.cout));
      if (!cache.mask.empty())
        for (size_t i = 0; i < dy.v.size(); ++i) dy.v[i] *= cache.mask[i];
      Tensor3<T> da = ConvBackward<T>(u.conv, cache.act, dy);
      ReluBackward(cache.relu, &da);
      const Tensor3<T> dx = BnBackward<T>(u.bn, cache.bn, da);
      for (size_t i = 0; i < dprev.v.size(); ++i) dprev.v[i] += dx.v[i];
      d = std::move(dprev);
    }
  }
  ConvBackward<T>(conv0_, input_, d);

  if (config_.l2 > 0.0)
    for (auto &p : Params())
      if (p.grad && p.decay)
        for (size_t i = 0; i < p.value->size(); ++i)
          (*p.grad)[i] += static_cast<T>(config_.l2 * (*p.value)[i]);
  return loss;
}

template <class T>
std::vector<std::vector<ParamRef<T>>> DenseNet1D<T>::Groups() {
  std::vector<std::vector<ParamRef<T>>> groups;
  auto conv = [](const std::string &name, Conv &cv) {
    return ParamRef<T>{name + ".w", &cv.w, &cv.dw, true};
  };
  auto bn = [](const std::string &name, BatchNorm &b) {
    return std::vector<ParamRef<T>>{{name + ".gamma", &b.gamma, &b.dgamma, false},
                                    {name + ".beta", &b.beta, &b.dbeta, false},
                                    {name + ".mean", &b.mean, nullptr, false},
                                    {name + ".var", &b.var, nullptr, false}};
  };
  groups.push_back({conv("conv0", conv0_)});
  for (size_t b = 0; b < blocks_.size(); ++b) {
    for (size_t l = 0; l < blocks_[b].size(); ++l) {
      const std::string name = "block" + std::to_string(b) + ".layer" + std::to_string(l);
      auto g = bn(name + ".bn", blocks_[b][l].bn);
      g.push_back(conv(name + ".conv", blocks_[b][l].conv));
      groups.push_back(std::move(g));
    }
    if (b < transitions_.size()) {
      const std::string name = "transition" + std::to_string(b);
      auto g = bn(name + ".bn", transitions_[b].bn);
      g.push_back(conv(name + ".conv", transitions_[b].conv));
      groups.push_back(std::move(g));
    }
  }
  auto g = bn("final.bn", final_bn_);
  g.push_back({"dense.w", &dense_w_, &dense_dw_, true});
  g.push_back({"dense.b", &dense_b_, &dense_db_, false});
  groups.push_back(std::move(g));
  return groups;
}

template <class T>
std::vector<ParamRef<T>> DenseNet1D<T>::Params() {
  std::vector<ParamRef<T>> out;
  for (auto &g : Groups())
    for (auto &p : g) out.push_back(p);
  return out;
}

template <class T>
size_t DenseNet1D<T>::ParameterCount() const {
  size_t n = 0;
  for (const auto &p : const_cast<DenseNet1D *>(this)->Params())
    if (p.grad) n += p.value->size();
  return n;
}

template <class T>
std::vector<std::vector<int>> DenseNet1D<T>::LayerChannels() const {
  std::vector<std::vector<int>> out;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    std::vector<int> v;
    for (const auto &u : blocks_[b]) v.push_back(u.conv.cin + u.conv.cout);
    out.push_back(std::move(v));
  }
  return out;
}

template <class T>
nlohmann::ordered_json DenseNet1D<T>::ToJson() const {
  nlohmann::ordered_json j;
  j["kind"] = "densenet";
  j["precision"] = sizeof(T) == sizeof(float) ? "float" : "double";
  j["config"] = vpd::ToJson(config_);
  j["seed"] = seed_;
  j["params"] = nlohmann::ordered_json::array();
  for (const auto &p : const_cast<DenseNet1D *>(this)->Params())
    j["params"].push_back({{"name", p.name}, {"size", p.value->size()}, {"values", *p.value}});
  return j;
}

template <class T>
DenseNet1D<T> DenseNet1D<T>::FromJson(const nlohmann::json &j) {
  try {
    if (j.value("kind", std::string("densenet")) != "densenet")
      Fail(Errc::kData, "not a densenet model");
    DenseNet1D net(NetConfigFromJson(j.at("config")), j.at("seed").get<uint64_t>());
    auto params = net.Params();
    const auto &jp = j.at("params");
    if (jp.size() != params.size()) Fail(Errc::kData, "densenet: parameter list mismatch");
    for (size_t i = 0; i < params.size(); ++i) {
      if (jp[i].at("name").get<std::string>() != params[i].name ||
          jp[i].at("values").size() != params[i].value->size())
        Fail(Errc::kData, "densenet: parameter " + params[i].name + " does not match the config");
      *params[i].value = jp[i].at("values").get<std::vector<T>>();
    }
    return net;
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kData, std::string("densenet model: ") + e.what());
  }
}

template <class T>
void Adam<T>::Step(std::vector<ParamRef<T>> &params, int epoch) {
  if (m_.empty()) {
    for (const auto &p : params) {
      m_.emplace_back(p.value->size(), 0.0);
      v_.emplace_back(p.value->size(), 0.0);
    }
  }
  Require(m_.size() == params.size(), Errc::kDimension, "adam: parameter list changed");
  ++t_;
  const double lr = LearningRate(epoch);
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (size_t k = 0; k < params.size(); ++k) {
    if (!params[k].grad) continue;
    std::vector<T> &val = *params[k].value;
    const std::vector<T> &g = *params[k].grad;
    for (size_t i = 0; i < val.size(); ++i) {
      m_[k][i] = opts_.beta1 * m_[k][i] + (1.0 - opts_.beta1) * g[i];
      v_[k][i] = opts_.beta2 * v_[k][i] + (1.0 - opts_.beta2) * g[i] * g[i];
      const double mh = m_[k][i] / c1, vh = v_[k][i] / c2;
      val[i] = static_cast<T>(val[i] - lr * mh / (std::sqrt(vh) + opts_.eps));
    }
  }
}

template <class T>
Tensor3<T> GatherRows(const Tensor3<T> &x, std::span<const size_t> rows) {
  Tensor3<T> out(rows.size(), x.c, x.l);
  const size_t stride = x.c * x.l;
  for (size_t i = 0; i < rows.size(); ++i)
    std::copy(x.ptr(rows[i], 0), x.ptr(rows[i], 0) + stride, out.ptr(i, 0));
  return out;
}

template <class T>
NetHistory TrainNet(DenseNet1D<T> &net, const Tensor3<T> &x_train, std::span<const int> y_train,
                    std::span<const double> w_train, const Tensor3<T> &x_valid,
                    std::span<const int> y_valid, const NetTrainOptions &opts, uint64_t seed) {
  Require(y_train.size() == x_train.n && w_train.size() == x_train.n && y_valid.size() == x_valid.n,
          Errc::kDimension, "densenet: data and labels disagree on the number of rows");
  Require(x_train.n > 0 && x_valid.n > 0, Errc::kData, "densenet: empty train or valid set");
  Require(opts.epochs >= 1 && opts.batch_size >= 1 && opts.patience >= 0, Errc::kConfig,
          "densenet: invalid training options");
  Adam<T> adam(opts.adam);
  auto params = net.Params();
  NetHistory hist;
  DenseNet1D<T> best = net;
  int wait = 0;
  uint64_t step = 0;
  const size_t bs = static_cast<size_t>(opts.batch_size);
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::vector<size_t> order(x_train.n);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng(DeriveSeed(seed, static_cast<uint64_t>(epoch))).Shuffle(order);
    double loss_sum = 0.0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += bs) {
      const std::span<const size_t> rows(order.data() + start, std::min(bs, order.size() - start));
      std::vector<int> yb(rows.size());
      std::vector<double> wb(rows.size());
      for (size_t i = 0; i < rows.size(); ++i) {
        yb[i] = y_train[rows[i]];
        wb[i] = w_train[rows[i]];
      }
      const std::vector<T> p =
          net.Forward(GatherRows(x_train, rows), true, DeriveSeed(~seed, step++));
      for (size_t i = 0; i < rows.size(); ++i) correct += (p[i] >= T(0.5)) == (yb[i] == 1);
      loss_sum += net.Backward(yb, wb) * static_cast<double>(rows.size());
      adam.Step(params, epoch);
    }
    const std::vector<T> pv = net.Predict(x_valid);
    size_t vc = 0;
    for (size_t i = 0; i < pv.size(); ++i) vc += (pv[i] >= T(0.5)) == (y_valid[i] == 1);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(x_train.n);
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(x_train.n);
    rec.valid_accuracy = static_cast<double>(vc) / static_cast<double>(x_valid.n);
    hist.epochs.push_back(rec);
    spdlog::debug("epoch {}: loss {:.4f}, train accuracy {:.3f}, valid accuracy {:.3f}", epoch,
                  rec.train_loss, rec.train_accuracy, rec.valid_accuracy);
    if (rec.valid_accuracy > hist.best_valid_accuracy) {
      hist.best_valid_accuracy = rec.valid_accuracy;
      hist.best_epoch = epoch;
      best = net;
      wait = 0;
    } else if (++wait >= std::max(1, opts.patience)) {
      break;
    }
  }
  net = std::move(best);
  return hist;
}

template class DenseNet1D<float>;
template class DenseNet1D<double>;
template class Adam<float>;
template class Adam<double>;
template NetHistory TrainNet<float>(DenseNet1D<float> &, const Tensor3<float> &,
                                    std::span<const int>, std::span<const double>,
                                    const Tensor3<float> &, std::span<const int>,
                                    const NetTrainOptions &, uint64_t);
template NetHistory TrainNet<double>(DenseNet1D<double> &, const Tensor3<double> &,
                                     std::span<const int>, std::span<const double>,
                                     const Tensor3<double> &, std::span<const int>,
                                     const NetTrainOptions &, uint64_t);
template Tensor3<float> GatherRows<float>(const Tensor3<float> &, std::span<const size_t>);
template Tensor3<double> GatherRows<double>(const Tensor3<double> &, std::span<const size_t>);

}  // namespace vpd
