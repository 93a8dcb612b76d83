// models/densenet.h

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

#ifndef VPD_MODELS_DENSENET_H_
#define VPD_MODELS_DENSENET_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace vpd {

// Batch of sequences laid out (sample, channel, time), time fastest.
template <class T>
struct Tensor3 {
  size_t n = 0, c = 0, l = 0;
  std::vector<T> v;

  Tensor3() = default;
  Tensor3(size_t n_, size_t c_, size_t l_, T fill = T(0))
      : n(n_), c(c_), l(l_), v(n_ * c_ * l_, fill) {}

  T *ptr(size_t i, size_t ch) { return v.data() + (i * c + ch) * l; }
  const T *ptr(size_t i, size_t ch) const { return v.data() + (i * c + ch) * l; }
};

struct NetConfig {
  int blocks = 2;
  int layers_per_block = 2;
  int growth_rate = 5;
  int initial_filters = 10;
  double dropout = 0.3;
  double l2 = 1e-4;
  int kernel = 3;  // odd; in-block convolutions
  int channels = 13;
  int time = 74;
  double bn_momentum = 0.9;  // running = m * running + (1 - m) * batch

  void Validate() const;
};

nlohmann::ordered_json ToJson(const NetConfig &c);
NetConfig NetConfigFromJson(const nlohmann::json &j);

template <class T>
struct ParamRef {
  std::string name;
  std::vector<T> *value;
  std::vector<T> *grad;  // null for running statistics
  bool decay;            // takes the l2 penalty
};

// Initial conv (kernel 3) -> dense blocks of [BN, ReLU, conv, dropout,
// concat] -> between blocks [BN, ReLU, 1x1 conv to half the channels,
// average pool 2] -> BN, ReLU, global average pool, dense(1), sigmoid.
// Convolutions carry no bias; batch norm supplies the shift.
template <class T>
class DenseNet1D {
 public:
  DenseNet1D() = default;
  DenseNet1D(const NetConfig &config, uint64_t seed);

  const NetConfig &config() const { return config_; }
  uint64_t seed() const { return seed_; }

  // Probabilities for x of shape (batch, channels, time). Training mode uses
  // batch statistics, updates the running ones, applies dropout drawn from
  // dropout_seed, and caches what Backward needs. Throws kDimension on a
  // shape mismatch.
  std::vector<T> Forward(const Tensor3<T> &x, bool training, uint64_t dropout_seed = 0);

  // Inference in chunks of batch rows.
  std::vector<T> Predict(const Tensor3<T> &x, size_t batch = 256);

  // Mean of w * BCE over the cached batch plus l2 / 2 * sum of squared
  // weights. Requires a prior training-mode Forward.
  double Loss(std::span<const int> y, std::span<const double> w) const;

  // Fills every gradient for the cached batch and returns Loss(y, w).
  double Backward(std::span<const int> y, std::span<const double> w);

  // While frozen, training-mode passes reuse the ReLU on/off pattern of the
  // last training pass, which makes the loss smooth in the parameters for
  // finite-difference checks.
  void FreezeRelu(bool on);

  std::vector<ParamRef<T>> Params();
  size_t ParameterCount() const;  // trainable values only

  // Channel count after each in-block layer, per block.
  std::vector<std::vector<int>> LayerChannels() const;

  nlohmann::ordered_json ToJson() const;
  static DenseNet1D FromJson(const nlohmann::json &j);

  struct Conv {
    int cin = 0, cout = 0, k = 0;
    std::vector<T> w, dw;  // (cout, cin, k)
  };
  struct BatchNorm {
    int c = 0;
    std::vector<T> gamma, beta, dgamma, dbeta, mean, var;
  };
  struct Unit {  // BN -> ReLU -> conv
    BatchNorm bn;
    Conv conv;
  };

 private:
  struct BnCache {
    Tensor3<T> xhat;
    std::vector<T> invstd;
  };
  struct UnitCache {
    BnCache bn;
    Tensor3<T> act;       // ReLU output, the conv input
    size_t relu = 0;      // index into relu_masks_
    std::vector<T> mask;  // dropout scale per conv output, empty without dropout
  };

  std::vector<std::vector<ParamRef<T>>> Groups();
  Tensor3<T> RunUnit(Unit &u, const Tensor3<T> &x, bool training, UnitCache *cache);
  void ApplyRelu(Tensor3<T> *x, bool training);
  void ReluBackward(size_t index, Tensor3<T> *dy) const;

  NetConfig config_;
  uint64_t seed_ = 0;
  Conv conv0_;
  std::vector<std::vector<Unit>> blocks_;
  std::vector<Unit> transitions_;
  BatchNorm final_bn_;
  std::vector<T> dense_w_, dense_dw_, dense_b_{T(0)}, dense_db_{T(0)};

  // Training-mode cache.
  Tensor3<T> input_;
  std::vector<std::vector<UnitCache>> block_cache_;
  std::vector<UnitCache> transition_cache_;
  std::vector<size_t> pooled_from_;  // time length before each transition's pool
  BnCache final_cache_;
  Tensor3<T> final_act_;
  std::vector<std::vector<uint8_t>> relu_masks_, frozen_;
  std::vector<std::vector<double>> gap_;
  std::vector<double> logits_;
};

struct AdamOptions {
  double lr0 = 0.01;
  double decay = 1e-4;  // per epoch: lr = lr0 / (1 + decay * epoch)
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <class T>
class Adam {
 public:
  explicit Adam(AdamOptions opts = {}) : opts_(opts) {}
  double LearningRate(int epoch) const { return opts_.lr0 / (1.0 + opts_.decay * epoch); }
  // One bias-corrected step over every parameter with a gradient.
  void Step(std::vector<ParamRef<T>> &params, int epoch);
  long step_count() const { return t_; }

 private:
  AdamOptions opts_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

struct NetTrainOptions {
  int epochs = 100;
  int batch_size = 32;
  int patience = 10;
  AdamOptions adam;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;
};

struct NetHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;
  double best_valid_accuracy = -1.0;
};

// Minibatch Adam with per-epoch shuffling from seed. Stops once validation
// accuracy has not improved for `patience` epochs (patience 0 stops at the
// first non-improving epoch) and leaves the best-on-validation weights in
// net.
template <class T>
NetHistory TrainNet(DenseNet1D<T> &net, const Tensor3<T> &x_train, std::span<const int> y_train,
                    std::span<const double> w_train, const Tensor3<T> &x_valid,
                    std::span<const int> y_valid, const NetTrainOptions &opts, uint64_t seed);

// Rows of x gathered into a new tensor.
template <class T>
Tensor3<T> GatherRows(const Tensor3<T> &x, std::span<const size_t> rows);

}  // namespace vpd

#endif  // VPD_MODELS_DENSENET_H_
