// Copyright 2026 The CLCR Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLCR_POINTER_NET_HPP_
#define CLCR_POINTER_NET_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "clcr/autodiff.hpp"
#include "clcr/features.hpp"
#include "clcr/milp.hpp"

namespace clcr {

struct PointerNetConfig {
  std::size_t input_dim = kDescriptorDim;  // D
  std::size_t embed_dim = 128;             // E
  std::size_t hidden_dim = 128;            // H

  bool operator==(const PointerNetConfig&) const = default;
};

/// Pointer network weights: input projection, LSTM encoder and decoder,
/// additive attention v . tanh(W1 enc + W2 dec), learned start token, and
/// frozen per-feature input standardization.
struct PointerNetParams {
  PointerNetConfig config;
  ad::Tensor input_w;      // E x D
  ad::Tensor input_b;      // E
  ad::Tensor encoder_w;    // 4H x (E + H), gate order i, f, g, o
  ad::Tensor encoder_b;    // 4H
  ad::Tensor decoder_w;    // 4H x (E + H)
  ad::Tensor decoder_b;    // 4H
  ad::Tensor attention_w1; // H x H, applied to encoder states
  ad::Tensor attention_w2; // H x H, applied to the decoder state
  ad::Tensor attention_v;  // H
  ad::Tensor start_token;  // E
  std::vector<double> feature_mean;
  std::vector<double> feature_std;

  /// Every weight uniform in [-1/sqrt(H), 1/sqrt(H)]; identity standardization.
  static PointerNetParams Init(const PointerNetConfig& config, std::uint64_t seed);

  /// Visits every trainable tensor with a stable name.
  void ForEach(const std::function<void(const std::string&, ad::Tensor&)>& fn);
  void ForEach(const std::function<void(const std::string&, const ad::Tensor&)>& fn) const;
  void ZeroGrad();
  std::size_t NumWeights() const;
  bool AllFinite() const;
};

/// Per-cluster input vectors, one per cluster id, each of length D.
using DescriptorSet = std::vector<std::vector<double>>;

DescriptorSet ToDescriptorSet(std::span<const ClusterDescriptor> descriptors);

/// Stepwise log-probabilities for a teacher-forced or free decode.
struct DecodeTrace {
  std::vector<std::size_t> choices;
  std::vector<double> step_log_probs;           // chosen entry per step
  std::vector<std::vector<double>> step_logits; // masked log-softmax per step
  double log_prob = 0.0;
};

/// log p(perm | descriptors) = sum_j log p(perm[j] | perm[<j]). Clusters
/// already chosen are masked out of every later step.
double ForwardScore(const PointerNetParams& params, const DescriptorSet& descriptors,
                    const Permutation& perm);

/// Same sum over a prefix of a permutation (length <= k).
double ScorePrefix(const PointerNetParams& params, const DescriptorSet& descriptors,
                   std::span<const std::size_t> prefix);

struct PermutationSample {
  Permutation perm;
  double log_prob = 0.0;
  std::vector<std::vector<double>> step_logits;
};

/// Ancestral sampling from the masked stepwise distributions.
PermutationSample SamplePermutation(const PointerNetParams& params, const DescriptorSet& descriptors,
                                    std::uint64_t seed);

/// Argmax at every step; ties go to the lowest cluster id.
Permutation GreedyDecode(const PointerNetParams& params, const DescriptorSet& descriptors);

enum class SampleLabel { kPositive, kNegative };

struct TrainingSample {
  std::string instance;
  DescriptorSet descriptors;
  Permutation perm;
  SampleLabel label = SampleLabel::kPositive;
  double reward = 0.0;  // seconds saved against the unpermuted baseline
};

/// -mean_{positives} log p + mean_{negatives} log p. A label class absent
/// from the batch contributes 0. With `accumulate_grad`, adds d loss / d
/// theta into the parameter gradient buffers (callers zero them first).
double ContrastiveLoss(PointerNetParams& params, std::span<const TrainingSample> batch,
                       bool accumulate_grad = false);
double ContrastiveLoss(const PointerNetParams& params, std::span<const TrainingSample> batch);

/// Adam with bias correction.
class Adam {
 public:
  Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void Step(PointerNetParams& params);
  std::size_t steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

struct TrainConfig {
  std::size_t epochs = 1000;  // T
  std::size_t batch_size = 8; // B
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
};

nlohmann::json TrainConfigToJson(const TrainConfig& c);
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double mean_positive_log_prob = 0.0;  // over the epoch's batches, pre-update
  std::optional<double> validation_loss;
};

struct TrainResult {
  PointerNetParams params;
  std::vector<EpochLog> log;
  std::optional<std::size_t> best_epoch;  // when a validation set was given
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Sets the frozen input standardization from the training descriptors.
void FitNormalization(PointerNetParams& params, std::span<const TrainingSample> dataset);

/// Mini-batch Adam over shuffled samples for config.epochs epochs. With a
/// nonempty validation set, returns the parameters of the epoch with the
/// lowest validation loss. Throws TrainingError on a non-finite loss.
TrainResult Train(const PointerNetParams& init, std::span<const TrainingSample> dataset,
                  const TrainConfig& config, std::span<const TrainingSample> validation = {},
                  const std::function<void(const EpochLog&)>& on_epoch = {});

inline constexpr const char* kCheckpointVersion = "clcr-ckpt/1";

nlohmann::json CheckpointToJson(const PointerNetParams& params,
                                const nlohmann::json& training_config = nullptr);
PointerNetParams CheckpointFromJson(const nlohmann::json& j);
void SaveCheckpoint(const PointerNetParams& params, const std::string& path,
                    const nlohmann::json& training_config = nullptr);
PointerNetParams LoadCheckpoint(const std::string& path);

}  // namespace clcr

#endif  // CLCR_POINTER_NET_HPP_
