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

#include "clcr/pointer_net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace clcr {
namespace {

using ad::Tape;
using ad::Tensor;
using ad::Var;

void FillUniform(Tensor& t, Rng& rng, double bound) {
  for (double& v : t.value) v = rng.Uniform(-bound, bound);
}

// Graph of one decode. Binds parameters as trainable leaves when
// `trainable` is set, otherwise as frozen constants.
class DecodeGraph {
 public:
  using Chooser = std::function<std::size_t(std::size_t step, std::span<const double> log_probs)>;

  DecodeGraph(Tape& tape, const PointerNetParams& params, PointerNetParams* trainable)
      : tape_(tape), p_(params) {
    auto bind = [&](const Tensor& t, Tensor* mut) { return mut ? tape_.Param(*mut) : tape_.Frozen(t); };
    auto* m = trainable;
    input_w_ = bind(p_.input_w, m ? &m->input_w : nullptr);
    input_b_ = bind(p_.input_b, m ? &m->input_b : nullptr);
    enc_w_ = bind(p_.encoder_w, m ? &m->encoder_w : nullptr);
    enc_b_ = bind(p_.encoder_b, m ? &m->encoder_b : nullptr);
    dec_w_ = bind(p_.decoder_w, m ? &m->decoder_w : nullptr);
    dec_b_ = bind(p_.decoder_b, m ? &m->decoder_b : nullptr);
    w1_ = bind(p_.attention_w1, m ? &m->attention_w1 : nullptr);
    w2_ = bind(p_.attention_w2, m ? &m->attention_w2 : nullptr);
    v_ = bind(p_.attention_v, m ? &m->attention_v : nullptr);
    start_ = bind(p_.start_token, m ? &m->start_token : nullptr);
  }

  // Returns the summed log-probability of the chosen steps.
  Var Run(const DescriptorSet& descriptors, std::size_t steps, const Chooser& choose,
          DecodeTrace* trace) {
    const std::size_t k = descriptors.size();
    const std::size_t D = p_.config.input_dim, E = p_.config.embed_dim, H = p_.config.hidden_dim;
    if (k == 0) throw Error("pointer network needs at least one cluster");
    if (steps > k) throw Error("decode longer than the number of clusters");

    std::vector<Var> embed;
    for (const auto& d : descriptors) {
      if (d.size() != D) {
        throw Error("descriptor has dimension " + std::to_string(d.size()) + ", network expects " +
                    std::to_string(D));
      }
      std::vector<double> x(D);
      for (std::size_t t = 0; t < D; ++t) x[t] = (d[t] - p_.feature_mean[t]) / p_.feature_std[t];
      embed.push_back(tape_.Add(tape_.MatVec(input_w_, E, D, tape_.Constant(std::move(x))), input_b_));
    }

    Var h = tape_.Constant(std::vector<double>(H, 0.0));
    Var c = tape_.Constant(std::vector<double>(H, 0.0));
    std::vector<Var> ref;
    for (std::size_t i = 0; i < k; ++i) {
      Lstm(enc_w_, enc_b_, embed[i], h, c);
      ref.push_back(tape_.MatVec(w1_, H, H, h));
    }

    std::vector<bool> masked(k, false);
    std::vector<Var> picks;
    Var input = start_;
    const Var zero = tape_.Constant({0.0});
    for (std::size_t step = 0; step < steps; ++step) {
      Lstm(dec_w_, dec_b_, input, h, c);
      const Var query = tape_.MatVec(w2_, H, H, h);
      std::vector<Var> logits;
      for (std::size_t i = 0; i < k; ++i) {
        logits.push_back(masked[i] ? zero : tape_.Dot(v_, tape_.Tanh(tape_.Add(ref[i], query))));
      }
      const Var lp = tape_.MaskedLogSoftmax(tape_.Stack(logits), masked);
      const auto values = tape_.value(lp);
      const std::size_t choice = choose(step, values);
      if (choice >= k || masked[choice]) {
        throw Error("decode chose cluster " + std::to_string(choice) + " which is not available");
      }
      picks.push_back(tape_.Pick(lp, choice));
      if (trace) {
        trace->choices.push_back(choice);
        trace->step_log_probs.push_back(values[choice]);
        trace->step_logits.emplace_back(values.begin(), values.end());
      }
      masked[choice] = true;
      input = embed[choice];
    }
    const Var total = picks.empty() ? tape_.Constant({0.0}) : tape_.Sum(picks);
    if (trace) trace->log_prob = tape_.scalar(total);
    return total;
  }

 private:
  void Lstm(Var w, Var b, Var x, Var& h, Var& c) {
    const std::size_t E = p_.config.embed_dim, H = p_.config.hidden_dim;
    const Var z = tape_.Add(tape_.MatVec(w, 4 * H, E + H, tape_.Concat(x, h)), b);
    const Var in = tape_.Sigmoid(tape_.Slice(z, 0, H));
    const Var forget = tape_.Sigmoid(tape_.Slice(z, H, H));
    const Var cell = tape_.Tanh(tape_.Slice(z, 2 * H, H));
    const Var out = tape_.Sigmoid(tape_.Slice(z, 3 * H, H));
    c = tape_.Add(tape_.Mul(forget, c), tape_.Mul(in, cell));
    h = tape_.Mul(out, tape_.Tanh(c));
  }

  Tape& tape_;
  const PointerNetParams& p_;
  Var input_w_, input_b_, enc_w_, enc_b_, dec_w_, dec_b_, w1_, w2_, v_, start_;
};

DecodeGraph::Chooser TeacherForced(std::span<const std::size_t> order) {
  return [order](std::size_t step, std::span<const double>) { return order[step]; };
}

struct LossParts {
  double loss = 0.0;
  double mean_positive = 0.0;
  std::size_t positives = 0;
};

LossParts LossOver(const PointerNetParams& params, PointerNetParams* trainable,
                   std::span<const TrainingSample* const> batch) {
  std::size_t num_pos = 0, num_neg = 0;
  for (const auto* s : batch) (s->label == SampleLabel::kPositive ? num_pos : num_neg)++;
  double pos_sum = 0.0, neg_sum = 0.0;
  for (const auto* s : batch) {
    if (s->perm.size() != s->descriptors.size()) {
      throw Error("training sample '" + s->instance + "': permutation length does not match k");
    }
    Tape tape;
    DecodeGraph graph(tape, params, trainable);
    const Var lp = graph.Run(s->descriptors, s->perm.size(), TeacherForced(s->perm.order()), nullptr);
    const double value = tape.scalar(lp);
    if (s->label == SampleLabel::kPositive) {
      pos_sum += value;
      if (trainable) tape.Backward(lp, -1.0 / static_cast<double>(num_pos));
    } else {
      neg_sum += value;
      if (trainable) tape.Backward(lp, 1.0 / static_cast<double>(num_neg));
    }
  }
  LossParts parts;
  const double pos_mean = num_pos ? pos_sum / static_cast<double>(num_pos) : 0.0;
  const double neg_mean = num_neg ? neg_sum / static_cast<double>(num_neg) : 0.0;
  parts.loss = -pos_mean + neg_mean;
  parts.mean_positive = pos_mean;
  parts.positives = num_pos;
  return parts;
}

std::vector<const TrainingSample*> Pointers(std::span<const TrainingSample> samples) {
  std::vector<const TrainingSample*> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(&s);
  return out;
}

}  // namespace

PointerNetParams PointerNetParams::Init(const PointerNetConfig& config, std::uint64_t seed) {
  const std::size_t D = config.input_dim, E = config.embed_dim, H = config.hidden_dim;
  if (D == 0 || E == 0 || H == 0) throw Error("pointer network dimensions must be positive");
  PointerNetParams p;
  p.config = config;
  p.input_w = Tensor(E, D);
  p.input_b = Tensor(E, 1);
  p.encoder_w = Tensor(4 * H, E + H);
  p.encoder_b = Tensor(4 * H, 1);
  p.decoder_w = Tensor(4 * H, E + H);
  p.decoder_b = Tensor(4 * H, 1);
  p.attention_w1 = Tensor(H, H);
  p.attention_w2 = Tensor(H, H);
  p.attention_v = Tensor(H, 1);
  p.start_token = Tensor(E, 1);
  p.feature_mean.assign(D, 0.0);
  p.feature_std.assign(D, 1.0);
  Rng rng(DeriveSeed(seed, "pointer-net-init"));
  const double bound = 1.0 / std::sqrt(static_cast<double>(H));
  p.ForEach([&](const std::string&, Tensor& t) { FillUniform(t, rng, bound); });
  return p;
}

void PointerNetParams::ForEach(const std::function<void(const std::string&, Tensor&)>& fn) {
  fn("input_proj.weight", input_w);
  fn("input_proj.bias", input_b);
  fn("encoder.weight", encoder_w);
  fn("encoder.bias", encoder_b);
  fn("decoder.weight", decoder_w);
  fn("decoder.bias", decoder_b);
  fn("attention.w1", attention_w1);
  fn("attention.w2", attention_w2);
  fn("attention.v", attention_v);
  fn("start_token", start_token);
}

void PointerNetParams::ForEach(
    const std::function<void(const std::string&, const Tensor&)>& fn) const {
  const_cast<PointerNetParams*>(this)->ForEach(
      [&](const std::string& name, Tensor& t) { fn(name, t); });
}

void PointerNetParams::ZeroGrad() {
  ForEach([](const std::string&, Tensor& t) { t.ZeroGrad(); });
}

std::size_t PointerNetParams::NumWeights() const {
  std::size_t n = 0;
  ForEach([&](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

bool PointerNetParams::AllFinite() const {
  bool ok = true;
  ForEach([&](const std::string&, const Tensor& t) {
    for (double v : t.value) ok = ok && std::isfinite(v);
  });
  return ok;
}

DescriptorSet ToDescriptorSet(std::span<const ClusterDescriptor> descriptors) {
  DescriptorSet out;
  for (const auto& d : descriptors) out.emplace_back(d.summary.begin(), d.summary.end());
  return out;
}

double ForwardScore(const PointerNetParams& params, const DescriptorSet& descriptors,
                    const Permutation& perm) {
  if (descriptors.empty()) throw Error("forward score needs k >= 1");
  if (perm.size() != descriptors.size()) {
    throw Error("permutation length " + std::to_string(perm.size()) + " does not match k=" +
                std::to_string(descriptors.size()));
  }
  return ScorePrefix(params, descriptors, perm.order());
}

double ScorePrefix(const PointerNetParams& params, const DescriptorSet& descriptors,
                   std::span<const std::size_t> prefix) {
  Tape tape;
  DecodeGraph graph(tape, params, nullptr);
  return tape.scalar(graph.Run(descriptors, prefix.size(), TeacherForced(prefix), nullptr));
}

PermutationSample SamplePermutation(const PointerNetParams& params, const DescriptorSet& descriptors,
                                    std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, "pointer-net-sample"));
  Tape tape;
  DecodeGraph graph(tape, params, nullptr);
  DecodeTrace trace;
  graph.Run(
      descriptors, descriptors.size(),
      [&](std::size_t, std::span<const double> lp) {
        const double u = rng.Uniform();
        double cum = 0.0;
        std::size_t last = lp.size();
        for (std::size_t i = 0; i < lp.size(); ++i) {
          if (std::isinf(lp[i])) continue;
          last = i;
          cum += std::exp(lp[i]);
          if (u < cum) return i;
        }
        return last;  // rounding left u above the cumulative mass
      },
      &trace);
  PermutationSample out;
  out.perm = Permutation(trace.choices);
  out.log_prob = trace.log_prob;
  out.step_logits = std::move(trace.step_logits);
  return out;
}

Permutation GreedyDecode(const PointerNetParams& params, const DescriptorSet& descriptors) {
  Tape tape;
  DecodeGraph graph(tape, params, nullptr);
  DecodeTrace trace;
  graph.Run(
      descriptors, descriptors.size(),
      [](std::size_t, std::span<const double> lp) {
        std::size_t best = lp.size();
        for (std::size_t i = 0; i < lp.size(); ++i) {
          if (std::isinf(lp[i])) continue;
          if (best == lp.size() || lp[i] > lp[best]) best = i;
        }
        return best;
      },
      &trace);
  return Permutation(trace.choices);
}

double ContrastiveLoss(PointerNetParams& params, std::span<const TrainingSample> batch,
                       bool accumulate_grad) {
  const auto ptrs = Pointers(batch);
  return LossOver(params, accumulate_grad ? &params : nullptr, ptrs).loss;
}

double ContrastiveLoss(const PointerNetParams& params, std::span<const TrainingSample> batch) {
  const auto ptrs = Pointers(batch);
  return LossOver(params, nullptr, ptrs).loss;
}

void Adam::Step(PointerNetParams& params) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::size_t idx = 0;
  params.ForEach([&](const std::string&, Tensor& t) {
    if (m_.size() <= idx) {
      m_.emplace_back(t.size(), 0.0);
      v_.emplace_back(t.size(), 0.0);
    }
    auto& m = m_[idx];
    auto& v = v_[idx];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double g = t.grad[i];
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      t.value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
    ++idx;
  });
}

nlohmann::json TrainConfigToJson(const TrainConfig& c) {
  return {{"epochs", c.epochs}, {"batch_size", c.batch_size}, {"lr", c.lr}, {"beta1", c.beta1},
          {"beta2", c.beta2},   {"eps", c.eps},               {"seed", c.seed}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr = j.value("lr", c.lr);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.eps = j.value("eps", c.eps);
  c.seed = j.value("seed", c.seed);
  return c;
}

void FitNormalization(PointerNetParams& params, std::span<const TrainingSample> dataset) {
  const std::size_t D = params.config.input_dim;
  std::vector<double> sum(D, 0.0), sq(D, 0.0);
  double count = 0.0;
  for (const auto& s : dataset) {
    for (const auto& d : s.descriptors) {
      if (d.size() != D) throw Error("descriptor dimension mismatch while fitting normalization");
      for (std::size_t t = 0; t < D; ++t) sum[t] += d[t];
      count += 1.0;
    }
  }
  if (count == 0.0) return;
  for (std::size_t t = 0; t < D; ++t) sum[t] /= count;
  for (const auto& s : dataset) {
    for (const auto& d : s.descriptors) {
      for (std::size_t t = 0; t < D; ++t) sq[t] += (d[t] - sum[t]) * (d[t] - sum[t]);
    }
  }
  for (std::size_t t = 0; t < D; ++t) {
    const double sd = std::sqrt(sq[t] / count);
    params.feature_mean[t] = sum[t];
    params.feature_std[t] = sd > 1e-12 ? sd : 1.0;
  }
}

TrainResult Train(const PointerNetParams& init, std::span<const TrainingSample> dataset,
                  const TrainConfig& config, std::span<const TrainingSample> validation,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  if (dataset.empty()) throw Error("training needs a nonempty dataset");
  if (config.batch_size == 0) throw Error("batch size must be positive");
  TrainResult result;
  result.params = init;
  PointerNetParams& params = result.params;
  Adam adam(config.lr, config.beta1, config.beta2, config.eps);
  Rng rng(DeriveSeed(config.seed, "train-shuffle"));
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::optional<double> best_val;
  PointerNetParams best;
  const auto val_ptrs = Pointers(validation);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0.0, pos_sum = 0.0;
    std::size_t batches = 0, pos_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<const TrainingSample*> batch;
      for (std::size_t t = start; t < end; ++t) batch.push_back(&dataset[order[t]]);
      params.ZeroGrad();
      const LossParts parts = LossOver(params, &params, batch);
      if (!std::isfinite(parts.loss)) {
        std::string ids;
        for (std::size_t t = start; t < end; ++t) {
          ids += (ids.empty() ? "" : ",") + std::to_string(order[t]);
        }
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch samples [" + ids + "]");
      }
      adam.Step(params);
      if (!params.AllFinite()) {
        throw TrainingError("non-finite parameters after update at epoch " + std::to_string(epoch));
      }
      loss_sum += parts.loss;
      if (parts.positives) {
        pos_sum += parts.mean_positive;
        ++pos_batches;
      }
      ++batches;
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.mean_loss = loss_sum / static_cast<double>(batches);
    entry.mean_positive_log_prob = pos_batches ? pos_sum / static_cast<double>(pos_batches) : 0.0;
    if (!validation.empty()) {
      entry.validation_loss = LossOver(params, nullptr, val_ptrs).loss;
      if (!best_val || *entry.validation_loss < *best_val) {
        best_val = entry.validation_loss;
        best = params;
        result.best_epoch = epoch;
      }
    }
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  if (result.best_epoch) params = best;
  params.ZeroGrad();
  return result;
}

nlohmann::json CheckpointToJson(const PointerNetParams& params, const nlohmann::json& training_config) {
  nlohmann::json j;
  j["version"] = kCheckpointVersion;
  j["config"] = {{"input_dim", params.config.input_dim},
                 {"embed_dim", params.config.embed_dim},
                 {"hidden_dim", params.config.hidden_dim}};
  nlohmann::json tensors = nlohmann::json::object();
  params.ForEach([&](const std::string& name, const Tensor& t) {
    tensors[name] = {{"shape", {t.rows, t.cols}}, {"data", t.value}};
  });
  j["tensors"] = tensors;
  j["normalization"] = {{"mean", params.feature_mean}, {"std", params.feature_std}};
  j["training"] = training_config;
  return j;
}

PointerNetParams CheckpointFromJson(const nlohmann::json& j) {
  try {
    if (j.value("version", std::string()) != kCheckpointVersion) {
      throw Error(std::string("expected checkpoint version ") + kCheckpointVersion);
    }
    PointerNetConfig config;
    config.input_dim = j.at("config").at("input_dim").get<std::size_t>();
    config.embed_dim = j.at("config").at("embed_dim").get<std::size_t>();
    config.hidden_dim = j.at("config").at("hidden_dim").get<std::size_t>();
    PointerNetParams p = PointerNetParams::Init(config, 0);
    const auto& tensors = j.at("tensors");
    p.ForEach([&](const std::string& name, Tensor& t) {
      const auto& entry = tensors.at(name);
      const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
      if (shape.size() != 2 || shape[0] != t.rows || shape[1] != t.cols) {
        throw Error("checkpoint tensor '" + name + "' has the wrong shape");
      }
      t.value = entry.at("data").get<std::vector<double>>();
      if (t.value.size() != t.rows * t.cols) throw Error("checkpoint tensor '" + name + "' is truncated");
    });
    p.feature_mean = j.at("normalization").at("mean").get<std::vector<double>>();
    p.feature_std = j.at("normalization").at("std").get<std::vector<double>>();
    if (p.feature_mean.size() != config.input_dim || p.feature_std.size() != config.input_dim) {
      throw Error("checkpoint normalization has the wrong dimension");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const PointerNetParams& params, const std::string& path,
                    const nlohmann::json& training_config) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << CheckpointToJson(params, training_config).dump() << "\n";
}

PointerNetParams LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("'" + path + "': " + e.what());
  }
  return CheckpointFromJson(j);
}

}  // namespace clcr
