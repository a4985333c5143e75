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

#include "clcr/reorder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace clcr {
namespace {

// Stable sort of row positions by key; ties keep original position order.
template <typename Key, typename Cmp>
Permutation SortRows(const MilpInstance& inst, Key key, Cmp cmp) {
  std::vector<std::size_t> order(inst.num_cons());
  std::iota(order.begin(), order.end(), 0);
  std::vector<decltype(key(inst.rows[0]))> keys;
  keys.reserve(order.size());
  for (const auto& row : inst.rows) keys.push_back(key(row));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cmp(keys[a], keys[b]); });
  return Permutation(std::move(order));
}

}  // namespace

Permutation ExpandClusterOrder(const Clustering& clustering, const Permutation& cluster_perm) {
  if (cluster_perm.size() != clustering.k || clustering.members.size() != clustering.k) {
    throw Error("cluster permutation length " + std::to_string(cluster_perm.size()) +
                " does not match k=" + std::to_string(clustering.k));
  }
  std::vector<std::size_t> order;
  for (std::size_t c : cluster_perm.order()) {
    const auto& m = clustering.members[c];
    order.insert(order.end(), m.begin(), m.end());
  }
  return Permutation(std::move(order));
}

Permutation StrategyNoReorder(const MilpInstance& inst) {
  return Permutation::Identity(inst.num_cons());
}

Permutation StrategyRandom(const MilpInstance& inst, std::uint64_t seed) {
  std::vector<std::size_t> order(inst.num_cons());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(seed, "strategy-random"));
  rng.Shuffle(order);
  return Permutation(std::move(order));
}

Permutation StrategyClusterOrder(const MilpInstance& inst, std::size_t k, std::uint64_t seed) {
  if (inst.num_cons() == 0) return Permutation();
  const auto clustered = ClusterInstance(inst, k, seed);
  return ExpandClusterOrder(clustered.clustering, Permutation::Identity(clustered.clustering.k));
}

Permutation StrategyCmbr(const MilpInstance& inst) {
  if (inst.num_cons() == 0) return Permutation();
  return SortRows(
      inst,
      [](const Constraint& row) {
        double s = 0.0;
        for (const auto& e : row.entries) s += std::abs(e.coeff);
        return s;
      },
      [](double a, double b) { return a > b; });
}

Permutation StrategyCbr(const MilpInstance& inst, CbrDirection direction) {
  if (inst.num_cons() == 0) return Permutation();
  const bool high_first = direction == CbrDirection::kHighToLow;
  return SortRows(
      inst, [](const Constraint& row) { return row.entries.size(); },
      [high_first](std::size_t a, std::size_t b) { return high_first ? a > b : a < b; });
}

StrategyKind ParseStrategy(const std::string& name) {
  if (name == "none") return StrategyKind::kNone;
  if (name == "random") return StrategyKind::kRandom;
  if (name == "cluster") return StrategyKind::kCluster;
  if (name == "cmbr") return StrategyKind::kCmbr;
  if (name == "cbr-hl") return StrategyKind::kCbrHl;
  if (name == "cbr-lh") return StrategyKind::kCbrLh;
  if (name == "clcr") return StrategyKind::kClcr;
  throw Error("unknown strategy '" + name +
              "' (expected none, random, cluster, cmbr, cbr-hl, cbr-lh, clcr)");
}

const char* StrategyName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kNone:
      return "none";
    case StrategyKind::kRandom:
      return "random";
    case StrategyKind::kCluster:
      return "cluster";
    case StrategyKind::kCmbr:
      return "cmbr";
    case StrategyKind::kCbrHl:
      return "cbr-hl";
    case StrategyKind::kCbrLh:
      return "cbr-lh";
    case StrategyKind::kClcr:
      return "clcr";
  }
  return "?";
}

Permutation HeuristicPermutation(StrategyKind kind, const MilpInstance& inst,
                                 const StrategyOptions& options) {
  switch (kind) {
    case StrategyKind::kNone:
      return StrategyNoReorder(inst);
    case StrategyKind::kRandom:
      return StrategyRandom(inst, options.seed);
    case StrategyKind::kCluster:
      return StrategyClusterOrder(inst, options.clusters, options.seed);
    case StrategyKind::kCmbr:
      return StrategyCmbr(inst);
    case StrategyKind::kCbrHl:
      return StrategyCbr(inst, CbrDirection::kHighToLow);
    case StrategyKind::kCbrLh:
      return StrategyCbr(inst, CbrDirection::kLowToHigh);
    case StrategyKind::kClcr:
      break;
  }
  throw Error("strategy clcr needs a trained model");
}

}  // namespace clcr
