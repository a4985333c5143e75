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

#ifndef CLCR_REORDER_HPP_
#define CLCR_REORDER_HPP_

#include <cstdint>
#include <string>

#include "clcr/features.hpp"
#include "clcr/milp.hpp"

namespace clcr {

/// Concatenates cluster member lists in cluster_perm order. Members keep
/// their ascending row order inside each cluster.
Permutation ExpandClusterOrder(const Clustering& clustering, const Permutation& cluster_perm);

Permutation StrategyNoReorder(const MilpInstance& inst);

/// Fisher-Yates over all rows.
Permutation StrategyRandom(const MilpInstance& inst, std::uint64_t seed);

/// Rows grouped by k-means cluster, clusters in ascending id order.
Permutation StrategyClusterOrder(const MilpInstance& inst, std::size_t k, std::uint64_t seed);

/// Descending row L1 norm sum_j |a_ij|. Applied at the constraint level;
/// see README for why this baseline does not reorder variables.
Permutation StrategyCmbr(const MilpInstance& inst);

enum class CbrDirection { kHighToLow, kLowToHigh };

/// Rows sorted by nonzero count.
Permutation StrategyCbr(const MilpInstance& inst, CbrDirection direction);

enum class StrategyKind { kNone, kRandom, kCluster, kCmbr, kCbrHl, kCbrLh, kClcr };

/// CLI names: none, random, cluster, cmbr, cbr-hl, cbr-lh, clcr.
StrategyKind ParseStrategy(const std::string& name);
const char* StrategyName(StrategyKind kind);

struct StrategyOptions {
  std::uint64_t seed = 0;
  std::size_t clusters = kDefaultClusters;
};

/// Every strategy except clcr, which needs a trained model (see
/// pointer_net.hpp / harness.hpp).
Permutation HeuristicPermutation(StrategyKind kind, const MilpInstance& inst,
                                 const StrategyOptions& options);

}  // namespace clcr

#endif  // CLCR_REORDER_HPP_
