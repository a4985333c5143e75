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

#ifndef CLCR_FEATURES_HPP_
#define CLCR_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "clcr/milp.hpp"

namespace clcr {

/// A row densified to length n, with the rhs appended at position n.
struct ConstraintFeature {
  std::vector<double> raw;
  std::size_t owner = 0;  // original_index of the row
};

std::vector<ConstraintFeature> ExtractFeatures(const MilpInstance& inst);

struct Clustering {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;         // per row, in input order
  std::vector<std::vector<double>> centroids;  // k x (n+1)
  double inertia = 0.0;
  // members[c]: row positions of cluster c, ascending.
  std::vector<std::vector<std::size_t>> members;
  // Inertia after each Lloyd iteration, in the space clustering ran in.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
};

struct KMeansOptions {
  std::size_t max_iters = 100;
  bool standardize = false;  // z-score each feature column first
};

/// Lloyd's algorithm with k-means++ seeding.
///
/// Features are processed in ascending owner order so the result (per
/// owner) does not depend on the order they were supplied in. Nearest
/// centroid ties go to the lowest cluster id. An empty cluster takes the
/// point farthest from its centroid among clusters with more than one
/// member. Stops at an assignment fixpoint or after max_iters. Cluster ids
/// are then numbered by each cluster's lowest owner.
/// Requires 1 <= k <= features.size().
Clustering KMeans(std::span<const ConstraintFeature> features, std::size_t k, std::uint64_t seed,
                  const KMeansOptions& options = {});

/// Recomputes sum_i sum_{f in C_i} ||f - mu_i||^2 from the clustering.
double ComputeInertia(std::span<const ConstraintFeature> features, const Clustering& clustering);

inline constexpr std::size_t kDescriptorDim = 12;

/// Fixed-length cluster summary. Mean entries average per-row statistics
/// over members; std entries are population deviations across members.
///   0 size / m            6 mean |coeff|
///   1 mean nnz / n        7 mean rhs
///   2 mean coeff          8 std rhs
///   3 std coeff           9 fraction LE rows
///   4 min coeff          10 fraction EQ rows
///   5 max coeff          11 fraction of entries on integer variables
struct ClusterDescriptor {
  std::array<double, kDescriptorDim> summary{};
  // Plain average of member feature vectors, length n+1. Only meaningful
  // within one instance.
  std::vector<double> mean_feature;
};

ClusterDescriptor PoolCluster(const MilpInstance& inst, std::span<const std::size_t> members);

inline constexpr std::size_t kDefaultClusters = 10;

struct ClusteredInstance {
  Clustering clustering;
  std::vector<ClusterDescriptor> descriptors;  // indexed by cluster id
};

/// Clusters with k = min(k_requested, m). Requires m >= 1.
ClusteredInstance ClusterInstance(const MilpInstance& inst, std::size_t k_requested,
                                  std::uint64_t seed, const KMeansOptions& options = {});

inline constexpr const char* kClusterJsonVersion = "clcr-cluster/1";

nlohmann::json ClusteringToJson(const ClusteredInstance& c);

}  // namespace clcr

#endif  // CLCR_FEATURES_HPP_
