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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "clcr/features.hpp"
#include "clcr/generators.hpp"
#include "clcr/reorder.hpp"

namespace clcr {
namespace {

ConstraintFeature Point(std::size_t owner, std::vector<double> raw) { return {std::move(raw), owner}; }

std::vector<ConstraintFeature> RandomFeatures(std::size_t m, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<ConstraintFeature> out;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> raw(dim);
    for (double& v : raw) v = normal(gen) + 4.0 * static_cast<double>(i % 3);
    out.push_back(Point(i, raw));
  }
  return out;
}

TEST(ExtractFeatures, DensifiesRowAndAppendsRhs) {
  MilpInstance inst;
  inst.num_vars = 3;
  inst.objective = {0, 0, 0};
  inst.bounds.assign(3, {});
  inst.is_integer.assign(3, false);
  inst.rows.push_back({{{0, 2.0}}, Sense::kLE, 5.0, 0});
  const auto f = ExtractFeatures(inst);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].raw, (std::vector<double>{2, 0, 0, 5}));
  EXPECT_EQ(f[0].owner, 0u);
}

TEST(ExtractFeatures, ReconstructsMatrixAndRhs) {
  MilpInstance inst = GenerateRandomMilp({9, 7, 0.5, 21}).instance;
  inst = ApplyConstraintPermutation(inst, StrategyRandom(inst, 2));
  const auto f = ExtractFeatures(inst);
  ASSERT_EQ(f.size(), inst.num_cons());
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(f[i].owner, inst.rows[i].original_index);
    ASSERT_EQ(f[i].raw.size(), inst.num_vars + 1);
    std::vector<Entry> rebuilt;
    for (std::size_t j = 0; j < inst.num_vars; ++j) {
      if (f[i].raw[j] != 0.0) rebuilt.push_back({j, f[i].raw[j]});
    }
    EXPECT_EQ(rebuilt, inst.rows[i].entries);
    EXPECT_EQ(f[i].raw.back(), inst.rows[i].rhs);
  }
}

TEST(KMeans, TwoSeparatedPairsMatchBestPartition) {
  const std::vector<ConstraintFeature> pts = {Point(0, {0, 0}), Point(1, {10, 10}), Point(2, {0, 1}),
                                              Point(3, {10, 12})};
  // Enumerate every 2-partition and take the cheapest.
  double best = 1e300;
  std::vector<int> best_side;
  for (int mask = 1; mask < 15; ++mask) {
    double cost = 0;
    for (int side = 0; side < 2; ++side) {
      std::vector<std::size_t> idx;
      for (int i = 0; i < 4; ++i) {
        if ((mask >> i & 1) == side) idx.push_back(i);
      }
      for (int d = 0; d < 2; ++d) {
        double mean = 0;
        for (auto i : idx) mean += pts[i].raw[d];
        mean /= static_cast<double>(idx.size());
        for (auto i : idx) cost += (pts[i].raw[d] - mean) * (pts[i].raw[d] - mean);
      }
    }
    if (cost < best) best = cost;
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Clustering c = KMeans(pts, 2, seed);
    EXPECT_EQ(c.assignment[0], c.assignment[2]);
    EXPECT_EQ(c.assignment[1], c.assignment[3]);
    EXPECT_NE(c.assignment[0], c.assignment[1]);
    EXPECT_NEAR(c.inertia, best, 1e-12);
    EXPECT_NEAR(c.inertia, 0.5 + 2.0, 1e-12);
  }
}

TEST(KMeans, SingleClusterCentroidIsMean) {
  const auto pts = RandomFeatures(17, 5, 3);
  const Clustering c = KMeans(pts, 1, 0);
  for (std::size_t d = 0; d < 5; ++d) {
    double mean = 0;
    for (const auto& p : pts) mean += p.raw[d];
    EXPECT_NEAR(c.centroids[0][d], mean / 17.0, 1e-12);
  }
  EXPECT_EQ(c.members[0].size(), 17u);
}

TEST(KMeans, OneClusterPerPointHasZeroInertia) {
  const auto pts = RandomFeatures(12, 4, 8);
  const Clustering c = KMeans(pts, 12, 1);
  EXPECT_EQ(c.inertia, 0.0);
  for (const auto& m : c.members) EXPECT_EQ(m.size(), 1u);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(c.assignment[i], i);
}

TEST(KMeans, DuplicatePointsStillFillEveryCluster) {
  std::vector<ConstraintFeature> pts;
  for (std::size_t i = 0; i < 6; ++i) pts.push_back(Point(i, {1.0, 2.0}));
  const Clustering c = KMeans(pts, 4, 5);
  for (const auto& m : c.members) EXPECT_FALSE(m.empty());
  EXPECT_EQ(c.inertia, 0.0);
}

TEST(KMeans, InertiaNonIncreasingAndConsistent) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto pts = RandomFeatures(40, 6, s);
    const Clustering c = KMeans(pts, 5, s);
    for (std::size_t t = 1; t < c.inertia_history.size(); ++t) {
      EXPECT_LE(c.inertia_history[t], c.inertia_history[t - 1] * (1 + 1e-12));
    }
    EXPECT_NEAR(ComputeInertia(pts, c), c.inertia, 1e-9 * std::max(1.0, c.inertia));
  }
}

TEST(KMeans, InvariantToSupplyOrder) {
  const auto pts = RandomFeatures(30, 4, 77);
  auto shuffled = pts;
  std::mt19937_64 gen(1);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  const Clustering a = KMeans(pts, 4, 9);
  const Clustering b = KMeans(shuffled, 4, 9);
  std::map<std::size_t, std::size_t> by_owner;
  for (std::size_t i = 0; i < pts.size(); ++i) by_owner[pts[i].owner] = a.assignment[i];
  for (std::size_t i = 0; i < shuffled.size(); ++i) EXPECT_EQ(b.assignment[i], by_owner[shuffled[i].owner]);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(KMeans, RejectsBadK) {
  const auto pts = RandomFeatures(3, 2, 0);
  EXPECT_THROW(KMeans(pts, 0, 0), Error);
  EXPECT_THROW(KMeans(pts, 4, 0), Error);
}

MilpInstance InstanceFromRows(std::vector<Constraint> rows, std::size_t n) {
  MilpInstance inst;
  inst.num_vars = n;
  inst.objective.assign(n, 1.0);
  inst.bounds.assign(n, {0, 1});
  inst.is_integer.assign(n, true);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].original_index = i;
  inst.rows = std::move(rows);
  return inst;
}

TEST(PoolCluster, SingleRow) {
  MilpInstance inst = InstanceFromRows({{{{0, 1.0}, {2, 3.0}}, Sense::kEQ, 4.0, 0}, {{{1, -1.0}}, Sense::kLE, 0, 0}}, 4);
  inst.is_integer[2] = false;
  const ClusterDescriptor d = PoolCluster(inst, std::vector<std::size_t>{0});
  const std::array<double, kDescriptorDim> expected = {0.5, 0.5, 2.0, 0.0, 1.0, 3.0, 2.0, 4.0, 0.0, 0.0, 1.0, 0.5};
  EXPECT_EQ(d.summary, expected);
  EXPECT_EQ(d.mean_feature, (std::vector<double>{1, 0, 3, 0, 4}));
}

TEST(PoolCluster, DuplicateRowsAreIdempotentPastSize) {
  const Constraint row{{{0, 2.0}, {1, -3.0}}, Sense::kGE, 7.0, 0};
  const MilpInstance inst = InstanceFromRows({row, row, {{{2, 1.0}}, Sense::kLE, 1, 0}}, 3);
  const auto one = PoolCluster(inst, std::vector<std::size_t>{0});
  const auto two = PoolCluster(inst, std::vector<std::size_t>{0, 1});
  EXPECT_NE(one.summary[0], two.summary[0]);
  for (std::size_t i = 1; i < kDescriptorDim; ++i) EXPECT_EQ(one.summary[i], two.summary[i]) << i;
  EXPECT_EQ(two.summary[3], 0.0);
  EXPECT_EQ(two.summary[8], 0.0);
}

TEST(PoolCluster, MeanRhsAndOrderFree) {
  const MilpInstance inst = GenerateRandomMilp({10, 12, 0.5, 4}).instance;
  const std::vector<std::size_t> members = {1, 4, 5, 9, 11};
  double rhs = 0;
  for (auto r : members) rhs += inst.rows[r].rhs;
  const auto d = PoolCluster(inst, members);
  EXPECT_NEAR(d.summary[7], rhs / 5.0, 1e-12);
  for (double v : d.summary) EXPECT_TRUE(std::isfinite(v));
  for (std::size_t i : {0, 1, 9, 10, 11}) {
    EXPECT_GE(d.summary[i], 0.0);
    EXPECT_LE(d.summary[i], 1.0);
  }
  const std::vector<std::size_t> reversed(members.rbegin(), members.rend());
  EXPECT_EQ(PoolCluster(inst, reversed).summary, d.summary);
  EXPECT_THROW(PoolCluster(inst, std::vector<std::size_t>{}), Error);
}

TEST(ClusterInstance, ClampsK) {
  const MilpInstance inst = GenerateRandomMilp({4, 3, 1.0, 0}).instance;
  const auto c = ClusterInstance(inst, 10, 0);
  EXPECT_EQ(c.clustering.k, 3u);
  EXPECT_EQ(c.descriptors.size(), 3u);
}

TEST(ClusterInstance, DefaultOnSetCover) {
  const MilpInstance inst = GenerateSetCover({});
  const auto a = ClusterInstance(inst, kDefaultClusters, 5);
  EXPECT_EQ(a.descriptors.size(), 10u);
  std::size_t total = 0;
  for (const auto& m : a.clustering.members) {
    EXPECT_TRUE(std::is_sorted(m.begin(), m.end()));
    total += m.size();
  }
  EXPECT_EQ(total, 500u);
  const auto b = ClusterInstance(inst, kDefaultClusters, 5);
  EXPECT_EQ(a.clustering.assignment, b.clustering.assignment);
  EXPECT_EQ(ClusteringToJson(a).at("version"), kClusterJsonVersion);
}

TEST(ClusterInstance, StandardizeOptionRuns) {
  const MilpInstance inst = GenerateRandomMilp({6, 20, 1.0, 2}).instance;
  KMeansOptions opts;
  opts.standardize = true;
  const auto c = ClusterInstance(inst, 4, 0, opts);
  EXPECT_EQ(c.clustering.k, 4u);
}

}  // namespace
}  // namespace clcr
