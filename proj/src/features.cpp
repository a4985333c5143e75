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

#include "clcr/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace clcr {
namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = a[t] - b[t];
    s += d * d;
  }
  return s;
}

std::size_t Nearest(std::span<const double> p, const std::vector<std::vector<double>>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = SquaredDistance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<std::vector<double>> Means(const std::vector<std::vector<double>>& pts,
                                       const std::vector<std::size_t>& assign, std::size_t k,
                                       std::size_t dim) {
  std::vector<std::vector<double>> mu(k, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> count(k, 0);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    auto& m = mu[assign[p]];
    for (std::size_t t = 0; t < dim; ++t) m[t] += pts[p][t];
    ++count[assign[p]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] == 0) continue;
    for (double& v : mu[c]) v /= static_cast<double>(count[c]);
  }
  return mu;
}

double Inertia(const std::vector<std::vector<double>>& pts, const std::vector<std::size_t>& assign,
               const std::vector<std::vector<double>>& mu) {
  double s = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) s += SquaredDistance(pts[p], mu[assign[p]]);
  return s;
}

}  // namespace

std::vector<ConstraintFeature> ExtractFeatures(const MilpInstance& inst) {
  std::vector<ConstraintFeature> out;
  out.reserve(inst.rows.size());
  for (const auto& row : inst.rows) {
    ConstraintFeature f;
    f.raw.assign(inst.num_vars + 1, 0.0);
    for (const auto& e : row.entries) f.raw[e.col] = e.coeff;
    f.raw[inst.num_vars] = row.rhs;
    f.owner = row.original_index;
    out.push_back(std::move(f));
  }
  return out;
}

Clustering KMeans(std::span<const ConstraintFeature> features, std::size_t k, std::uint64_t seed,
                  const KMeansOptions& options) {
  const std::size_t num = features.size();
  if (k < 1) throw Error("k-means needs k >= 1");
  if (k > num) {
    throw Error("k-means asked for " + std::to_string(k) + " clusters of " + std::to_string(num) +
                " points; clamp k to the number of constraints");
  }
  if (options.max_iters < 1) throw Error("k-means needs max_iters >= 1");
  const std::size_t dim = features[0].raw.size();
  for (const auto& f : features) {
    if (f.raw.size() != dim) throw Error("k-means features must share one dimension");
  }

  // Canonical processing order: ascending owner, then input position.
  std::vector<std::size_t> perm(num);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return features[a].owner < features[b].owner;
  });
  std::vector<std::vector<double>> pts(num);
  for (std::size_t p = 0; p < num; ++p) pts[p] = features[perm[p]].raw;
  if (options.standardize) {
    for (std::size_t t = 0; t < dim; ++t) {
      double mean = 0.0;
      for (const auto& p : pts) mean += p[t];
      mean /= static_cast<double>(num);
      double var = 0.0;
      for (const auto& p : pts) var += (p[t] - mean) * (p[t] - mean);
      double sd = std::sqrt(var / static_cast<double>(num));
      if (sd < 1e-12) sd = 1.0;
      for (auto& p : pts) p[t] = (p[t] - mean) / sd;
    }
  }

  // k-means++ seeding.
  Rng rng(DeriveSeed(seed, "kmeans++"));
  std::vector<std::vector<double>> centroids;
  std::vector<bool> chosen(num, false);
  std::vector<double> d2(num, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.Below(num));
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t pick = first;
    if (c > 0) {
      double total = 0.0;
      for (std::size_t p = 0; p < num; ++p) total += d2[p];
      if (total <= 0.0) {
        std::vector<std::size_t> free;
        for (std::size_t p = 0; p < num; ++p) {
          if (!chosen[p]) free.push_back(p);
        }
        pick = free[rng.Below(free.size())];
      } else {
        const double r = rng.Uniform() * total;
        double cum = 0.0;
        pick = num;
        for (std::size_t p = 0; p < num; ++p) {
          if (d2[p] <= 0.0) continue;
          cum += d2[p];
          pick = p;
          if (cum > r) break;
        }
      }
    }
    chosen[pick] = true;
    centroids.push_back(pts[pick]);
    for (std::size_t p = 0; p < num; ++p) d2[p] = std::min(d2[p], SquaredDistance(pts[p], centroids.back()));
  }

  Clustering result;
  result.k = k;
  std::vector<std::size_t> assign(num, k);  // k marks "unassigned"
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    bool changed = false;
    for (std::size_t p = 0; p < num; ++p) {
      const std::size_t c = Nearest(pts[p], centroids);
      if (c != assign[p]) {
        assign[p] = c;
        changed = true;
      }
    }
    if (!changed) break;

    // Empty-cluster repair.
    std::vector<std::size_t> size(k, 0);
    for (std::size_t c : assign) ++size[c];
    for (std::size_t c = 0; c < k; ++c) {
      if (size[c] > 0) continue;
      std::size_t far = num;
      double far_d = -1.0;
      for (std::size_t p = 0; p < num; ++p) {
        if (size[assign[p]] < 2) continue;
        const double d = SquaredDistance(pts[p], centroids[assign[p]]);
        if (d > far_d) {
          far_d = d;
          far = p;
        }
      }
      --size[assign[far]];
      assign[far] = c;
      size[c] = 1;
    }

    centroids = Means(pts, assign, k, dim);
    result.inertia_history.push_back(Inertia(pts, assign, centroids));
    result.iterations = iter + 1;
  }

  // Relabel clusters by their first member in canonical order.
  std::vector<std::size_t> relabel(k, k);
  std::vector<std::vector<double>> sorted_centroids;
  for (std::size_t p = 0; p < num; ++p) {
    if (relabel[assign[p]] == k) {
      relabel[assign[p]] = sorted_centroids.size();
      sorted_centroids.push_back(centroids[assign[p]]);
    }
  }
  centroids = std::move(sorted_centroids);
  for (auto& a : assign) a = relabel[a];

  result.assignment.assign(num, 0);
  for (std::size_t p = 0; p < num; ++p) result.assignment[perm[p]] = assign[p];
  result.members.assign(k, {});
  for (std::size_t row = 0; row < num; ++row) result.members[result.assignment[row]].push_back(row);

  if (options.standardize) {
    std::vector<std::vector<double>> raw(num);
    for (std::size_t row = 0; row < num; ++row) raw[row] = features[row].raw;
    result.centroids = Means(raw, result.assignment, k, dim);
  } else {
    // Same summation order as the loop above.
    result.centroids = centroids;
  }
  result.inertia = ComputeInertia(features, result);
  return result;
}

double ComputeInertia(std::span<const ConstraintFeature> features, const Clustering& clustering) {
  double s = 0.0;
  for (std::size_t row = 0; row < features.size(); ++row) {
    s += SquaredDistance(features[row].raw, clustering.centroids[clustering.assignment[row]]);
  }
  return s;
}

ClusterDescriptor PoolCluster(const MilpInstance& inst, std::span<const std::size_t> members) {
  if (members.empty()) throw Error("cannot pool an empty cluster");
  const double m = static_cast<double>(inst.num_cons());
  const double n = static_cast<double>(std::max<std::size_t>(inst.num_vars, 1));
  const double count = static_cast<double>(members.size());

  std::vector<double> row_mean, row_abs, rhs;
  double nnz_sum = 0.0, le = 0.0, eq = 0.0, entries = 0.0, int_entries = 0.0;
  double min_c = std::numeric_limits<double>::infinity();
  double max_c = -std::numeric_limits<double>::infinity();
  ClusterDescriptor d;
  d.mean_feature.assign(inst.num_vars + 1, 0.0);
  for (std::size_t r : members) {
    if (r >= inst.rows.size()) throw Error("cluster member out of range");
    const auto& row = inst.rows[r];
    double sum = 0.0, abs_sum = 0.0;
    for (const auto& e : row.entries) {
      sum += e.coeff;
      abs_sum += std::abs(e.coeff);
      min_c = std::min(min_c, e.coeff);
      max_c = std::max(max_c, e.coeff);
      if (inst.is_integer[e.col]) int_entries += 1.0;
      d.mean_feature[e.col] += e.coeff;
    }
    const double nnz = static_cast<double>(row.entries.size());
    entries += nnz;
    nnz_sum += nnz;
    row_mean.push_back(nnz > 0 ? sum / nnz : 0.0);
    row_abs.push_back(nnz > 0 ? abs_sum / nnz : 0.0);
    rhs.push_back(row.rhs);
    d.mean_feature[inst.num_vars] += row.rhs;
    if (row.sense == Sense::kLE) le += 1.0;
    if (row.sense == Sense::kEQ) eq += 1.0;
  }
  for (double& v : d.mean_feature) v /= count;

  // Order-free statistics: sort before summing so the result is
  // independent of member order.
  auto mean_std = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(var / static_cast<double>(v.size()))};
  };
  const auto [coeff_mean, coeff_std] = mean_std(row_mean);
  const auto [abs_mean, abs_std] = mean_std(row_abs);
  const auto [rhs_mean, rhs_std] = mean_std(rhs);
  (void)abs_std;

  auto& s = d.summary;
  s[0] = count / m;
  s[1] = nnz_sum / count / n;
  s[2] = coeff_mean;
  s[3] = coeff_std;
  s[4] = entries > 0 ? min_c : 0.0;
  s[5] = entries > 0 ? max_c : 0.0;
  s[6] = abs_mean;
  s[7] = rhs_mean;
  s[8] = rhs_std;
  s[9] = le / count;
  s[10] = eq / count;
  s[11] = entries > 0 ? int_entries / entries : 0.0;
  return d;
}

ClusteredInstance ClusterInstance(const MilpInstance& inst, std::size_t k_requested,
                                  std::uint64_t seed, const KMeansOptions& options) {
  if (inst.num_cons() < 1) throw Error("cannot cluster an instance without constraints");
  const std::size_t k = std::clamp<std::size_t>(k_requested, 1, inst.num_cons());
  const auto features = ExtractFeatures(inst);
  ClusteredInstance out;
  out.clustering = KMeans(features, k, seed, options);
  for (const auto& members : out.clustering.members) {
    out.descriptors.push_back(PoolCluster(inst, members));
  }
  return out;
}

nlohmann::json ClusteringToJson(const ClusteredInstance& c) {
  nlohmann::json j;
  j["version"] = kClusterJsonVersion;
  j["k"] = c.clustering.k;
  j["assignment"] = c.clustering.assignment;
  j["members"] = c.clustering.members;
  j["inertia"] = c.clustering.inertia;
  j["iterations"] = c.clustering.iterations;
  nlohmann::json desc = nlohmann::json::array();
  for (const auto& d : c.descriptors) desc.push_back(d.summary);
  j["descriptors"] = desc;
  return j;
}

}  // namespace clcr
