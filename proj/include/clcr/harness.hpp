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

#ifndef CLCR_HARNESS_HPP_
#define CLCR_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "clcr/features.hpp"
#include "clcr/milp.hpp"
#include "clcr/pointer_net.hpp"
#include "clcr/reorder.hpp"
#include "clcr/solver.hpp"

namespace clcr {

double Median(std::vector<double> values);

/// Geometric mean of (x + shift), minus shift.
double ShiftedGeometricMean(std::span<const double> values, double shift = 1.0);

// ---------------------------------------------------------------------------
// Contrastive sample generation

struct SampleProvenance {
  std::string instance;
  std::vector<std::size_t> cluster_perm;
  std::string digest;  // constraint-level row order that was solved
  std::vector<double> baseline_times;
  std::vector<double> permuted_times;
  double baseline_median = 0.0;
  double permuted_median = 0.0;
  std::size_t repeats = 0;
  double margin_rel = 0.0;
};

struct LabeledSample {
  TrainingSample sample;
  SampleProvenance provenance;
};

struct LabeledDataset {
  std::vector<LabeledSample> samples;
  std::size_t discarded = 0;  // inside the margin
  std::size_t failed = 0;     // a run returned Error
  std::vector<std::string> warnings;

  std::vector<TrainingSample> TrainingSamples() const;
};

/// R = baseline median - permuted median, labeled against margin_rel *
/// baseline. Empty when |R| is inside the margin.
std::optional<SampleLabel> LabelFromProvenance(const SampleProvenance& p);

struct SampleGenConfig {
  std::size_t num_perms = 20;
  std::size_t repeats = 3;
  double margin_rel = 0.01;
  std::size_t clusters = kDefaultClusters;
  std::uint64_t seed = 0;
  bool include_identity = false;  // slot 0 re-solves the unpermuted rows
};

LabeledDataset GenerateSamples(Solver& solver, const MilpInstance& inst, const SampleGenConfig& config);

inline constexpr const char* kSamplesJsonVersion = "clcr-samples/1";

nlohmann::json DatasetToJson(const LabeledDataset& d);
LabeledDataset DatasetFromJson(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// k-shot inference

struct KShotResult {
  SolveRecord best;
  std::vector<SolveRecord> all;
  std::vector<Permutation> constraint_perms;  // per shot
  double budget_s = 0.0;                      // summed t_total over shots
};

/// Samples `shots` cluster orders, solves each once and keeps the fastest
/// (ties: fewer LP iterations). Error shots are skipped; if every shot
/// fails the best record is an Error.
KShotResult EvaluateKShot(Solver& solver, const MilpInstance& inst, const PointerNetParams& params,
                          std::size_t shots, std::uint64_t seed,
                          std::size_t clusters = kDefaultClusters);

// ---------------------------------------------------------------------------
// Random-permutation perturbation study

struct PerturbationResult {
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation, 0 for a single run
  double cv = 0.0;     // stdev / mean
  std::size_t ok = 0;
  std::size_t errors = 0;
  std::vector<SolveRecord> records;
};

/// `num_seeds` uniformly random full row permutations, one solve each.
PerturbationResult PerturbationStudy(Solver& solver, const MilpInstance& inst,
                                     std::size_t num_seeds, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Benchmark

struct BenchmarkConfig {
  std::vector<StrategyKind> strategies;
  std::size_t repeats = 1;
  std::size_t random_seeds = 20;  // runs of the random strategy per instance
  std::size_t clusters = kDefaultClusters;
  std::size_t shots = 5;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::optional<PointerNetParams> model;  // required for clcr
};

struct StrategySummary {
  std::string strategy;
  std::size_t instances = 0;  // with at least one successful run
  std::size_t failed_runs = 0;
  double time_sgm = 0.0;  // shifted geometric mean, shift 1 s
  double time_mean = 0.0;
  double nodes_mean = 0.0;
  double iter_mean = 0.0;
  double presolve_mean = 0.0;
  double speedup = 0.0;  // baseline time_sgm / time_sgm
};

struct BenchmarkRow {
  SolveRecord record;
  std::vector<std::size_t> order;  // row provenance that was solved
  double budget_s = 0.0;           // k-shot total for clcr, t_total otherwise
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::vector<StrategySummary> summaries;
  std::string baseline;
};

BenchmarkReport RunBenchmark(Solver& solver, std::span<const MilpInstance> instances,
                             const BenchmarkConfig& config);

/// Summaries from rows alone; the result does not depend on row order.
std::vector<StrategySummary> SummarizeBenchmark(std::span<const BenchmarkRow> rows,
                                                std::span<const std::string> strategy_order,
                                                std::string* baseline = nullptr);

/// runs.csv, summary.csv, summary.json, table.md and perms/<digest>.json.
void WriteBenchmark(const BenchmarkReport& report, const std::filesystem::path& out_dir);

std::string RenderTable(std::span<const StrategySummary> summaries);
std::string RecordsCsv(std::span<const BenchmarkRow> rows);

/// Writes perms/<digest>.json for an ordering unless it exists already. The
/// digest covers the row provenance only, so instances of equal size share
/// the file of a common ordering.
void PersistPermutation(const std::filesystem::path& out_dir, std::span<const std::size_t> order);

nlohmann::json RecordToJson(const SolveRecord& r);

}  // namespace clcr

#endif  // CLCR_HARNESS_HPP_
