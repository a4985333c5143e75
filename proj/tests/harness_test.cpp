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
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "clcr/generators.hpp"
#include "clcr/harness.hpp"

namespace clcr {
namespace {

namespace fs = std::filesystem;

// Timings from a callback on the solved instance; nullopt means Error.
class ScriptedSolver : public Solver {
 public:
  explicit ScriptedSolver(std::function<std::optional<double>(const MilpInstance&)> time) : time_(std::move(time)) {}

  std::string id() const override { return "scripted"; }
  double timeout_s() const override { return 100; }
  SolveRecord Solve(const MilpInstance& inst, std::uint64_t seed) override {
    SolveRecord r;
    r.instance = inst.name;
    r.digest = PermutationDigest(inst);
    r.seed = seed;
    r.solver = id();
    r.timeout_s = 100;
    const auto t = time_(inst);
    if (!t) return r;
    r.status = SolveStatus::kOptimal;
    r.t_total = *t;
    r.t_presolve = *t / 10;
    r.n_nodes = static_cast<std::int64_t>(*t * 2);
    r.n_iter = static_cast<std::int64_t>(*t * 100);
    r.objective = 1;
    return r;
  }

 private:
  std::function<std::optional<double>(const MilpInstance&)> time_;
};

bool IsIdentity(const MilpInstance& inst) { return RowProvenance(inst) == Permutation::Identity(inst.num_cons()).order(); }

MilpInstance Instance(const std::string& name, std::uint64_t seed) {
  MilpInstance inst = GenerateSetCover({40, 30, 0.1, {1, 50}, seed});
  inst.name = name;
  return inst;
}

PointerNetParams Model() { return PointerNetParams::Init({kDescriptorDim, 8, 8}, 1); }

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("clcr_harness_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Statistics, MedianAndShiftedGeometricMean) {
  EXPECT_EQ(Median({3, 1, 2}), 2);
  EXPECT_EQ(Median({4, 1, 3, 2}), 2.5);
  const std::vector<double> v = {1, 9};
  EXPECT_NEAR(ShiftedGeometricMean(v), std::sqrt(20.0) - 1, 1e-12);
  const std::vector<double> same = {7, 7, 7};
  EXPECT_NEAR(ShiftedGeometricMean(same), 7, 1e-12);
  EXPECT_THROW(ShiftedGeometricMean(std::vector<double>{}), Error);
}

TEST(Labeling, MarginSemantics) {
  SampleProvenance p;
  p.baseline_median = 10;
  p.margin_rel = 0.01;
  p.permuted_median = 9.95;
  EXPECT_FALSE(LabelFromProvenance(p).has_value());
  p.permuted_median = 9.8;
  EXPECT_EQ(LabelFromProvenance(p), SampleLabel::kPositive);
  p.permuted_median = 10.2;
  EXPECT_EQ(LabelFromProvenance(p), SampleLabel::kNegative);
  p.margin_rel = 0;
  p.permuted_median = 10;
  EXPECT_FALSE(LabelFromProvenance(p).has_value());
  p.permuted_median = 10.0001;
  EXPECT_EQ(LabelFromProvenance(p), SampleLabel::kNegative);
}

TEST(GenerateSamples, IdentityIsDiscarded) {
  MockSolver mock;
  SampleGenConfig cfg;
  cfg.num_perms = 1;
  cfg.include_identity = true;
  cfg.clusters = 4;
  const auto d = GenerateSamples(mock, Instance("a", 1), cfg);
  EXPECT_TRUE(d.samples.empty());
  EXPECT_EQ(d.discarded, 1u);
}

TEST(GenerateSamples, LabelsMatchProvenance) {
  MockSolverConfig mc;
  mc.noise = 0.2;
  MockSolver mock(mc);
  SampleGenConfig cfg;
  cfg.clusters = 5;
  cfg.seed = 3;
  const auto d = GenerateSamples(mock, Instance("a", 2), cfg);
  EXPECT_LE(d.samples.size(), 20u);
  EXPECT_EQ(d.samples.size() + d.discarded + d.failed, 20u);
  EXPECT_GT(d.samples.size(), 0u);
  for (const auto& s : d.samples) {
    const auto& p = s.provenance;
    EXPECT_EQ(p.baseline_times.size(), 3u);
    EXPECT_EQ(p.permuted_times.size(), 3u);
    EXPECT_EQ(p.baseline_median, Median(p.baseline_times));
    EXPECT_EQ(p.permuted_median, Median(p.permuted_times));
    const double r = p.baseline_median - p.permuted_median;
    EXPECT_EQ(s.sample.reward, r);
    EXPECT_EQ(s.sample.label, r > 0 ? SampleLabel::kPositive : SampleLabel::kNegative);
    EXPECT_GT(std::abs(r), 0.01 * p.baseline_median);
    EXPECT_EQ(s.sample.perm.order(), p.cluster_perm);
    EXPECT_EQ(s.sample.descriptors.size(), 5u);
  }
}

TEST(GenerateSamples, ZeroMarginLabelsEveryNonzeroReward) {
  MockSolver mock;
  SampleGenConfig cfg;
  cfg.margin_rel = 0;
  cfg.clusters = 5;
  cfg.repeats = 1;
  const auto d = GenerateSamples(mock, Instance("a", 3), cfg);
  for (const auto& s : d.samples) EXPECT_NE(s.sample.reward, 0.0);
  EXPECT_EQ(d.samples.size() + d.discarded, 20u);
}

TEST(GenerateSamples, ErrorsAreCountedNotLabeled) {
  int calls = 0;
  ScriptedSolver solver([&](const MilpInstance& inst) -> std::optional<double> {
    ++calls;
    if (IsIdentity(inst)) return 10.0;
    if (calls % 4 == 0) return std::nullopt;
    return 8.0;
  });
  SampleGenConfig cfg;
  cfg.num_perms = 10;
  cfg.repeats = 1;
  cfg.clusters = 5;
  const auto d = GenerateSamples(solver, Instance("a", 4), cfg);
  EXPECT_GT(d.failed, 0u);
  EXPECT_EQ(d.warnings.size(), d.failed);
  for (const auto& s : d.samples) EXPECT_EQ(s.sample.reward, 2.0);

  ScriptedSolver broken([](const MilpInstance&) { return std::optional<double>(); });
  const auto none = GenerateSamples(broken, Instance("a", 4), cfg);
  EXPECT_TRUE(none.samples.empty());
  EXPECT_EQ(none.failed, 1u);
}

TEST(Dataset, JsonRoundTrip) {
  MockSolverConfig mc;
  mc.noise = 0.3;
  MockSolver mock(mc);
  SampleGenConfig cfg;
  cfg.num_perms = 6;
  cfg.clusters = 3;
  const auto d = GenerateSamples(mock, Instance("a", 5), cfg);
  const auto j = DatasetToJson(d);
  EXPECT_EQ(j.at("version"), kSamplesJsonVersion);
  const auto back = DatasetFromJson(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(DatasetToJson(back), j);
  ASSERT_EQ(back.samples.size(), d.samples.size());
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    EXPECT_EQ(back.samples[i].sample.descriptors, d.samples[i].sample.descriptors);
    EXPECT_EQ(LabelFromProvenance(back.samples[i].provenance), back.samples[i].sample.label);
  }
}

TEST(KShot, BestIsMinimum) {
  MockSolverConfig mc;
  mc.spread = 0.8;
  MockSolver mock(mc);
  const auto inst = Instance("a", 6);
  const auto r = EvaluateKShot(mock, inst, Model(), 5, 2, 5);
  ASSERT_EQ(r.all.size(), 5u);
  ASSERT_EQ(r.constraint_perms.size(), 5u);
  double mn = 1e300, sum = 0;
  for (const auto& rec : r.all) {
    mn = std::min(mn, *rec.t_total);
    sum += *rec.t_total;
    EXPECT_EQ(rec.strategy, "clcr");
  }
  EXPECT_EQ(*r.best.t_total, mn);
  EXPECT_NEAR(r.budget_s, sum, 1e-9);

  const auto one = EvaluateKShot(mock, inst, Model(), 1, 2, 5);
  ASSERT_EQ(one.all.size(), 1u);
  EXPECT_EQ(one.best.digest, one.all[0].digest);
  EXPECT_EQ(one.best.t_total, one.all[0].t_total);
}

TEST(KShot, AllFailuresGiveErrorBest) {
  ScriptedSolver broken([](const MilpInstance&) { return std::optional<double>(); });
  const auto r = EvaluateKShot(broken, Instance("a", 6), Model(), 3, 0, 4);
  EXPECT_EQ(r.all.size(), 3u);
  EXPECT_EQ(r.best.status, SolveStatus::kError);
}

TEST(Perturbation, SingleSeedAndConstantTimes) {
  MockSolver mock;
  const auto one = PerturbationStudy(mock, Instance("a", 7), 1, 0);
  EXPECT_EQ(one.ok, 1u);
  EXPECT_EQ(one.stdev, 0.0);

  MockSolverConfig flat;
  flat.spread = 0;
  flat.order_weight = 0;
  MockSolver constant(flat);
  const auto r = PerturbationStudy(constant, Instance("a", 7), 10, 0);
  EXPECT_EQ(r.records.size(), 10u);
  EXPECT_EQ(r.cv, 0.0);
  EXPECT_EQ(r.mean, 10.0);

  const auto varied = PerturbationStudy(mock, Instance("a", 7), 10, 0);
  EXPECT_GT(varied.cv, 0.0);
  std::set<std::string> digests;
  for (const auto& rec : varied.records) digests.insert(rec.digest);
  EXPECT_GT(digests.size(), 1u);
}

TEST(Benchmark, FixedMetricsAndSpeedup) {
  ScriptedSolver solver([](const MilpInstance& inst) { return IsIdentity(inst) ? 10.0 : 5.0; });
  const std::vector<MilpInstance> instances = {Instance("a", 8)};
  BenchmarkConfig cfg;
  cfg.strategies = {StrategyKind::kNone, StrategyKind::kCbrLh};
  const auto report = RunBenchmark(solver, instances, cfg);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.baseline, "none");
  ASSERT_EQ(report.summaries.size(), 2u);
  EXPECT_EQ(report.summaries[0].strategy, "none");
  EXPECT_DOUBLE_EQ(report.summaries[0].time_sgm, 10.0);
  EXPECT_EQ(report.summaries[0].nodes_mean, 20.0);
  EXPECT_EQ(report.summaries[0].iter_mean, 1000.0);
  EXPECT_EQ(report.summaries[0].presolve_mean, 1.0);
  EXPECT_EQ(report.summaries[0].speedup, 1.0);
  EXPECT_DOUBLE_EQ(report.summaries[1].time_sgm, 5.0);
  EXPECT_DOUBLE_EQ(report.summaries[1].speedup, 2.0);
  EXPECT_NE(RenderTable(report.summaries).find("| cbr-lh | 5.00 | 10.00 | 500.00 | 0.50 | 2.00 |"),
            std::string::npos);
}

TEST(Benchmark, SummaryIgnoresRowOrderAndCountsFailures) {
  int calls = 0;
  ScriptedSolver solver([&](const MilpInstance&) -> std::optional<double> {
    return ++calls % 7 == 0 ? std::nullopt : std::optional<double>(1.0 + calls % 5);
  });
  const std::vector<MilpInstance> instances = {Instance("a", 1), Instance("b", 2), Instance("c", 3)};
  BenchmarkConfig cfg;
  cfg.strategies = {StrategyKind::kNone, StrategyKind::kRandom, StrategyKind::kCmbr, StrategyKind::kClcr};
  cfg.random_seeds = 3;
  cfg.repeats = 2;
  cfg.shots = 2;
  cfg.clusters = 4;
  cfg.model = Model();
  auto report = RunBenchmark(solver, instances, cfg);
  std::size_t failed = 0;
  for (const auto& row : report.rows) failed += row.record.status == SolveStatus::kError;
  EXPECT_GT(failed, 0u);
  std::size_t counted = 0;
  for (const auto& s : report.summaries) counted += s.failed_runs;
  EXPECT_EQ(counted, failed);

  const std::vector<std::string> names = {"none", "random", "cmbr", "clcr"};
  const auto before = nlohmann::json(RecordsCsv(report.rows));
  std::mt19937_64 gen(3);
  std::shuffle(report.rows.begin(), report.rows.end(), gen);
  const auto after = SummarizeBenchmark(report.rows, names);
  ASSERT_EQ(after.size(), report.summaries.size());
  for (std::size_t i = 0; i < after.size(); ++i) {
    EXPECT_EQ(after[i].time_sgm, report.summaries[i].time_sgm);
    EXPECT_EQ(after[i].speedup, report.summaries[i].speedup);
  }
  EXPECT_EQ(nlohmann::json(RecordsCsv(report.rows)), before);
}

TEST(Benchmark, ClcrRequiresModel) {
  MockSolver mock;
  const std::vector<MilpInstance> instances = {Instance("a", 1)};
  BenchmarkConfig cfg;
  cfg.strategies = {StrategyKind::kClcr};
  EXPECT_THROW(RunBenchmark(mock, instances, cfg), Error);
}

TEST(Benchmark, WritesReportsAndPermutations) {
  MockSolver mock;
  const std::vector<MilpInstance> instances = {Instance("a", 1), Instance("b", 2)};
  BenchmarkConfig cfg;
  cfg.strategies = {StrategyKind::kNone, StrategyKind::kCbrHl, StrategyKind::kRandom};
  cfg.random_seeds = 2;
  const auto report = RunBenchmark(mock, instances, cfg);
  const fs::path out = TempDir("write");
  WriteBenchmark(report, out);
  for (const char* f : {"runs.csv", "summary.csv", "summary.json", "table.md"}) EXPECT_TRUE(fs::exists(out / f)) << f;
  for (const auto& row : report.rows) {
    const fs::path perm = out / "perms" / (row.record.digest + ".json");
    ASSERT_TRUE(fs::exists(perm));
    std::ifstream in(perm);
    EXPECT_EQ(nlohmann::json::parse(in).at("order").get<std::vector<std::size_t>>(), row.order);
    EXPECT_EQ(PermutationDigest(row.order), row.record.digest);
  }
  fs::remove_all(out);
}

TEST(Benchmark, WorkerCountDoesNotChangeResults) {
  MockSolverConfig mc;
  mc.noise = 0.1;
  MockSolver mock(mc);
  const std::vector<MilpInstance> instances = {Instance("a", 1), Instance("b", 2), Instance("c", 3)};
  BenchmarkConfig cfg;
  cfg.strategies = {StrategyKind::kNone, StrategyKind::kRandom, StrategyKind::kCluster, StrategyKind::kClcr};
  cfg.random_seeds = 3;
  cfg.clusters = 4;
  cfg.model = Model();
  const auto serial = RunBenchmark(mock, instances, cfg);
  cfg.workers = 3;
  const auto parallel = RunBenchmark(mock, instances, cfg);
  EXPECT_EQ(RecordsCsv(serial.rows), RecordsCsv(parallel.rows));
  EXPECT_EQ(RenderTable(serial.summaries), RenderTable(parallel.summaries));
}

}  // namespace
}  // namespace clcr
