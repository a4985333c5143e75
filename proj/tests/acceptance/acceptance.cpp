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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Criterion 9 needs a real solver and only
// reports; enable it with --solver <adapter.json>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clcr/features.hpp"
#include "clcr/generators.hpp"
#include "clcr/harness.hpp"
#include "clcr/milp.hpp"
#include "clcr/oracle.hpp"
#include "clcr/pointer_net.hpp"
#include "clcr/reorder.hpp"
#include "clcr/solver.hpp"

namespace {

using namespace clcr;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

std::vector<std::vector<std::size_t>> AllPermutations(std::size_t k) {
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

DescriptorSet RandomDescriptors(Rng& rng, std::size_t k, std::size_t d) {
  DescriptorSet out(k, std::vector<double>(d));
  for (auto& row : out) {
    for (auto& x : row) x = rng.Uniform(-2.0, 2.0);
  }
  return out;
}

// 1. Oracle objective is invariant under row permutations.
Outcome EquivalenceInvariance() {
  std::size_t checked = 0, feasible = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng(DeriveSeed(1, "acc1-shape", i));
    RandomMilpParams p;
    p.num_vars = static_cast<std::size_t>(rng.IntIn(2, 10));
    p.num_cons = static_cast<std::size_t>(rng.IntIn(1, 8));
    p.integrality_fraction = 1.0;
    p.max_upper = 1;
    p.seed = DeriveSeed(1, "acc1-instance", i);
    const MilpInstance inst = GenerateRandomMilp(p).instance;
    const OracleResult base = BruteForceOracle(inst);
    feasible += base.status == OracleStatus::kOptimal;
    for (std::uint64_t t = 0; t < 20; ++t) {
      const Permutation perm = StrategyRandom(inst, DeriveSeed(1, "acc1-perm", i * 100 + t));
      const OracleResult r = BruteForceOracle(ApplyConstraintPermutation(inst, perm));
      if (r.status != base.status || r.objective != base.objective) {
        return {false, "instance " + std::to_string(i) + " permutation " + std::to_string(t) +
                           ": objective " + std::to_string(r.objective) + " vs " + std::to_string(base.objective)};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " reorderings of 50 binary instances (" + std::to_string(feasible) +
                    " feasible), objectives identical"};
}

// 2. Permutation probabilities sum to one.
Outcome Normalization() {
  double worst = 0.0;
  for (std::size_t k = 2; k <= 5; ++k) {
    const auto perms = AllPermutations(k);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto params = PointerNetParams::Init({}, DeriveSeed(2, "acc2-params", k * 100 + s));
      Rng rng(DeriveSeed(2, "acc2-desc", k * 100 + s));
      const auto d = RandomDescriptors(rng, k, kDescriptorDim);
      double total = 0.0;
      for (const auto& p : perms) total += std::exp(ForwardScore(params, d, Permutation(p)));
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  return {worst <= 1e-6, Fmt("max |sum p - 1| = %.3g over k=2..5 x 10 seeds (tol 1e-6)", worst)};
}

// 3. Autodiff gradient of the contrastive loss matches central differences.
Outcome GradientCheck() {
  constexpr double kEps = 1e-4;
  constexpr double kFloor = 1e-6;
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    PointerNetConfig config{4, 8, 8};
    auto params = PointerNetParams::Init(config, DeriveSeed(3, "acc3-params", s));
    Rng rng(DeriveSeed(3, "acc3-batch", s));
    std::vector<TrainingSample> batch;
    const auto perms = AllPermutations(3);
    for (int b = 0; b < 4; ++b) {
      TrainingSample t;
      t.descriptors = RandomDescriptors(rng, 3, 4);
      t.perm = Permutation(perms[rng.Below(perms.size())]);
      t.label = b % 2 ? SampleLabel::kNegative : SampleLabel::kPositive;
      batch.push_back(t);
    }
    params.ZeroGrad();
    ContrastiveLoss(params, batch, true);
    params.ForEach([&](const std::string&, ad::Tensor& t) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double orig = t.value[i];
        t.value[i] = orig + kEps;
        const double up = ContrastiveLoss(std::as_const(params), batch);
        t.value[i] = orig - kEps;
        const double down = ContrastiveLoss(std::as_const(params), batch);
        t.value[i] = orig;
        const double numeric = (up - down) / (2 * kEps);
        const double rel = std::abs(numeric - t.grad[i]) /
                           std::max({std::abs(numeric), std::abs(t.grad[i]), kFloor});
        worst = std::max(worst, rel);
        ++checked;
      }
    });
  }
  return {worst < 1e-4, Fmt("max relative error %.3g over %.0f weights (tol 1e-4)", worst, double(checked))};
}

// 4. v = 0 makes sampling uniform.
Outcome Uniformity() {
  auto params = PointerNetParams::Init({}, DeriveSeed(4, "acc4-params"));
  std::fill(params.attention_v.value.begin(), params.attention_v.value.end(), 0.0);
  Rng rng(DeriveSeed(4, "acc4-desc"));
  const auto d = RandomDescriptors(rng, 3, kDescriptorDim);
  std::map<std::vector<std::size_t>, int> counts;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) counts[SamplePermutation(params, d, DeriveSeed(4, "acc4-draw", i)).perm.order()]++;
  double worst = 0.0;
  for (const auto& p : AllPermutations(3)) worst = std::max(worst, std::abs(counts[p] / double(kDraws) - 1.0 / 6));
  return {counts.size() == 6 && worst <= 0.02,
          Fmt("%.0f distinct orders, max |freq - 1/6| = %.4f (tol 0.02)", double(counts.size()), worst)};
}

// 5. Lloyd iterations never increase inertia; k=1 and k=m edge cases.
Outcome KMeansContract() {
  double worst_increase = 0.0, worst_mean = 0.0, worst_km = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(DeriveSeed(5, "acc5", s));
    const std::size_t m = static_cast<std::size_t>(rng.IntIn(3, 40));
    const std::size_t dim = static_cast<std::size_t>(rng.IntIn(1, 6));
    std::vector<ConstraintFeature> f(m);
    for (std::size_t i = 0; i < m; ++i) {
      f[i].owner = i;
      f[i].raw.resize(dim);
      for (auto& x : f[i].raw) x = std::round(rng.Uniform(-5, 5) * 8) / 8;
    }
    const std::size_t k = static_cast<std::size_t>(rng.IntIn(1, static_cast<std::int64_t>(std::min<std::size_t>(m, 8))));
    const auto c = KMeans(f, k, DeriveSeed(5, "acc5-seed", s));
    for (std::size_t t = 1; t < c.inertia_history.size(); ++t) {
      const double inc = c.inertia_history[t] - c.inertia_history[t - 1];
      worst_increase = std::max(worst_increase, inc / std::max(1.0, c.inertia_history[t - 1]));
    }
    const auto one = KMeans(f, 1, s);
    for (std::size_t j = 0; j < dim; ++j) {
      double mean = 0.0;
      for (const auto& p : f) mean += p.raw[j];
      mean /= static_cast<double>(m);
      worst_mean = std::max(worst_mean, std::abs(one.centroids[0][j] - mean));
    }
    worst_km = std::max(worst_km, KMeans(f, m, s).inertia);
  }
  const bool ok = worst_increase <= 1e-12 && worst_mean <= 1e-9 && worst_km == 0.0;
  return {ok, Fmt("max relative inertia increase %.3g, k=1 centroid error %.3g, k=m inertia %.3g", worst_increase,
                  worst_mean, worst_km)};
}

// 6. Planted-order learning.
struct PlantedCase {
  DescriptorSet descriptors;
  std::vector<std::size_t> descending;
};

PlantedCase MakePlanted(Rng& rng, std::size_t k) {
  PlantedCase c;
  std::vector<double> score(k);
  c.descriptors.assign(k, std::vector<double>(kDescriptorDim));
  for (std::size_t i = 0; i < k; ++i) {
    score[i] = rng.Uniform(-1.0, 1.0);
    for (std::size_t j = 0; j < kDescriptorDim; ++j) {
      // The score is carried by feature 0; the rest is noise.
      c.descriptors[i][j] = j == 0 ? score[i] : rng.Uniform(-1.0, 1.0);
    }
  }
  c.descending.resize(k);
  std::iota(c.descending.begin(), c.descending.end(), 0);
  std::sort(c.descending.begin(), c.descending.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return c;
}

Outcome PlantedOrder(std::size_t embed, std::size_t hidden, std::size_t epochs) {
  constexpr std::size_t kClusters = 5;
  Rng rng(DeriveSeed(6, "acc6-train"));
  std::vector<TrainingSample> train;
  for (int i = 0; i < 200; ++i) {
    const auto c = MakePlanted(rng, kClusters);
    auto ascending = c.descending;
    std::reverse(ascending.begin(), ascending.end());
    train.push_back({"planted_" + std::to_string(i), c.descriptors, Permutation(c.descending),
                     SampleLabel::kPositive, 1.0});
    train.push_back({"planted_" + std::to_string(i), c.descriptors, Permutation(ascending),
                     SampleLabel::kNegative, -1.0});
  }
  PointerNetConfig config;
  config.embed_dim = embed;
  config.hidden_dim = hidden;
  auto init = PointerNetParams::Init(config, DeriveSeed(6, "acc6-init"));
  FitNormalization(init, train);
  TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = 8;
  tc.lr = 1e-3;
  tc.seed = DeriveSeed(6, "acc6-shuffle");
  const auto result = Train(init, train, tc);

  Rng held(DeriveSeed(6, "acc6-heldout"));
  int recovered = 0;
  double pos = 0.0, neg = 0.0;
  constexpr int kHeldOut = 40;
  for (int i = 0; i < kHeldOut; ++i) {
    const auto c = MakePlanted(held, kClusters);
    auto ascending = c.descending;
    std::reverse(ascending.begin(), ascending.end());
    recovered += GreedyDecode(result.params, c.descriptors).order() == c.descending;
    pos += ForwardScore(result.params, c.descriptors, Permutation(c.descending)) / kHeldOut;
    neg += ForwardScore(result.params, c.descriptors, Permutation(ascending)) / kHeldOut;
  }
  const bool ok = recovered >= 36 && pos - neg >= std::log(10.0);
  std::ostringstream os;
  os << "E=H=" << embed << ", T=" << epochs << ": greedy recovered " << recovered << "/40 (need 36); held-out mean log p "
     << "pos " << pos << " neg " << neg << ", gap " << pos - neg << " (need " << std::log(10.0) << ")";
  return {ok, os.str()};
}

// 7. Log fixtures, byte-stable mock reports, shifted geometric mean.
Outcome HarnessGolden(const fs::path& source_dir) {
  std::ostringstream os;
  bool ok = true;
  std::size_t fixtures = 0;
  for (const auto& entry : fs::directory_iterator(source_dir / "tests" / "fixtures")) {
    const auto path = entry.path();
    if (path.extension() != ".log") continue;
    fs::path expected_path = path;
    expected_path.replace_extension(".expected.json");
    std::ifstream ein(expected_path);
    const auto expected = nlohmann::json::parse(ein);
    const auto adapter = LoadAdapterConfig((source_dir / "adapters" / expected.at("adapter").get<std::string>()).string());
    std::ifstream lin(path);
    const std::string log((std::istreambuf_iterator<char>(lin)), std::istreambuf_iterator<char>());
    const ParsedLog p = ParseSolverLog(adapter.rules, log);
    const bool match = p.t_total && *p.t_total == expected.at("t_total").get<double>() && p.n_nodes &&
                       *p.n_nodes == expected.at("n_nodes").get<std::int64_t>() && p.n_iter &&
                       *p.n_iter == expected.at("n_iter").get<std::int64_t>() && p.t_presolve &&
                       *p.t_presolve == expected.at("t_presolve").get<double>() && p.status &&
                       SolveStatusName(*p.status) == expected.at("status").get<std::string>();
    if (!match) {
      ok = false;
      os << path.filename().string() << " mismatch; ";
    }
    ++fixtures;
  }
  os << fixtures << " log fixtures";

  std::vector<MilpInstance> instances;
  for (std::uint64_t i = 0; i < 3; ++i) {
    SetCoverParams p;
    p.rows = 40;
    p.cols = 60;
    p.density = 0.1;
    p.seed = DeriveSeed(7, "acc7", i);
    instances.push_back(GenerateSetCover(p));
    instances.back().name = "sc" + std::to_string(i);
  }
  BenchmarkConfig bc;
  bc.strategies = {StrategyKind::kNone, StrategyKind::kRandom, StrategyKind::kCluster, StrategyKind::kCmbr,
                   StrategyKind::kCbrHl, StrategyKind::kCbrLh};
  bc.random_seeds = 5;
  bc.seed = 7;
  const fs::path tmp = fs::temp_directory_path() / "clcr_acceptance_bench";
  std::vector<std::string> files;
  for (int run = 0; run < 2; ++run) {
    fs::remove_all(tmp);
    MockSolver solver;
    BenchmarkConfig cfg = bc;
    cfg.workers = run == 0 ? 1 : 3;
    WriteBenchmark(RunBenchmark(solver, instances, cfg), tmp);
    std::string all;
    for (const char* name : {"runs.csv", "summary.csv", "summary.json", "table.md"}) {
      std::ifstream in(tmp / name, std::ios::binary);
      all += std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    files.push_back(all);
  }
  fs::remove_all(tmp);
  const bool stable = files[0] == files[1];
  ok = ok && stable;
  os << ", mock reports " << (stable ? "byte-identical" : "DIFFER") << " across runs";

  const std::vector<double> v = {1.0, 9.0};
  const double sgm = ShiftedGeometricMean(v, 1.0);
  const double err = std::abs(sgm - (std::sqrt(20.0) - 1.0));
  ok = ok && err <= 1e-9;
  os << ", sgm{1,9} error " << err;
  return {ok, os.str()};
}

// 8. k-shot returns every shot and keeps the fastest.
Outcome KShotContract() {
  SetCoverParams p;
  p.rows = 60;
  p.cols = 90;
  p.density = 0.08;
  p.seed = 8;
  const MilpInstance inst = GenerateSetCover(p);
  const auto params = PointerNetParams::Init({}, DeriveSeed(8, "acc8"));
  MockSolver solver;
  const auto r = EvaluateKShot(solver, inst, params, 5, 8);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : r.all) best = std::min(best, rec.t_total.value_or(best));
  const bool ok = r.all.size() == 5 && r.best.t_total && *r.best.t_total == best;
  return {ok, Fmt("%.0f records, best %.6f, min %.6f", double(r.all.size()), r.best.t_total.value_or(-1), best)};
}

// 9. Report-only checks against a real solver.
void RealSolverReport(const std::string& adapter_path, std::size_t instances_n, double timeout) {
  auto adapter = LoadAdapterConfig(adapter_path);
  adapter.time_limit = timeout;
  ExternalSolver solver(adapter, fs::temp_directory_path() / "clcr_acceptance_solver");
  SetCoverParams sp;
  sp.rows = 250;
  sp.cols = 250;
  sp.density = 0.04;
  sp.seed = DeriveSeed(9, "perturb");
  MilpInstance inst = GenerateSetCover(sp);
  inst.name = "sc_perturb";
  const auto pr = PerturbationStudy(solver, inst, 20, 9);
  std::printf("[REPORT] 9a perturbation study (%s, 20 permutations): mean %.3f s, stdev %.3f s, cv %.4f, errors %zu\n",
              adapter.name.c_str(), pr.mean, pr.stdev, pr.cv, pr.errors);

  // Train on mock-labeled samples is meaningless here; label with the real solver.
  std::vector<MilpInstance> pool;
  for (std::size_t i = 0; i < instances_n; ++i) {
    sp.seed = DeriveSeed(9, "testbed", i);
    pool.push_back(GenerateSetCover(sp));
    pool.back().name = "sc" + std::to_string(i);
  }
  const std::size_t n_train = pool.size() * 4 / 5;
  std::vector<TrainingSample> train;
  for (std::size_t i = 0; i < n_train; ++i) {
    SampleGenConfig g;
    g.num_perms = 8;
    g.repeats = 1;
    g.seed = DeriveSeed(9, "samples", i);
    for (auto& s : GenerateSamples(solver, pool[i], g).samples) train.push_back(s.sample);
  }
  if (train.empty()) {
    std::printf("[REPORT] 9b skipped: no labeled samples\n");
    return;
  }
  auto init = PointerNetParams::Init({}, 9);
  FitNormalization(init, train);
  TrainConfig tc;
  tc.epochs = 100;
  const auto model = Train(init, train, tc).params;
  BenchmarkConfig bc;
  bc.strategies = {StrategyKind::kNone, StrategyKind::kClcr};
  bc.model = model;
  bc.seed = 9;
  std::vector<MilpInstance> test(pool.begin() + static_cast<std::ptrdiff_t>(n_train), pool.end());
  const auto report = RunBenchmark(solver, test, bc);
  for (const auto& s : report.summaries) {
    std::printf("[REPORT] 9b %s: sgm time %.3f s over %zu instances (%zu failed runs)\n", s.strategy.c_str(),
                s.time_sgm, s.instances, s.failed_runs);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("acceptance criteria");
  std::string solver;
  std::vector<int> only, known_red;
  std::size_t planted_dim = 128, planted_epochs = 300, testbed = 20;
  double timeout = 60;
  std::string source_dir = CLCR_SOURCE_DIR;
  app.add_option("--solver", solver, "adapter JSON for the report-only criterion 9");
  app.add_option("--only", only, "criteria to run");
  app.add_option("--known-red", known_red, "criteria whose failure is reported but not counted in the exit code");
  app.add_option("--planted-dim", planted_dim, "embedding and hidden size for criterion 6");
  app.add_option("--planted-epochs", planted_epochs, "training epochs for criterion 6 (<= 300)");
  app.add_option("--testbed", testbed, "instances for criterion 9b");
  app.add_option("--timeout", timeout, "solver time limit for criterion 9");
  app.add_option("--source-dir", source_dir, "repository root");
  CLI11_PARSE(app, argc, argv);
  if (planted_epochs > 300) {
    std::fprintf(stderr, "--planted-epochs must be <= 300\n");
    return 2;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 equivalence invariance", EquivalenceInvariance},
      {"2 permutation probability normalization", Normalization},
      {"3 gradient correctness", GradientCheck},
      {"4 uniform sampling at v=0", Uniformity},
      {"5 k-means contract", KMeansContract},
      {"6 planted-order learning", [&] { return PlantedOrder(planted_dim, planted_dim, planted_epochs); }},
      {"7 harness golden files", [&] { return HarnessGolden(source_dir); }},
      {"8 k-shot contract", KShotContract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), int(i + 1)) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool red = std::find(known_red.begin(), known_red.end(), int(i + 1)) != known_red.end();
    failed += !o.pass && !red;
    std::printf("[%s] %s: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str(), secs,
                red ? (o.pass ? " [listed as known red but passed]" : " [known red, not counted]") : "");
    std::fflush(stdout);
  }
  if (!solver.empty()) {
    try {
      RealSolverReport(solver, testbed, timeout);
    } catch (const std::exception& e) {
      std::printf("[REPORT] 9 failed to run: %s\n", e.what());
    }
  } else if (only.empty() || std::find(only.begin(), only.end(), 9) != only.end()) {
    std::printf("[SKIP] 9 real-solver report: pass --solver <adapter.json>\n");
  }
  return failed ? 1 : 0;
}
