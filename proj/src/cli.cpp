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

#include "clcr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "clcr/features.hpp"
#include "clcr/generators.hpp"
#include "clcr/harness.hpp"
#include "clcr/instance_json.hpp"
#include "clcr/mps.hpp"
#include "clcr/pointer_net.hpp"
#include "clcr/reorder.hpp"

namespace clcr {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    RunConfig, instances, out, checkpoint, samples, seed, clusters, kind, count, rows, cols, density,
    num_vars, num_cons, integrality, embed_dim, hidden_dim, epochs, batch_size, lr, train_fraction,
    adapter, timeout, repeats, margin_rel, num_perms, shots, workers, perturb_seeds, random_seeds,
    bench_repeats, strategies, strategy)

nlohmann::json RunConfigToJson(const RunConfig& c) { return c; }

RunConfig RunConfigFromJson(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) throw Error("run config must be a JSON object");
  nlohmann::json merged = RunConfigToJson(base);
  for (const auto& [key, value] : j.items()) {
    if (!merged.contains(key)) throw Error("unknown run config key '" + key + "'");
    merged[key] = value;
  }
  try {
    return merged.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad run config value: ") + e.what());
  }
}

namespace {

namespace fs = std::filesystem;

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

nlohmann::json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

enum class Kind { kStr, kUint, kReal, kList };

struct Knob {
  CLI::Option* option;
  std::string key;
  Kind kind;
  std::string* value;
};

class Knobs {
 public:
  void Add(CLI::App* app, const std::string& flag, const std::string& key, Kind kind,
           const std::string& help) {
    storage_.emplace_back();
    auto* opt = app->add_option(flag, storage_.back(), help);
    knobs_.push_back({opt, key, kind, &storage_.back()});
  }

  /// JSON overrides for every option given on the command line.
  nlohmann::json Overrides() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : knobs_) {
      if (k.option->count() == 0) continue;
      const std::string& v = *k.value;
      try {
        switch (k.kind) {
          case Kind::kStr:
            j[k.key] = v;
            break;
          case Kind::kUint:
            if (v.empty() || v[0] == '-') throw std::invalid_argument(v);
            j[k.key] = std::stoull(v);
            break;
          case Kind::kReal:
            j[k.key] = std::stod(v);
            break;
          case Kind::kList:
            j[k.key] = SplitList(v);
            break;
        }
      } catch (const std::logic_error&) {
        throw Error("invalid value '" + v + "' for " + k.option->get_name());
      }
    }
    return j;
  }

 private:
  std::deque<std::string> storage_;
  std::vector<Knob> knobs_;
};

std::unique_ptr<Solver> SolverFor(const RunConfig& c, const fs::path& out) {
  return MakeSolver(c, out / "work");
}

fs::path SamplesPath(const RunConfig& c) {
  return c.samples.empty() ? fs::path(c.out) / "samples.json" : fs::path(c.samples);
}

fs::path CheckpointPath(const RunConfig& c) {
  return c.checkpoint.empty() ? fs::path(c.out) / "model.json" : fs::path(c.checkpoint);
}

std::vector<MilpInstance> RequireInstances(const RunConfig& c) {
  if (c.instances.empty()) throw Error("no instances given (--instances)");
  auto out = LoadInstances(c.instances);
  if (out.empty()) throw Error("no instances found in " + c.instances);
  return out;
}

int CountErrors(std::span<const BenchmarkRow> rows) {
  int n = 0;
  for (const auto& r : rows) n += r.record.status == SolveStatus::kError;
  return n;
}

int CmdGenerate(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  for (std::size_t i = 0; i < c.count; ++i) {
    const std::uint64_t seed = DeriveSeed(c.seed, "generate", i);
    MilpInstance inst;
    if (c.kind == "set-cover") {
      SetCoverParams p;
      p.rows = c.rows;
      p.cols = c.cols;
      p.density = c.density;
      p.seed = seed;
      inst = GenerateSetCover(p);
      inst.name = "setcover_" + std::to_string(i);
    } else if (c.kind == "random") {
      RandomMilpParams p;
      p.num_vars = c.num_vars;
      p.num_cons = c.num_cons;
      p.integrality_fraction = c.integrality;
      p.seed = seed;
      inst = GenerateRandomMilp(p).instance;
      inst.name = "random_" + std::to_string(i);
    } else {
      throw Error("unknown instance kind '" + c.kind + "' (set-cover, random)");
    }
    WriteText(dir / (inst.name + ".mps"), WriteMps(inst));
    WriteText(dir / (inst.name + ".json"), InstanceToJson(inst).dump(1) + "\n");
  }
  out << "wrote " << c.count << " instances to " << dir.string() << "\n";
  return 0;
}

int CmdReorder(const RunConfig& c, std::ostream& out) {
  const auto instances = RequireInstances(c);
  const StrategyKind kind = ParseStrategy(c.strategy);
  std::optional<PointerNetParams> model;
  if (kind == StrategyKind::kClcr) model = LoadCheckpoint(CheckpointPath(c).string());
  for (const auto& inst : instances) {
    Permutation p;
    if (kind == StrategyKind::kClcr) {
      const auto clustered = ClusterInstance(inst, c.clusters, DeriveSeed(c.seed, "cluster"));
      p = ExpandClusterOrder(clustered.clustering,
                             GreedyDecode(*model, ToDescriptorSet(clustered.descriptors)));
    } else {
      StrategyOptions opts;
      opts.clusters = c.clusters;
      opts.seed = DeriveSeed(c.seed, inst.name + "/" + StrategyName(kind));
      p = HeuristicPermutation(kind, inst, opts);
    }
    const MilpInstance reordered = ApplyConstraintPermutation(inst, p);
    const std::string stem = inst.name + "." + StrategyName(kind);
    const auto order = RowProvenance(reordered);
    WriteText(fs::path(c.out) / (stem + ".mps"), WriteMps(reordered));
    WriteText(fs::path(c.out) / (stem + ".perm.json"),
              nlohmann::json{{"instance", inst.name},
                             {"strategy", StrategyName(kind)},
                             {"digest", PermutationDigest(order)},
                             {"row_order", p.order()},
                             {"order", order}}
                      .dump() +
                  "\n");
    PersistPermutation(c.out, order);
    out << stem << " " << PermutationDigest(order) << "\n";
  }
  return 0;
}

int CmdSamples(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto instances = RequireInstances(c);
  auto solver = SolverFor(c, c.out);
  LabeledDataset all;
  for (const auto& inst : instances) {
    SampleGenConfig g;
    g.num_perms = c.num_perms;
    g.repeats = c.repeats;
    g.margin_rel = c.margin_rel;
    g.clusters = c.clusters;
    g.seed = DeriveSeed(c.seed, inst.name + "/samples");
    auto d = GenerateSamples(*solver, inst, g);
    err << inst.name << ": " << d.samples.size() << " labeled, " << d.discarded << " discarded, "
        << d.failed << " failed\n";
    for (auto& s : d.samples) all.samples.push_back(std::move(s));
    all.discarded += d.discarded;
    all.failed += d.failed;
    for (auto& w : d.warnings) {
      err << "warning: " << w << "\n";
      all.warnings.push_back(std::move(w));
    }
  }
  nlohmann::json j = DatasetToJson(all);
  j["config"] = RunConfigToJson(c);
  WriteText(SamplesPath(c), j.dump(1) + "\n");
  out << "wrote " << all.samples.size() << " samples to " << SamplesPath(c).string() << "\n";
  return all.failed ? 1 : 0;
}

int CmdTrain(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto dataset = DatasetFromJson(ReadJson(SamplesPath(c))).TrainingSamples();
  if (dataset.empty()) throw Error("empty dataset " + SamplesPath(c).string());
  if (c.train_fraction <= 0.0 || c.train_fraction > 1.0) throw Error("train_fraction must be in (0, 1]");

  std::set<std::string> names;
  for (const auto& s : dataset) names.insert(s.instance);
  std::vector<std::string> order(names.begin(), names.end());
  Rng rng(DeriveSeed(c.seed, "split"));
  rng.Shuffle(order);
  std::size_t n_train = static_cast<std::size_t>(std::llround(c.train_fraction * order.size()));
  n_train = std::clamp<std::size_t>(n_train, 1, order.size());
  if (c.train_fraction < 1.0 && order.size() > 1) n_train = std::min(n_train, order.size() - 1);
  const std::set<std::string> train_names(order.begin(), order.begin() + n_train);

  std::vector<TrainingSample> train, validation;
  for (const auto& s : dataset) (train_names.count(s.instance) ? train : validation).push_back(s);

  PointerNetConfig pc;
  pc.input_dim = dataset.front().descriptors.front().size();
  pc.embed_dim = c.embed_dim;
  pc.hidden_dim = c.hidden_dim;
  PointerNetParams init = PointerNetParams::Init(pc, DeriveSeed(c.seed, "init"));
  FitNormalization(init, train);

  TrainConfig tc;
  tc.epochs = c.epochs;
  tc.batch_size = c.batch_size;
  tc.lr = c.lr;
  tc.seed = DeriveSeed(c.seed, "train");
  err << "training on " << train.size() << " samples (" << n_train << " instances), validating on "
      << validation.size() << "\n";
  const auto result = Train(init, train, tc, validation, [&](const EpochLog& e) {
    if ((e.epoch + 1) % 50 == 0 || e.epoch + 1 == tc.epochs) {
      err << "epoch " << e.epoch + 1 << " loss " << e.mean_loss;
      if (e.validation_loss) err << " val " << *e.validation_loss;
      err << "\n";
    }
  });

  nlohmann::json meta = TrainConfigToJson(tc);
  meta["run_config"] = RunConfigToJson(c);
  meta["train_instances"] = std::vector<std::string>(train_names.begin(), train_names.end());
  if (result.best_epoch) meta["best_epoch"] = *result.best_epoch;
  SaveCheckpoint(result.params, CheckpointPath(c).string(), meta);

  std::string log = "epoch,mean_loss,mean_positive_log_prob,validation_loss\n";
  for (const auto& e : result.log) {
    std::ostringstream row;
    row.precision(17);
    row << e.epoch << "," << e.mean_loss << "," << e.mean_positive_log_prob << ",";
    if (e.validation_loss) row << *e.validation_loss;
    log += row.str() + "\n";
  }
  WriteText(fs::path(c.out) / "train_log.csv", log);
  out << "wrote " << CheckpointPath(c).string() << "\n";
  return 0;
}

int CmdEval(const RunConfig& c, std::ostream& out) {
  const auto instances = RequireInstances(c);
  const auto params = LoadCheckpoint(CheckpointPath(c).string());
  auto solver = SolverFor(c, c.out);
  std::vector<BenchmarkRow> runs, best;
  for (const auto& inst : instances) {
    const auto ks = EvaluateKShot(*solver, inst, params, c.shots, DeriveSeed(c.seed, inst.name + "/eval"),
                                  c.clusters);
    for (std::size_t s = 0; s < ks.all.size(); ++s) {
      BenchmarkRow row;
      row.record = ks.all[s];
      row.record.instance = inst.name;
      row.order = RowProvenance(ApplyConstraintPermutation(inst, ks.constraint_perms[s]));
      row.budget_s = row.record.t_total.value_or(0.0);
      PersistPermutation(c.out, row.order);
      runs.push_back(std::move(row));
    }
    BenchmarkRow b;
    b.record = ks.best;
    b.record.instance = inst.name;
    b.budget_s = ks.budget_s;
    best.push_back(std::move(b));
    out << inst.name << ": best " << (ks.best.t_total ? std::to_string(*ks.best.t_total) : "error")
        << " budget " << ks.budget_s << "\n";
  }
  WriteText(fs::path(c.out) / "eval_runs.csv", RecordsCsv(runs));
  WriteText(fs::path(c.out) / "eval_best.csv", RecordsCsv(best));
  return CountErrors(runs) ? 1 : 0;
}

int CmdPerturb(const RunConfig& c, std::ostream& out) {
  const auto instances = RequireInstances(c);
  auto solver = SolverFor(c, c.out);
  std::vector<BenchmarkRow> runs;
  nlohmann::json summary = nlohmann::json::array();
  std::size_t errors = 0;
  for (const auto& inst : instances) {
    const auto r = PerturbationStudy(*solver, inst, c.perturb_seeds, DeriveSeed(c.seed, inst.name + "/perturb"));
    errors += r.errors;
    summary.push_back({{"instance", inst.name},
                       {"mean", r.mean},
                       {"stdev", r.stdev},
                       {"cv", r.cv},
                       {"ok", r.ok},
                       {"errors", r.errors}});
    for (const auto& rec : r.records) {
      BenchmarkRow row;
      row.record = rec;
      row.budget_s = rec.t_total.value_or(0.0);
      runs.push_back(std::move(row));
    }
    out << inst.name << ": mean " << r.mean << " stdev " << r.stdev << " cv " << r.cv << "\n";
  }
  WriteText(fs::path(c.out) / "perturb_runs.csv", RecordsCsv(runs));
  WriteText(fs::path(c.out) / "perturb_summary.json",
            nlohmann::json{{"config", RunConfigToJson(c)}, {"instances", summary}}.dump(2) + "\n");
  return errors ? 1 : 0;
}

int CmdBench(const RunConfig& c, std::ostream& out) {
  const auto instances = RequireInstances(c);
  BenchmarkConfig b;
  for (const auto& s : c.strategies) b.strategies.push_back(ParseStrategy(s));
  b.repeats = c.bench_repeats;
  b.random_seeds = c.random_seeds;
  b.clusters = c.clusters;
  b.shots = c.shots;
  b.seed = c.seed;
  b.workers = c.workers;
  if (std::find(b.strategies.begin(), b.strategies.end(), StrategyKind::kClcr) != b.strategies.end()) {
    b.model = LoadCheckpoint(CheckpointPath(c).string());
  }
  auto solver = SolverFor(c, c.out);
  const auto report = RunBenchmark(*solver, instances, b);
  WriteBenchmark(report, c.out);
  out << RenderTable(report.summaries);
  return CountErrors(report.rows) ? 1 : 0;
}

}  // namespace

std::vector<MilpInstance> LoadInstances(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    std::map<std::string, fs::path> by_stem;
    for (const auto& entry : fs::directory_iterator(path)) {
      const auto ext = entry.path().extension();
      if (!entry.is_regular_file() || (ext != ".mps" && ext != ".json")) continue;
      const std::string stem = entry.path().stem().string();
      auto it = by_stem.find(stem);
      if (it == by_stem.end() || ext == ".json") by_stem[stem] = entry.path();
    }
    for (const auto& [stem, file] : by_stem) files.push_back(file);
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw Error("no such file or directory: " + path.string());
  }
  std::vector<MilpInstance> out;
  std::set<std::string> names;
  for (const auto& file : files) {
    if (file.extension() == ".json") {
      // Skip JSON files that are not instances, such as run configs.
      const auto j = ReadJson(file);
      if (!j.is_object() || j.value("version", std::string()) != kInstanceJsonVersion) continue;
    }
    MilpInstance inst = ReadInstanceFile(file.string());
    if (inst.name.empty()) inst.name = file.stem().string();
    if (!names.insert(inst.name).second) throw Error("duplicate instance name '" + inst.name + "'");
    out.push_back(std::move(inst));
  }
  return out;
}

std::unique_ptr<Solver> MakeSolver(const RunConfig& c, const fs::path& work_root) {
  if (c.adapter == "mock") {
    MockSolverConfig m;
    m.seed = c.seed;
    m.time_limit = c.timeout;
    return std::make_unique<MockSolver>(m);
  }
  const auto j = ReadJson(c.adapter);
  if (j.value("kind", std::string()) == "mock") {
    MockSolverConfig m = MockConfigFromJson(j);
    m.time_limit = c.timeout;
    return std::make_unique<MockSolver>(m);
  }
  SolverAdapterConfig a = AdapterConfigFromJson(j, fs::absolute(fs::path(c.adapter)).parent_path());
  a.time_limit = c.timeout;
  return std::make_unique<ExternalSolver>(std::move(a), work_root);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Constraint reordering for MILP: clustering, pointer network, solver benchmarks", "clcr");
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "run config JSON");
  Knobs knobs;
  knobs.Add(&app, "--seed", "seed", Kind::kUint, "root seed");
  knobs.Add(&app, "--out", "out", Kind::kStr, "output directory");
  knobs.Add(&app, "--workers", "workers", Kind::kUint, "parallel solver runs (bench)");

  auto* gen = app.add_subcommand("generate", "write generated instances as MPS and JSON");
  knobs.Add(gen, "--kind", "kind", Kind::kStr, "set-cover or random");
  knobs.Add(gen, "--count", "count", Kind::kUint, "number of instances");
  knobs.Add(gen, "--rows", "rows", Kind::kUint, "set-cover rows");
  knobs.Add(gen, "--cols", "cols", Kind::kUint, "set-cover columns");
  knobs.Add(gen, "--density", "density", Kind::kReal, "set-cover density");
  knobs.Add(gen, "--vars", "num_vars", Kind::kUint, "random: variables");
  knobs.Add(gen, "--cons", "num_cons", Kind::kUint, "random: constraints");
  knobs.Add(gen, "--integrality", "integrality", Kind::kReal, "random: integer fraction");

  auto* reorder = app.add_subcommand("reorder", "apply a strategy and write the reordered MPS");
  knobs.Add(reorder, "instance", "instances", Kind::kStr, "instance file or directory");
  knobs.Add(reorder, "--strategy", "strategy", Kind::kStr, "none, random, cluster, cmbr, cbr-hl, cbr-lh, clcr");
  knobs.Add(reorder, "--clusters", "clusters", Kind::kUint, "k");
  knobs.Add(reorder, "--checkpoint", "checkpoint", Kind::kStr, "model for clcr");

  auto* samples = app.add_subcommand("samples", "label random cluster orders by solve time");
  knobs.Add(samples, "--instances", "instances", Kind::kStr, "instance file or directory");
  knobs.Add(samples, "--adapter", "adapter", Kind::kStr, "mock or adapter JSON");
  knobs.Add(samples, "--timeout", "timeout", Kind::kReal, "time limit in seconds");
  knobs.Add(samples, "--repeats", "repeats", Kind::kUint, "timed runs per order");
  knobs.Add(samples, "--margin", "margin_rel", Kind::kReal, "relative labeling margin");
  knobs.Add(samples, "--perms", "num_perms", Kind::kUint, "cluster orders per instance");
  knobs.Add(samples, "--clusters", "clusters", Kind::kUint, "k");
  knobs.Add(samples, "--samples", "samples", Kind::kStr, "output dataset path");

  auto* train = app.add_subcommand("train", "train the pointer network on a labeled dataset");
  knobs.Add(train, "--samples", "samples", Kind::kStr, "dataset path");
  knobs.Add(train, "--epochs", "epochs", Kind::kUint, "T");
  knobs.Add(train, "--batch", "batch_size", Kind::kUint, "B");
  knobs.Add(train, "--lr", "lr", Kind::kReal, "learning rate");
  knobs.Add(train, "--embed", "embed_dim", Kind::kUint, "embedding size");
  knobs.Add(train, "--hidden", "hidden_dim", Kind::kUint, "LSTM hidden size");
  knobs.Add(train, "--train-fraction", "train_fraction", Kind::kReal, "share of instances trained on");
  knobs.Add(train, "--checkpoint", "checkpoint", Kind::kStr, "output checkpoint path");

  auto* eval = app.add_subcommand("eval", "k-shot evaluation of a trained model");
  knobs.Add(eval, "--instances", "instances", Kind::kStr, "instance file or directory");
  knobs.Add(eval, "--checkpoint", "checkpoint", Kind::kStr, "model");
  knobs.Add(eval, "--adapter", "adapter", Kind::kStr, "mock or adapter JSON");
  knobs.Add(eval, "--timeout", "timeout", Kind::kReal, "time limit in seconds");
  knobs.Add(eval, "--shots", "shots", Kind::kUint, "sampled orders per instance");
  knobs.Add(eval, "--clusters", "clusters", Kind::kUint, "k");

  auto* perturb = app.add_subcommand("perturb", "solve time spread under random row permutations");
  knobs.Add(perturb, "--instances", "instances", Kind::kStr, "instance file or directory");
  knobs.Add(perturb, "--adapter", "adapter", Kind::kStr, "mock or adapter JSON");
  knobs.Add(perturb, "--timeout", "timeout", Kind::kReal, "time limit in seconds");
  knobs.Add(perturb, "--num-seeds", "perturb_seeds", Kind::kUint, "random permutations per instance");

  auto* bench = app.add_subcommand("bench", "compare strategies and write the report");
  knobs.Add(bench, "--instances", "instances", Kind::kStr, "instance file or directory");
  knobs.Add(bench, "--adapter", "adapter", Kind::kStr, "mock or adapter JSON");
  knobs.Add(bench, "--timeout", "timeout", Kind::kReal, "time limit in seconds");
  knobs.Add(bench, "--strategies", "strategies", Kind::kList, "comma-separated strategy ids");
  knobs.Add(bench, "--repeats", "bench_repeats", Kind::kUint, "runs per deterministic strategy");
  knobs.Add(bench, "--random-seeds", "random_seeds", Kind::kUint, "runs of the random strategy");
  knobs.Add(bench, "--shots", "shots", Kind::kUint, "k-shot trials for clcr");
  knobs.Add(bench, "--clusters", "clusters", Kind::kUint, "k");
  knobs.Add(bench, "--checkpoint", "checkpoint", Kind::kStr, "model for clcr");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config = RunConfigFromJson(ReadJson(config_path), config);
    config = RunConfigFromJson(knobs.Overrides(), config);

    const std::string cmd = app.get_subcommands().front()->get_name();
    fs::create_directories(config.out);
    WriteText(fs::path(config.out) / ("config." + cmd + ".json"), RunConfigToJson(config).dump(2) + "\n");

    if (cmd == "generate") return CmdGenerate(config, out);
    if (cmd == "reorder") return CmdReorder(config, out);
    if (cmd == "samples") return CmdSamples(config, out, err);
    if (cmd == "train") return CmdTrain(config, out, err);
    if (cmd == "eval") return CmdEval(config, out);
    if (cmd == "perturb") return CmdPerturb(config, out);
    if (cmd == "bench") return CmdBench(config, out);
    throw Error("unknown subcommand " + cmd);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace clcr
