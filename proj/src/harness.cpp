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

#include "clcr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace clcr {
namespace {

namespace fs = std::filesystem;

std::string Num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
std::string Opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) return Num(*v);
  else return std::to_string(*v);
}

std::string Fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

Permutation RandomClusterPerm(std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(order);
  return Permutation(std::move(order));
}

nlohmann::json OptJson(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }
nlohmann::json OptJson(const std::optional<std::int64_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

bool Better(const SolveRecord& a, const SolveRecord& b) {
  if (*a.t_total != *b.t_total) return *a.t_total < *b.t_total;
  const auto ia = a.n_iter.value_or(std::numeric_limits<std::int64_t>::max());
  const auto ib = b.n_iter.value_or(std::numeric_limits<std::int64_t>::max());
  return ia < ib;
}

}  // namespace

double Median(std::vector<double> values) {
  if (values.empty()) throw Error("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double ShiftedGeometricMean(std::span<const double> values, double shift) {
  if (values.empty()) throw Error("shifted geometric mean of an empty set");
  double log_sum = 0.0;
  for (double v : values) {
    if (v + shift <= 0.0) throw Error("shifted geometric mean needs x + shift > 0");
    log_sum += std::log(v + shift);
  }
  return std::exp(log_sum / static_cast<double>(values.size())) - shift;
}

std::vector<TrainingSample> LabeledDataset::TrainingSamples() const {
  std::vector<TrainingSample> out;
  for (const auto& s : samples) out.push_back(s.sample);
  return out;
}

std::optional<SampleLabel> LabelFromProvenance(const SampleProvenance& p) {
  const double reward = p.baseline_median - p.permuted_median;
  const double margin = p.margin_rel * p.baseline_median;
  if (reward > margin) return SampleLabel::kPositive;
  if (reward < -margin) return SampleLabel::kNegative;
  return std::nullopt;
}

LabeledDataset GenerateSamples(Solver& solver, const MilpInstance& inst, const SampleGenConfig& config) {
  if (config.num_perms < 1 || config.repeats < 1) throw Error("sample generation needs num_perms, repeats >= 1");
  LabeledDataset out;
  const auto clustered = ClusterInstance(inst, config.clusters, DeriveSeed(config.seed, "cluster"));
  const auto descriptors = ToDescriptorSet(clustered.descriptors);
  const std::size_t k = clustered.clustering.k;

  auto timed_runs = [&](const MilpInstance& m, const char* purpose, std::size_t index)
      -> std::optional<std::vector<double>> {
    std::vector<double> times;
    for (std::size_t r = 0; r < config.repeats; ++r) {
      const SolveRecord rec = solver.Solve(m, DeriveSeed(config.seed, purpose, index * 1000 + r));
      if (rec.status == SolveStatus::kError || !rec.t_total) return std::nullopt;
      times.push_back(*rec.t_total);
    }
    return times;
  };

  const auto baseline = timed_runs(inst, "baseline", 0);
  if (!baseline) {
    ++out.failed;
    out.warnings.push_back(inst.name + ": baseline run failed, no samples generated");
    return out;
  }
  const double baseline_median = Median(*baseline);

  for (std::size_t p = 0; p < config.num_perms; ++p) {
    const bool identity = config.include_identity && p == 0;
    const Permutation cluster_perm =
        identity ? Permutation::Identity(k) : RandomClusterPerm(k, DeriveSeed(config.seed, "cluster-perm", p));
    // The identity slot re-solves the baseline row order itself.
    const Permutation rows = identity ? Permutation::Identity(inst.num_cons())
                                      : ExpandClusterOrder(clustered.clustering, cluster_perm);
    const MilpInstance permuted = ApplyConstraintPermutation(inst, rows);
    const auto times = timed_runs(permuted, "permuted", p);
    if (!times) {
      ++out.failed;
      out.warnings.push_back(inst.name + ": permutation " + std::to_string(p) + " had an Error run, discarded");
      continue;
    }
    SampleProvenance prov;
    prov.instance = inst.name;
    prov.cluster_perm = cluster_perm.order();
    prov.digest = PermutationDigest(permuted);
    prov.baseline_times = *baseline;
    prov.permuted_times = *times;
    prov.baseline_median = baseline_median;
    prov.permuted_median = Median(*times);
    prov.repeats = config.repeats;
    prov.margin_rel = config.margin_rel;
    const auto label = LabelFromProvenance(prov);
    if (!label) {
      ++out.discarded;
      continue;
    }
    LabeledSample s;
    s.sample.instance = inst.name;
    s.sample.descriptors = descriptors;
    s.sample.perm = cluster_perm;
    s.sample.label = *label;
    s.sample.reward = prov.baseline_median - prov.permuted_median;
    s.provenance = std::move(prov);
    out.samples.push_back(std::move(s));
  }
  return out;
}

nlohmann::json DatasetToJson(const LabeledDataset& d) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& ls : d.samples) {
    const auto& s = ls.sample;
    const auto& p = ls.provenance;
    samples.push_back({{"instance", s.instance},
                       {"descriptors", s.descriptors},
                       {"perm", s.perm.order()},
                       {"label", s.label == SampleLabel::kPositive ? "positive" : "negative"},
                       {"reward", s.reward},
                       {"provenance",
                        {{"instance", p.instance},
                         {"cluster_perm", p.cluster_perm},
                         {"digest", p.digest},
                         {"baseline_times", p.baseline_times},
                         {"permuted_times", p.permuted_times},
                         {"baseline_median", p.baseline_median},
                         {"permuted_median", p.permuted_median},
                         {"repeats", p.repeats},
                         {"margin_rel", p.margin_rel}}}});
  }
  return {{"version", kSamplesJsonVersion},
          {"samples", samples},
          {"discarded", d.discarded},
          {"failed", d.failed},
          {"warnings", d.warnings}};
}

LabeledDataset DatasetFromJson(const nlohmann::json& j) {
  try {
    if (j.value("version", std::string()) != kSamplesJsonVersion) {
      throw Error(std::string("expected samples version ") + kSamplesJsonVersion);
    }
    LabeledDataset d;
    d.discarded = j.value("discarded", std::size_t{0});
    d.failed = j.value("failed", std::size_t{0});
    d.warnings = j.value("warnings", std::vector<std::string>{});
    for (const auto& e : j.at("samples")) {
      LabeledSample ls;
      ls.sample.instance = e.at("instance").get<std::string>();
      ls.sample.descriptors = e.at("descriptors").get<DescriptorSet>();
      ls.sample.perm = Permutation(e.at("perm").get<std::vector<std::size_t>>());
      const auto label = e.at("label").get<std::string>();
      if (label != "positive" && label != "negative") throw Error("unknown sample label '" + label + "'");
      ls.sample.label = label == "positive" ? SampleLabel::kPositive : SampleLabel::kNegative;
      ls.sample.reward = e.at("reward").get<double>();
      const auto& p = e.at("provenance");
      ls.provenance.instance = p.at("instance").get<std::string>();
      ls.provenance.cluster_perm = p.at("cluster_perm").get<std::vector<std::size_t>>();
      ls.provenance.digest = p.at("digest").get<std::string>();
      ls.provenance.baseline_times = p.at("baseline_times").get<std::vector<double>>();
      ls.provenance.permuted_times = p.at("permuted_times").get<std::vector<double>>();
      ls.provenance.baseline_median = p.at("baseline_median").get<double>();
      ls.provenance.permuted_median = p.at("permuted_median").get<double>();
      ls.provenance.repeats = p.at("repeats").get<std::size_t>();
      ls.provenance.margin_rel = p.at("margin_rel").get<double>();
      if (ls.sample.perm.size() != ls.sample.descriptors.size()) {
        throw Error("sample permutation length does not match its descriptors");
      }
      d.samples.push_back(std::move(ls));
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed samples file: ") + e.what());
  }
}

KShotResult EvaluateKShot(Solver& solver, const MilpInstance& inst, const PointerNetParams& params,
                          std::size_t shots, std::uint64_t seed, std::size_t clusters) {
  if (shots < 1) throw Error("k-shot evaluation needs shots >= 1");
  KShotResult out;
  const auto clustered = ClusterInstance(inst, clusters, DeriveSeed(seed, "cluster"));
  const auto descriptors = ToDescriptorSet(clustered.descriptors);
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < shots; ++s) {
    const auto sample = SamplePermutation(params, descriptors, DeriveSeed(seed, "kshot", s));
    const Permutation rows = ExpandClusterOrder(clustered.clustering, sample.perm);
    if (!Permutation::IsBijection(rows.order())) throw Error("k-shot produced an invalid ordering");
    SolveRecord rec = solver.Solve(ApplyConstraintPermutation(inst, rows), seed);
    rec.strategy = "clcr";
    rec.repeat = s;
    if (rec.status != SolveStatus::kError && rec.t_total) {
      out.budget_s += *rec.t_total;
      if (!best || Better(rec, out.all[*best])) best = out.all.size();
    }
    out.constraint_perms.push_back(rows);
    out.all.push_back(std::move(rec));
  }
  if (best) {
    out.best = out.all[*best];
  } else {
    out.best = SolveRecord{};
    out.best.instance = inst.name;
    out.best.strategy = "clcr";
    out.best.solver = solver.id();
    out.best.timeout_s = solver.timeout_s();
    out.best.seed = seed;
    out.best.log = "every k-shot run failed";
  }
  return out;
}

PerturbationResult PerturbationStudy(Solver& solver, const MilpInstance& inst, std::size_t num_seeds,
                                     std::uint64_t seed) {
  PerturbationResult out;
  std::vector<double> times;
  for (std::size_t s = 0; s < num_seeds; ++s) {
    const Permutation p = StrategyRandom(inst, DeriveSeed(seed, "perturb", s));
    SolveRecord rec = solver.Solve(ApplyConstraintPermutation(inst, p), seed);
    rec.strategy = "random";
    rec.repeat = s;
    if (rec.status == SolveStatus::kError || !rec.t_total) {
      ++out.errors;
    } else {
      times.push_back(*rec.t_total);
    }
    out.records.push_back(std::move(rec));
  }
  out.ok = times.size();
  if (!times.empty()) {
    out.mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
    if (times.size() > 1) {
      double ss = 0.0;
      for (double t : times) ss += (t - out.mean) * (t - out.mean);
      out.stdev = std::sqrt(ss / static_cast<double>(times.size() - 1));
    }
    out.cv = out.mean > 0 ? out.stdev / out.mean : 0.0;
  }
  return out;
}

BenchmarkReport RunBenchmark(Solver& solver, std::span<const MilpInstance> instances,
                             const BenchmarkConfig& config) {
  if (instances.empty() || config.strategies.empty()) throw Error("benchmark needs instances and strategies");
  if (config.repeats < 1) throw Error("benchmark needs repeats >= 1");
  for (auto kind : config.strategies) {
    if (kind == StrategyKind::kClcr && !config.model) throw Error("strategy clcr needs a model checkpoint");
  }

  struct Job {
    std::size_t instance;
    StrategyKind kind;
    std::size_t repeat;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (auto kind : config.strategies) {
      const std::size_t runs = kind == StrategyKind::kRandom ? config.random_seeds : config.repeats;
      for (std::size_t r = 0; r < runs; ++r) jobs.push_back({i, kind, r});
    }
  }

  std::vector<BenchmarkRow> rows(jobs.size());
  auto run = [&](std::size_t j) {
    const Job& job = jobs[j];
    const MilpInstance& inst = instances[job.instance];
    const std::uint64_t solver_seed = config.seed;
    BenchmarkRow row;
    if (job.kind == StrategyKind::kClcr) {
      const auto ks = EvaluateKShot(solver, inst, *config.model, config.shots,
                                    DeriveSeed(config.seed, inst.name + "/clcr", job.repeat), config.clusters);
      row.record = ks.best;
      row.budget_s = ks.budget_s;
      for (std::size_t s = 0; s < ks.all.size(); ++s) {
        if (ks.all[s].digest == ks.best.digest) {
          row.order = RowProvenance(ApplyConstraintPermutation(inst, ks.constraint_perms[s]));
          break;
        }
      }
    } else {
      StrategyOptions opts;
      opts.clusters = config.clusters;
      opts.seed = DeriveSeed(config.seed, inst.name + "/" + StrategyName(job.kind), job.repeat);
      const Permutation p = HeuristicPermutation(job.kind, inst, opts);
      const MilpInstance permuted = ApplyConstraintPermutation(inst, p);
      row.record = solver.Solve(permuted, solver_seed);
      row.order = RowProvenance(permuted);
      row.budget_s = row.record.t_total.value_or(0.0);
    }
    row.record.instance = inst.name;
    row.record.strategy = StrategyName(job.kind);
    row.record.repeat = job.repeat;
    rows[j] = std::move(row);
  };

  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex error_mu;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
          try {
            run(j);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  BenchmarkReport report;
  report.rows = std::move(rows);
  std::vector<std::string> names;
  for (auto kind : config.strategies) names.push_back(StrategyName(kind));
  report.summaries = SummarizeBenchmark(report.rows, names, &report.baseline);
  return report;
}

std::vector<StrategySummary> SummarizeBenchmark(std::span<const BenchmarkRow> rows,
                                                std::span<const std::string> strategy_order,
                                                std::string* baseline) {
  // (strategy, instance) -> successful records; std::map keeps a fixed order.
  std::map<std::string, std::map<std::string, std::vector<const SolveRecord*>>> groups;
  std::map<std::string, std::size_t> failed;
  for (const auto& row : rows) {
    const auto& r = row.record;
    auto& per_instance = groups[r.strategy][r.instance];
    if (r.status == SolveStatus::kError || !r.t_total) {
      ++failed[r.strategy];
      continue;
    }
    per_instance.push_back(&r);
  }
  auto median_of = [](const std::vector<const SolveRecord*>& recs, auto get) -> std::optional<double> {
    std::vector<double> v;
    for (const auto* r : recs) {
      if (auto x = get(*r)) v.push_back(static_cast<double>(*x));
    }
    if (v.empty()) return std::nullopt;
    return Median(v);
  };

  std::vector<StrategySummary> out;
  for (const auto& name : strategy_order) {
    StrategySummary s;
    s.strategy = name;
    s.failed_runs = failed[name];
    std::vector<double> times, nodes, iters, presolve;
    for (const auto& [instance, recs] : groups[name]) {
      if (recs.empty()) continue;
      ++s.instances;
      times.push_back(*median_of(recs, [](const SolveRecord& r) { return r.t_total; }));
      if (auto v = median_of(recs, [](const SolveRecord& r) { return r.n_nodes; })) nodes.push_back(*v);
      if (auto v = median_of(recs, [](const SolveRecord& r) { return r.n_iter; })) iters.push_back(*v);
      if (auto v = median_of(recs, [](const SolveRecord& r) { return r.t_presolve; })) presolve.push_back(*v);
    }
    auto mean = [](const std::vector<double>& v) {
      return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    if (!times.empty()) s.time_sgm = ShiftedGeometricMean(times, 1.0);
    s.time_mean = mean(times);
    s.nodes_mean = mean(nodes);
    s.iter_mean = mean(iters);
    s.presolve_mean = mean(presolve);
    out.push_back(s);
  }
  std::string base = strategy_order.empty() ? "" : strategy_order.front();
  for (const auto& name : strategy_order) {
    if (name == "none") base = name;
  }
  double base_time = 0.0;
  for (const auto& s : out) {
    if (s.strategy == base) base_time = s.time_sgm;
  }
  for (auto& s : out) s.speedup = s.time_sgm > 0 ? base_time / s.time_sgm : 0.0;
  if (baseline) *baseline = base;
  return out;
}

std::string RecordsCsv(std::span<const BenchmarkRow> rows) {
  std::vector<const BenchmarkRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const BenchmarkRow* a, const BenchmarkRow* b) {
    return std::tie(a->record.instance, a->record.strategy, a->record.repeat) <
           std::tie(b->record.instance, b->record.strategy, b->record.repeat);
  });
  std::string out =
      "instance,strategy,repeat,seed,digest,status,t_total,n_nodes,n_iter,t_presolve,objective,budget_s,"
      "wall_s,solver,timeout_s\n";
  for (const auto* row : sorted) {
    const auto& r = row->record;
    out += r.instance + "," + r.strategy + "," + std::to_string(r.repeat) + "," + std::to_string(r.seed) + "," +
           r.digest + "," + SolveStatusName(r.status) + "," + Opt(r.t_total) + "," + Opt(r.n_nodes) + "," +
           Opt(r.n_iter) + "," + Opt(r.t_presolve) + "," + Opt(r.objective) + "," + Num(row->budget_s) + "," +
           Opt(r.wall_s) + "," + r.solver + "," + Num(r.timeout_s) + "\n";
  }
  return out;
}

std::string RenderTable(std::span<const StrategySummary> summaries) {
  std::string out = "| Method | Time | Nodes | Iterations | Presolve | Speedup |\n";
  out += "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& s : summaries) {
    out += "| " + s.strategy + " | " + Fixed(s.time_sgm, 2) + " | " + Fixed(s.nodes_mean, 2) + " | " +
           Fixed(s.iter_mean, 2) + " | " + Fixed(s.presolve_mean, 2) + " | " + Fixed(s.speedup, 2) + " |\n";
  }
  return out;
}

nlohmann::json RecordToJson(const SolveRecord& r) {
  return {{"instance", r.instance},   {"strategy", r.strategy},
          {"digest", r.digest},       {"status", SolveStatusName(r.status)},
          {"t_total", OptJson(r.t_total)}, {"n_nodes", OptJson(r.n_nodes)},
          {"n_iter", OptJson(r.n_iter)},   {"t_presolve", OptJson(r.t_presolve)},
          {"objective", OptJson(r.objective)}, {"wall_s", OptJson(r.wall_s)},
          {"seed", r.seed},           {"solver", r.solver},
          {"timeout_s", r.timeout_s}, {"repeat", r.repeat}};
}

void PersistPermutation(const fs::path& out_dir, std::span<const std::size_t> order) {
  const std::string digest = PermutationDigest(order);
  const fs::path dir = out_dir / "perms";
  fs::create_directories(dir);
  const fs::path file = dir / (digest + ".json");
  if (fs::exists(file)) return;
  std::ofstream out(file);
  out << nlohmann::json{{"digest", digest}, {"order", std::vector<std::size_t>(order.begin(), order.end())}}.dump()
      << "\n";
}

void WriteBenchmark(const BenchmarkReport& report, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "runs.csv");
    out << RecordsCsv(report.rows);
  }
  {
    std::ofstream out(out_dir / "summary.csv");
    out << "strategy,instances,failed_runs,time_sgm,time_mean,nodes_mean,iter_mean,presolve_mean,speedup\n";
    for (const auto& s : report.summaries) {
      out << s.strategy << "," << s.instances << "," << s.failed_runs << "," << Num(s.time_sgm) << ","
          << Num(s.time_mean) << "," << Num(s.nodes_mean) << "," << Num(s.iter_mean) << ","
          << Num(s.presolve_mean) << "," << Num(s.speedup) << "\n";
    }
  }
  {
    nlohmann::json j;
    j["baseline"] = report.baseline;
    j["time_aggregate"] = "shifted geometric mean, shift 1 s";
    for (const auto& s : report.summaries) {
      j["strategies"].push_back({{"strategy", s.strategy},
                                 {"instances", s.instances},
                                 {"failed_runs", s.failed_runs},
                                 {"time_sgm", s.time_sgm},
                                 {"time_mean", s.time_mean},
                                 {"nodes_mean", s.nodes_mean},
                                 {"iter_mean", s.iter_mean},
                                 {"presolve_mean", s.presolve_mean},
                                 {"speedup", s.speedup}});
    }
    std::ofstream out(out_dir / "summary.json");
    out << j.dump(2) << "\n";
  }
  {
    std::ofstream out(out_dir / "table.md");
    out << RenderTable(report.summaries);
  }
  for (const auto& row : report.rows) {
    if (!row.order.empty()) PersistPermutation(out_dir, row.order);
  }
}

}  // namespace clcr
