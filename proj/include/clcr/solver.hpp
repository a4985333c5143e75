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

#ifndef CLCR_SOLVER_HPP_
#define CLCR_SOLVER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clcr/milp.hpp"

namespace clcr {

enum class SolveStatus { kOptimal, kTimeLimit, kInfeasible, kError };

const char* SolveStatusName(SolveStatus s);
SolveStatus ParseSolveStatus(const std::string& s);

/// Slack allowed on top of the time limit before a run is killed.
inline constexpr double kTimeSlackSeconds = 5.0;
inline constexpr double kDefaultTimeLimit = 600.0;

/// Metrics of one solver run. Missing metrics stay empty, never zero.
struct SolveRecord {
  std::string instance;
  std::string strategy;
  std::string digest;  // PermutationDigest of the solved row order
  SolveStatus status = SolveStatus::kError;
  std::optional<double> t_total;
  std::optional<std::int64_t> n_nodes;
  std::optional<std::int64_t> n_iter;
  std::optional<double> t_presolve;
  std::optional<double> objective;  // as reported, minimization form
  std::optional<double> wall_s;     // measured around the subprocess
  std::uint64_t seed = 0;
  std::string solver;
  double timeout_s = kDefaultTimeLimit;
  std::size_t repeat = 0;
  std::string log;  // captured output, kept for Error records

  bool HasAllMetrics() const { return t_total && n_nodes && n_iter && t_presolve; }
};

/// Throws Error when a record breaks 0 <= t_presolve <= t_total <=
/// timeout + slack, has negative counts, or is an Error with metrics.
void CheckRecord(const SolveRecord& r);

/// A MILP solver backend. Implementations must be safe to call from
/// several threads at once.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string id() const = 0;
  virtual double timeout_s() const = 0;
  /// Solves `inst` in its current row order.
  virtual SolveRecord Solve(const MilpInstance& inst, std::uint64_t seed) = 0;
};

/// One regex with a single capture group, applied line by line.
struct MetricRule {
  std::string regex;
  enum class Aggregate { kFirst, kLast, kSum } aggregate = Aggregate::kLast;
};

struct StatusRule {
  std::string regex;
  SolveStatus status = SolveStatus::kOptimal;
};

struct LogRules {
  std::optional<MetricRule> t_total, n_nodes, n_iter, t_presolve, objective;
  std::vector<StatusRule> status;  // first rule matching any line wins
};

struct ParsedLog {
  std::optional<double> t_total, t_presolve, objective;
  std::optional<std::int64_t> n_nodes, n_iter;
  std::optional<SolveStatus> status;
};

ParsedLog ParseSolverLog(const LogRules& rules, const std::string& log);

/// External solver invoked as a subprocess.
///
/// `args` may contain the placeholders {instance}, {timelimit}, {seed},
/// {workdir} and {config_dir}.
struct SolverAdapterConfig {
  std::string name;
  std::string executable;
  std::vector<std::string> args;
  double time_limit = kDefaultTimeLimit;
  LogRules rules;
  std::filesystem::path config_dir;
  std::vector<std::string> env_allowlist = {"PATH", "HOME", "LANG", "LC_ALL", "TMPDIR",
                                            "PYTHONPATH", "PYTHONHOME", "LD_LIBRARY_PATH",
                                            "VIRTUAL_ENV"};
  bool keep_workdirs = false;
};

SolverAdapterConfig AdapterConfigFromJson(const nlohmann::json& j,
                                          const std::filesystem::path& config_dir = {});
SolverAdapterConfig LoadAdapterConfig(const std::string& path);

class ExternalSolver : public Solver {
 public:
  /// Runs happen in fresh directories below `work_root`.
  ExternalSolver(SolverAdapterConfig config, std::filesystem::path work_root);

  std::string id() const override { return config_.name; }
  double timeout_s() const override { return config_.time_limit; }
  SolveRecord Solve(const MilpInstance& inst, std::uint64_t seed) override;

  const SolverAdapterConfig& config() const { return config_; }

 private:
  SolverAdapterConfig config_;
  std::filesystem::path work_root_;
};

/// Deterministic synthetic metrics, so the harness runs without a solver.
///
/// Time grows with the fraction of row pairs ordered against descending
/// nonzero count (`order_weight`) and with a hash of the row-order digest
/// (`spread`). `noise` adds a run-seed dependent term. Small pure-integer
/// instances also get the exact objective from the brute-force oracle.
struct MockSolverConfig {
  std::uint64_t seed = 0;
  double base_time = 10.0;
  double spread = 0.3;
  double order_weight = 0.5;
  double noise = 0.0;
  double time_limit = kDefaultTimeLimit;
};

MockSolverConfig MockConfigFromJson(const nlohmann::json& j);

class MockSolver : public Solver {
 public:
  explicit MockSolver(MockSolverConfig config = {}) : config_(config) {}

  std::string id() const override { return "mock"; }
  double timeout_s() const override { return config_.time_limit; }
  SolveRecord Solve(const MilpInstance& inst, std::uint64_t seed) override;

 private:
  MockSolverConfig config_;
};

}  // namespace clcr

#endif  // CLCR_SOLVER_HPP_
