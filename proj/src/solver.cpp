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

#include "clcr/solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "clcr/mps.hpp"
#include "clcr/oracle.hpp"

extern char** environ;

namespace clcr {
namespace {

namespace fs = std::filesystem;

std::string ReplaceAll(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string FormatSeconds(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::optional<MetricRule> RuleFromJson(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const auto& r = j.at(key);
  MetricRule rule;
  rule.regex = r.at("regex").get<std::string>();
  const auto agg = r.value("aggregate", std::string("last"));
  if (agg == "first") rule.aggregate = MetricRule::Aggregate::kFirst;
  else if (agg == "last") rule.aggregate = MetricRule::Aggregate::kLast;
  else if (agg == "sum") rule.aggregate = MetricRule::Aggregate::kSum;
  else throw Error("unknown aggregate '" + agg + "' for metric " + key);
  return rule;
}

std::optional<double> ApplyRule(const std::optional<MetricRule>& rule,
                                const std::vector<std::string>& lines) {
  if (!rule) return std::nullopt;
  const std::regex re(rule->regex);
  std::optional<double> out;
  for (const auto& line : lines) {
    std::smatch m;
    if (!std::regex_search(line, m, re) || m.size() < 2) continue;
    char* end = nullptr;
    const std::string text = m[1].str();
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str()) continue;
    if (!out) {
      out = v;
      if (rule->aggregate == MetricRule::Aggregate::kFirst) break;
    } else if (rule->aggregate == MetricRule::Aggregate::kSum) {
      *out += v;
    } else {
      out = v;
    }
  }
  return out;
}

std::optional<std::int64_t> AsCount(std::optional<double> v) {
  if (!v) return std::nullopt;
  return static_cast<std::int64_t>(std::llround(*v));
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const char* SolveStatusName(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
    case SolveStatus::kInfeasible:
      return "Infeasible";
    case SolveStatus::kError:
      return "Error";
  }
  return "?";
}

SolveStatus ParseSolveStatus(const std::string& s) {
  if (s == "Optimal") return SolveStatus::kOptimal;
  if (s == "TimeLimit") return SolveStatus::kTimeLimit;
  if (s == "Infeasible") return SolveStatus::kInfeasible;
  if (s == "Error") return SolveStatus::kError;
  throw Error("unknown solve status '" + s + "'");
}

void CheckRecord(const SolveRecord& r) {
  if (r.status == SolveStatus::kError) {
    if (r.t_total || r.n_nodes || r.n_iter || r.t_presolve) {
      throw Error("Error record carries metrics");
    }
    return;
  }
  if (r.t_presolve && *r.t_presolve < 0) throw Error("negative presolve time");
  if (r.t_presolve && r.t_total && *r.t_presolve > *r.t_total) {
    throw Error("presolve time exceeds total time");
  }
  if (r.t_total && (*r.t_total < 0 || *r.t_total > r.timeout_s + kTimeSlackSeconds)) {
    throw Error("total time outside [0, timeout + slack]");
  }
  if ((r.n_nodes && *r.n_nodes < 0) || (r.n_iter && *r.n_iter < 0)) throw Error("negative count");
}

ParsedLog ParseSolverLog(const LogRules& rules, const std::string& log) {
  std::vector<std::string> lines;
  std::istringstream in(log);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  ParsedLog out;
  out.t_total = ApplyRule(rules.t_total, lines);
  out.t_presolve = ApplyRule(rules.t_presolve, lines);
  out.objective = ApplyRule(rules.objective, lines);
  out.n_nodes = AsCount(ApplyRule(rules.n_nodes, lines));
  out.n_iter = AsCount(ApplyRule(rules.n_iter, lines));
  for (const auto& rule : rules.status) {
    const std::regex re(rule.regex);
    for (const auto& line : lines) {
      if (std::regex_search(line, re)) {
        out.status = rule.status;
        break;
      }
    }
    if (out.status) break;
  }
  return out;
}

SolverAdapterConfig AdapterConfigFromJson(const nlohmann::json& j, const fs::path& config_dir) {
  try {
    SolverAdapterConfig c;
    c.name = j.at("name").get<std::string>();
    c.executable = j.at("executable").get<std::string>();
    c.args = j.value("args", std::vector<std::string>{});
    c.time_limit = j.value("time_limit", kDefaultTimeLimit);
    c.config_dir = config_dir;
    const auto& metrics = j.at("metrics");
    c.rules.t_total = RuleFromJson(metrics, "t_total");
    c.rules.n_nodes = RuleFromJson(metrics, "n_nodes");
    c.rules.n_iter = RuleFromJson(metrics, "n_iter");
    c.rules.t_presolve = RuleFromJson(metrics, "t_presolve");
    c.rules.objective = RuleFromJson(metrics, "objective");
    for (const auto& s : j.value("status", nlohmann::json::array())) {
      c.rules.status.push_back(
          StatusRule{s.at("regex").get<std::string>(), ParseSolveStatus(s.at("status").get<std::string>())});
    }
    if (j.contains("env_allowlist")) c.env_allowlist = j.at("env_allowlist").get<std::vector<std::string>>();
    c.keep_workdirs = j.value("keep_workdirs", false);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed adapter config: ") + e.what());
  }
}

SolverAdapterConfig LoadAdapterConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open adapter config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("'" + path + "': " + e.what());
  }
  return AdapterConfigFromJson(j, fs::absolute(fs::path(path)).parent_path());
}

ExternalSolver::ExternalSolver(SolverAdapterConfig config, fs::path work_root)
    : config_(std::move(config)), work_root_(fs::absolute(work_root)) {
  fs::create_directories(work_root_);
}

SolveRecord ExternalSolver::Solve(const MilpInstance& inst, std::uint64_t seed) {
  SolveRecord rec;
  rec.instance = inst.name;
  rec.digest = PermutationDigest(inst);
  rec.seed = seed;
  rec.solver = config_.name;
  rec.timeout_s = config_.time_limit;

  std::string tmpl = (work_root_ / ("run_" + rec.digest + "_XXXXXX")).string();
  if (!mkdtemp(tmpl.data())) {
    rec.log = "cannot create working directory under " + work_root_.string();
    return rec;
  }
  const fs::path workdir = tmpl;
  const fs::path mps_path = workdir / "instance.mps";
  const fs::path log_path = workdir / "solver.log";
  WriteMpsFile(inst, mps_path.string());

  std::vector<std::string> argv_s = {config_.executable};
  for (const auto& a : config_.args) {
    std::string s = ReplaceAll(a, "{instance}", mps_path.string());
    s = ReplaceAll(s, "{timelimit}", FormatSeconds(config_.time_limit));
    s = ReplaceAll(s, "{seed}", std::to_string(seed % 2147483648ULL));
    s = ReplaceAll(s, "{workdir}", workdir.string());
    s = ReplaceAll(s, "{config_dir}", config_.config_dir.string());
    argv_s.push_back(std::move(s));
  }
  std::vector<std::string> env_s;
  for (const auto& name : config_.env_allowlist) {
    if (const char* v = std::getenv(name.c_str())) env_s.push_back(name + "=" + v);
  }
  std::vector<char*> argv, envp;
  for (auto& s : argv_s) argv.push_back(s.data());
  argv.push_back(nullptr);
  for (auto& s : env_s) envp.push_back(s.data());
  envp.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    rec.log = "fork failed";
    return rec;
  }
  if (pid == 0) {
    if (chdir(workdir.c_str()) != 0) _exit(126);
    const int fd = open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) _exit(126);
    dup2(fd, STDOUT_FILENO);
    dup2(fd, STDERR_FILENO);
    close(fd);
    // execvpe resolves the executable against the scrubbed PATH.
    execvpe(argv[0], argv.data(), envp.data());
    _exit(127);
  }

  const double kill_after = config_.time_limit + kTimeSlackSeconds;
  int status = 0;
  bool killed = false;
  while (true) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r < 0) break;
    if (elapsed > kill_after && !killed) {
      kill(pid, SIGKILL);
      killed = true;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.wall_s = wall;
  const std::string log = ReadFile(log_path);

  if (killed) {
    rec.status = SolveStatus::kTimeLimit;
    rec.t_total = std::min(wall, config_.time_limit + kTimeSlackSeconds);
    rec.log = log;
  } else if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    rec.log = log + "\n[adapter] solver exited abnormally (status " + std::to_string(status) + ")";
  } else {
    const ParsedLog parsed = ParseSolverLog(config_.rules, log);
    if (!parsed.t_total || !parsed.status) {
      rec.log = log + "\n[adapter] could not parse total time and status from the log";
    } else {
      rec.status = *parsed.status;
      rec.t_total = parsed.t_total;
      rec.n_nodes = parsed.n_nodes;
      rec.n_iter = parsed.n_iter;
      rec.t_presolve = parsed.t_presolve;
      if (parsed.objective) rec.objective = inst.maximize_input ? -*parsed.objective : *parsed.objective;
      if (!rec.HasAllMetrics()) rec.log = log;
    }
  }
  if (!config_.keep_workdirs) {
    std::error_code ec;
    fs::remove_all(workdir, ec);
  }
  return rec;
}

MockSolverConfig MockConfigFromJson(const nlohmann::json& j) {
  MockSolverConfig c;
  c.seed = j.value("seed", c.seed);
  c.base_time = j.value("base_time", c.base_time);
  c.spread = j.value("spread", c.spread);
  c.order_weight = j.value("order_weight", c.order_weight);
  c.noise = j.value("noise", c.noise);
  c.time_limit = j.value("time_limit", c.time_limit);
  return c;
}

SolveRecord MockSolver::Solve(const MilpInstance& inst, std::uint64_t seed) {
  SolveRecord rec;
  rec.instance = inst.name;
  rec.digest = PermutationDigest(inst);
  rec.seed = seed;
  rec.solver = id();
  rec.timeout_s = config_.time_limit;

  // Fraction of row pairs (i < j) with nnz_i < nnz_j.
  const std::size_t m = inst.num_cons();
  double inverted = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      pairs += 1.0;
      if (inst.rows[i].entries.size() < inst.rows[j].entries.size()) inverted += 1.0;
    }
  }
  const double disorder = pairs > 0 ? inverted / pairs : 0.0;

  Rng digest_rng(DeriveSeed(config_.seed, rec.digest));
  const double u = digest_rng.Uniform();
  const double u_nodes = digest_rng.Uniform();
  const double u_presolve = digest_rng.Uniform();
  double t = config_.base_time * (1.0 + config_.order_weight * disorder) *
             (1.0 + config_.spread * (u - 0.5));
  if (config_.noise > 0.0) {
    Rng run_rng(DeriveSeed(config_.seed ^ seed, rec.digest, 1));
    t *= 1.0 + config_.noise * (run_rng.Uniform() - 0.5);
  }
  // Quantize so reports are stable to the printed precision.
  t = std::round(t * 1e6) / 1e6;

  if (t >= config_.time_limit) {
    rec.status = SolveStatus::kTimeLimit;
    t = config_.time_limit;
  } else {
    rec.status = SolveStatus::kOptimal;
  }
  rec.t_total = t;
  rec.t_presolve = std::round(t * (0.01 + 0.04 * u_presolve) * 1e6) / 1e6;
  rec.n_nodes = static_cast<std::int64_t>(std::llround(t * (5.0 + 10.0 * u_nodes)));
  rec.n_iter = static_cast<std::int64_t>(std::llround(t * 100.0 * (1.0 + u)));

  bool pure_integer = inst.num_vars <= 20;
  for (bool b : inst.is_integer) pure_integer = pure_integer && b;
  if (pure_integer) {
    const auto oracle = BruteForceOracle(inst);
    if (oracle.status == OracleStatus::kOptimal) rec.objective = oracle.objective;
    if (oracle.status == OracleStatus::kInfeasible) rec.status = SolveStatus::kInfeasible;
  }
  return rec;
}

}  // namespace clcr
