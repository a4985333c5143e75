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

#ifndef CLCR_CLI_HPP_
#define CLCR_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "clcr/milp.hpp"
#include "clcr/solver.hpp"

namespace clcr {

/// Every knob of a pipeline run. Serialized as a flat JSON object.
struct RunConfig {
  std::string instances;   // file or directory of .mps/.json instances
  std::string out = "out";
  std::string checkpoint;  // model for train output, eval, bench and reorder
  std::string samples;     // labeled dataset, defaults to <out>/samples.json
  std::uint64_t seed = 0;
  std::size_t clusters = 10;

  // generate
  std::string kind = "set-cover";  // or "random"
  std::size_t count = 10;
  std::size_t rows = 500;
  std::size_t cols = 1000;
  double density = 0.05;
  std::size_t num_vars = 10;
  std::size_t num_cons = 8;
  double integrality = 1.0;

  // pointer net and training
  std::size_t embed_dim = 128;
  std::size_t hidden_dim = 128;
  std::size_t epochs = 1000;
  std::size_t batch_size = 8;
  double lr = 1e-3;
  double train_fraction = 0.8;

  // harness
  std::string adapter = "mock";  // "mock" or an adapter JSON file
  double timeout = 600.0;
  std::size_t repeats = 3;
  double margin_rel = 0.01;
  std::size_t num_perms = 20;
  std::size_t shots = 5;
  std::size_t workers = 1;
  std::size_t perturb_seeds = 100;
  std::size_t random_seeds = 20;
  std::size_t bench_repeats = 1;
  std::vector<std::string> strategies = {"none", "random", "cluster", "cmbr", "cbr-hl", "cbr-lh"};
  std::string strategy = "none";  // reorder

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json RunConfigToJson(const RunConfig& c);

/// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
RunConfig RunConfigFromJson(const nlohmann::json& j, RunConfig base = {});

/// Loads instances from a file or every .mps/.json file in a directory,
/// sorted by file name. A stem present in both formats is read once from
/// its JSON. Instances without a name are named after their file.
std::vector<MilpInstance> LoadInstances(const std::filesystem::path& path);

/// The mock solver or an external adapter, with the configured time limit.
std::unique_ptr<Solver> MakeSolver(const RunConfig& config, const std::filesystem::path& work_root);

/// Entry point of the clcr executable. Returns the process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clcr

#endif  // CLCR_CLI_HPP_
