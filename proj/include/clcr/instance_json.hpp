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

#ifndef CLCR_INSTANCE_JSON_HPP_
#define CLCR_INSTANCE_JSON_HPP_

#include <string>

#include <json.hpp>

#include "clcr/milp.hpp"

namespace clcr {

inline constexpr const char* kInstanceJsonVersion = "milp-json/1";

// Canonical JSON: {version, name, n, m, objective, objective_offset,
// maximize_input, rows: [{entries: [[col, coeff]...], sense, rhs,
// original_index}], bounds: [[lo, hi]...], integrality: [j...]}.
// Infinite bounds are written as null.
nlohmann::json InstanceToJson(const MilpInstance& inst);
MilpInstance InstanceFromJson(const nlohmann::json& j);

MilpInstance ReadInstanceJsonFile(const std::string& path);
void WriteInstanceJsonFile(const MilpInstance& inst, const std::string& path);

/// Dispatches on extension: .json is the canonical JSON, anything else MPS.
MilpInstance ReadInstanceFile(const std::string& path);

}  // namespace clcr

#endif  // CLCR_INSTANCE_JSON_HPP_
