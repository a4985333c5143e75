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

#include "clcr/instance_json.hpp"

#include <cmath>
#include <fstream>

#include "clcr/mps.hpp"

namespace clcr {

using nlohmann::json;

json InstanceToJson(const MilpInstance& inst) {
  Validate(inst);
  json j;
  j["version"] = kInstanceJsonVersion;
  j["name"] = inst.name;
  j["n"] = inst.num_vars;
  j["m"] = inst.num_cons();
  j["objective"] = inst.objective;
  j["objective_offset"] = inst.objective_offset;
  j["maximize_input"] = inst.maximize_input;
  json rows = json::array();
  for (const auto& row : inst.rows) {
    json entries = json::array();
    for (const auto& e : row.entries) entries.push_back(json::array({e.col, e.coeff}));
    rows.push_back({{"entries", entries},
                    {"sense", SenseName(row.sense)},
                    {"rhs", row.rhs},
                    {"original_index", row.original_index}});
  }
  j["rows"] = rows;
  json bounds = json::array();
  for (const auto& b : inst.bounds) {
    json lo = std::isinf(b.lower) ? json(nullptr) : json(b.lower);
    json hi = std::isinf(b.upper) ? json(nullptr) : json(b.upper);
    bounds.push_back(json::array({lo, hi}));
  }
  j["bounds"] = bounds;
  j["integrality"] = inst.IntegerVars();
  return j;
}

MilpInstance InstanceFromJson(const json& j) {
  try {
    if (j.value("version", std::string()) != kInstanceJsonVersion) {
      throw Error(std::string("expected instance version ") + kInstanceJsonVersion);
    }
    MilpInstance inst;
    inst.name = j.at("name").get<std::string>();
    inst.num_vars = j.at("n").get<std::size_t>();
    inst.objective = j.at("objective").get<std::vector<double>>();
    inst.objective_offset = j.value("objective_offset", 0.0);
    inst.maximize_input = j.value("maximize_input", false);
    for (const auto& r : j.at("rows")) {
      Constraint row;
      for (const auto& e : r.at("entries")) {
        row.entries.push_back(Entry{e.at(0).get<std::size_t>(), e.at(1).get<double>()});
      }
      row.sense = ParseSense(r.at("sense").get<std::string>());
      row.rhs = r.at("rhs").get<double>();
      row.original_index = r.at("original_index").get<std::size_t>();
      inst.rows.push_back(std::move(row));
    }
    if (j.at("m").get<std::size_t>() != inst.rows.size()) {
      throw Error("field m does not match the number of rows");
    }
    for (const auto& b : j.at("bounds")) {
      VarBounds vb;
      vb.lower = b.at(0).is_null() ? -kInf : b.at(0).get<double>();
      vb.upper = b.at(1).is_null() ? kInf : b.at(1).get<double>();
      inst.bounds.push_back(vb);
    }
    inst.is_integer.assign(inst.num_vars, false);
    for (const auto& v : j.at("integrality")) {
      const auto col = v.get<std::size_t>();
      if (col >= inst.num_vars) throw Error("integrality index out of range");
      inst.is_integer[col] = true;
    }
    Validate(inst);
    return inst;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed instance JSON: ") + e.what());
  }
}

MilpInstance ReadInstanceJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("'" + path + "': " + e.what());
  }
  return InstanceFromJson(j);
}

void WriteInstanceJsonFile(const MilpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << InstanceToJson(inst).dump(1) << "\n";
}

MilpInstance ReadInstanceFile(const std::string& path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return ReadInstanceJsonFile(path);
  }
  return ReadMpsFile(path);
}

}  // namespace clcr
