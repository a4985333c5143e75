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

#include "clcr/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clcr {

MilpInstance GenerateSetCover(const SetCoverParams& p) {
  if (!(p.density > 0.0 && p.density <= 1.0)) throw Error("set cover density must be in (0, 1]");
  if (p.cols == 0) throw Error("set cover needs at least one column");
  if (p.cost_range.first > p.cost_range.second) throw Error("empty cost range");
  Rng rng(DeriveSeed(p.seed, "set-cover"));
  MilpInstance inst;
  inst.name = "setcover_r" + std::to_string(p.rows) + "_c" + std::to_string(p.cols) + "_s" +
              std::to_string(p.seed);
  inst.num_vars = p.cols;
  inst.bounds.assign(p.cols, VarBounds{0.0, 1.0});
  inst.is_integer.assign(p.cols, true);
  inst.objective.resize(p.cols);
  for (auto& c : inst.objective) {
    c = static_cast<double>(rng.IntIn(p.cost_range.first, p.cost_range.second));
  }
  for (std::size_t i = 0; i < p.rows; ++i) {
    Constraint row;
    row.sense = Sense::kGE;
    row.rhs = 1.0;
    row.original_index = i;
    while (row.entries.empty()) {
      for (std::size_t j = 0; j < p.cols; ++j) {
        if (p.density >= 1.0 || rng.Bernoulli(p.density)) row.entries.push_back(Entry{j, 1.0});
      }
    }
    inst.rows.push_back(std::move(row));
  }
  return inst;
}

GeneratedMilp GenerateRandomMilp(const RandomMilpParams& p) {
  if (p.num_vars < 1 || p.num_cons < 1) throw Error("random MILP needs n, m >= 1");
  if (p.integrality_fraction < 0.0 || p.integrality_fraction > 1.0) {
    throw Error("integrality fraction must be in [0, 1]");
  }
  Rng rng(DeriveSeed(p.seed, "random-milp"));
  const std::size_t n = p.num_vars;
  GeneratedMilp out;
  MilpInstance& inst = out.instance;
  inst.name = "random_n" + std::to_string(n) + "_m" + std::to_string(p.num_cons) + "_s" +
              std::to_string(p.seed);
  inst.num_vars = n;

  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  rng.Shuffle(order);
  const auto num_int = static_cast<std::size_t>(std::llround(p.integrality_fraction * n));
  inst.is_integer.assign(n, false);
  for (std::size_t t = 0; t < num_int; ++t) inst.is_integer[order[t]] = true;

  auto& x0 = out.construction_point;
  x0.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto upper = static_cast<double>(rng.IntIn(1, p.max_upper));
    inst.bounds.push_back(VarBounds{0.0, upper});
    x0[j] = inst.is_integer[j] ? static_cast<double>(rng.IntIn(0, static_cast<std::int64_t>(upper)))
                               : std::round(rng.Uniform(0.0, upper) * 4.0) / 4.0;
    inst.objective.push_back(static_cast<double>(rng.IntIn(-10, 10)));
  }

  for (std::size_t i = 0; i < p.num_cons; ++i) {
    Constraint row;
    row.original_index = i;
    const auto nnz = static_cast<std::size_t>(rng.IntIn(1, static_cast<std::int64_t>(std::min(n, p.max_row_nnz))));
    std::vector<std::size_t> cols = order;
    rng.Shuffle(cols);
    cols.resize(nnz);
    std::sort(cols.begin(), cols.end());
    for (std::size_t col : cols) {
      std::int64_t v = 0;
      while (v == 0) v = rng.IntIn(-p.max_coeff, p.max_coeff);
      row.entries.push_back(Entry{col, static_cast<double>(v)});
    }
    const double activity = RowActivity(row, x0);
    const auto kind = rng.Below(10);
    const double slack = static_cast<double>(rng.IntIn(0, 3));
    if (kind == 0) {
      row.sense = Sense::kEQ;
      row.rhs = activity;
    } else if (kind < 6) {
      row.sense = Sense::kLE;
      row.rhs = activity + slack;
    } else {
      row.sense = Sense::kGE;
      row.rhs = activity - slack;
    }
    inst.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace clcr
