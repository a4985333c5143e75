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

#include "clcr/oracle.hpp"

#include <cmath>
#include <limits>

namespace clcr {
namespace {

bool IsSmallInteger(double v) {
  return std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e12;
}

bool AllIntegerData(const MilpInstance& inst) {
  if (!IsSmallInteger(inst.objective_offset)) return false;
  for (double c : inst.objective) {
    if (!IsSmallInteger(c)) return false;
  }
  for (const auto& row : inst.rows) {
    if (!IsSmallInteger(row.rhs)) return false;
    for (const auto& e : row.entries) {
      if (!IsSmallInteger(e.coeff)) return false;
    }
  }
  return true;
}

template <typename T>
bool Satisfies(Sense sense, T activity, T rhs) {
  switch (sense) {
    case Sense::kLE:
      return activity <= rhs;
    case Sense::kGE:
      return activity >= rhs;
    case Sense::kEQ:
      return activity == rhs;
  }
  return false;
}

// Enumerates the box with an odometer; `feasible` and `value` see the
// current point as T values.
template <typename T, typename Feasible, typename Value>
OracleResult Enumerate(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi,
                       Feasible feasible, Value value, double offset) {
  const std::size_t n = lo.size();
  std::vector<T> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<T>(lo[j]);
  OracleResult result;
  bool found = false;
  T best{};
  while (true) {
    ++result.points_checked;
    if (feasible(x)) {
      T v = value(x);
      if (!found || v < best) {
        found = true;
        best = v;
        result.argmin.assign(x.begin(), x.end());
      }
    }
    std::size_t j = n;
    while (j > 0 && x[j - 1] == static_cast<T>(hi[j - 1])) {
      x[j - 1] = static_cast<T>(lo[j - 1]);
      --j;
    }
    if (j == 0) break;
    x[j - 1] += 1;
  }
  if (found) {
    result.status = OracleStatus::kOptimal;
    result.objective = static_cast<double>(best) + offset;
  } else {
    result.status = OracleStatus::kInfeasible;
    result.argmin.clear();
  }
  return result;
}

}  // namespace

const char* OracleStatusName(OracleStatus s) {
  switch (s) {
    case OracleStatus::kOptimal:
      return "Optimal";
    case OracleStatus::kInfeasible:
      return "Infeasible";
    case OracleStatus::kUnboundedOrTooLarge:
      return "Unbounded-or-TooLarge";
  }
  return "?";
}

OracleResult BruteForceOracle(const MilpInstance& inst, std::uint64_t enumeration_cap) {
  Validate(inst);
  const std::size_t n = inst.num_vars;
  for (std::size_t j = 0; j < n; ++j) {
    if (!inst.is_integer[j]) {
      throw UnsupportedInstance("oracle requires pure-integer instances; variable " +
                                std::to_string(j) + " is continuous");
    }
  }
  std::vector<std::int64_t> lo(n), hi(n);
  long double volume = 1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = inst.bounds[j];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper)) {
      return OracleResult{OracleStatus::kUnboundedOrTooLarge, 0.0, {}, 0};
    }
    lo[j] = static_cast<std::int64_t>(std::ceil(b.lower - kRealTolerance));
    hi[j] = static_cast<std::int64_t>(std::floor(b.upper + kRealTolerance));
    if (hi[j] < lo[j]) return OracleResult{OracleStatus::kInfeasible, 0.0, {}, 0};
    volume *= static_cast<long double>(hi[j] - lo[j] + 1);
    if (volume > static_cast<long double>(enumeration_cap)) {
      return OracleResult{OracleStatus::kUnboundedOrTooLarge, 0.0, {}, 0};
    }
  }

  if (AllIntegerData(inst)) {
    struct IntRow {
      std::vector<std::pair<std::size_t, std::int64_t>> entries;
      Sense sense;
      std::int64_t rhs;
    };
    std::vector<IntRow> rows;
    for (const auto& row : inst.rows) {
      IntRow r{{}, row.sense, static_cast<std::int64_t>(row.rhs)};
      for (const auto& e : row.entries) r.entries.push_back({e.col, static_cast<std::int64_t>(e.coeff)});
      rows.push_back(std::move(r));
    }
    std::vector<std::int64_t> cost(n);
    for (std::size_t j = 0; j < n; ++j) cost[j] = static_cast<std::int64_t>(inst.objective[j]);
    auto feasible = [&](const std::vector<std::int64_t>& x) {
      for (const auto& r : rows) {
        std::int64_t a = 0;
        for (const auto& [col, v] : r.entries) a += v * x[col];
        if (!Satisfies<std::int64_t>(r.sense, a, r.rhs)) return false;
      }
      return true;
    };
    auto value = [&](const std::vector<std::int64_t>& x) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < n; ++j) s += cost[j] * x[j];
      return s;
    };
    return Enumerate<std::int64_t>(lo, hi, feasible, value, inst.objective_offset);
  }

  auto feasible = [&](const std::vector<double>& x) {
    for (const auto& row : inst.rows) {
      if (!RowSatisfied(row, x, kRealTolerance)) return false;
    }
    return true;
  };
  auto value = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += inst.objective[j] * x[j];
    return s;
  };
  return Enumerate<double>(lo, hi, feasible, value, inst.objective_offset);
}

}  // namespace clcr
