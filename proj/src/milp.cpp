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

#include "clcr/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace clcr {

const char* SenseName(Sense s) {
  switch (s) {
    case Sense::kLE:
      return "LE";
    case Sense::kGE:
      return "GE";
    case Sense::kEQ:
      return "EQ";
  }
  return "??";
}

Sense ParseSense(const std::string& s) {
  if (s == "LE" || s == "L") return Sense::kLE;
  if (s == "GE" || s == "G") return Sense::kGE;
  if (s == "EQ" || s == "E") return Sense::kEQ;
  throw Error("unknown constraint sense '" + s + "'");
}

std::vector<std::size_t> MilpInstance::IntegerVars() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < is_integer.size(); ++j) {
    if (is_integer[j]) out.push_back(j);
  }
  return out;
}

void Validate(const MilpInstance& inst) {
  const std::size_t n = inst.num_vars;
  if (inst.objective.size() != n || inst.bounds.size() != n ||
      inst.is_integer.size() != n) {
    throw Error("instance '" + inst.name + "': per-variable arrays must have length " +
                std::to_string(n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = inst.bounds[j];
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper) {
      throw Error("variable " + std::to_string(j) + ": invalid bounds");
    }
    if (!std::isfinite(inst.objective[j])) {
      throw Error("variable " + std::to_string(j) + ": non-finite objective");
    }
  }
  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    const auto& row = inst.rows[i];
    if (!std::isfinite(row.rhs)) {
      throw Error("row " + std::to_string(i) + ": non-finite rhs");
    }
    for (std::size_t e = 0; e < row.entries.size(); ++e) {
      const auto& entry = row.entries[e];
      if (entry.col >= n) {
        throw Error("row " + std::to_string(i) + ": column index out of range");
      }
      if (!std::isfinite(entry.coeff) || entry.coeff == 0.0) {
        throw Error("row " + std::to_string(i) + ": coefficients must be finite and nonzero");
      }
      if (e > 0 && row.entries[e - 1].col >= entry.col) {
        throw Error("row " + std::to_string(i) +
                    ": entries must be strictly sorted by column");
      }
    }
  }
}

void NormalizeEntries(std::vector<Entry>& entries) {
  std::erase_if(entries, [](const Entry& e) { return e.coeff == 0.0; });
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.col < b.col; });
  for (std::size_t e = 1; e < entries.size(); ++e) {
    if (entries[e - 1].col == entries[e].col) {
      throw Error("duplicate column " + std::to_string(entries[e].col) +
                  " in one row");
    }
  }
}

bool Permutation::IsBijection(std::span<const std::size_t> order) {
  std::vector<bool> seen(order.size(), false);
  for (std::size_t v : order) {
    if (v >= order.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation::Permutation(std::vector<std::size_t> order)
    : order_(std::move(order)) {
  if (!IsBijection(order_)) {
    throw Error("permutation of length " + std::to_string(order_.size()) +
                " is not a bijection");
  }
}

Permutation Permutation::Identity(std::size_t size) {
  std::vector<std::size_t> order(size);
  for (std::size_t i = 0; i < size; ++i) order[i] = i;
  return Permutation(std::move(order));
}

Permutation Permutation::Compose(const Permutation& q) const {
  if (q.size() != size()) throw Error("cannot compose permutations of different length");
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = order_[q.order_[i]];
  return Permutation(std::move(out));
}

Permutation Permutation::Inverse() const {
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[order_[i]] = i;
  return Permutation(std::move(out));
}

MilpInstance ApplyConstraintPermutation(const MilpInstance& inst,
                                        const Permutation& p) {
  if (p.size() != inst.rows.size()) {
    throw Error("permutation length " + std::to_string(p.size()) +
                " does not match " + std::to_string(inst.rows.size()) + " rows");
  }
  MilpInstance out;
  out.name = inst.name;
  out.num_vars = inst.num_vars;
  out.objective = inst.objective;
  out.objective_offset = inst.objective_offset;
  out.bounds = inst.bounds;
  out.is_integer = inst.is_integer;
  out.maximize_input = inst.maximize_input;
  out.rows.reserve(inst.rows.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.rows.push_back(inst.rows[p[i]]);
  return out;
}

std::vector<std::size_t> RowProvenance(const MilpInstance& inst) {
  std::vector<std::size_t> out;
  out.reserve(inst.rows.size());
  for (const auto& row : inst.rows) out.push_back(row.original_index);
  return out;
}

std::string PermutationDigest(std::span<const std::size_t> order) {
  std::uint64_t h = Fnv1a("perm");
  for (std::size_t v : order) {
    std::uint64_t x = v;
    h = Fnv1a(std::string_view(reinterpret_cast<const char*>(&x), sizeof(x)), h);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string PermutationDigest(const MilpInstance& inst) {
  return PermutationDigest(RowProvenance(inst));
}

double RowActivity(const Constraint& row, std::span<const double> x) {
  double s = 0.0;
  for (const auto& e : row.entries) s += e.coeff * x[e.col];
  return s;
}

bool RowSatisfied(const Constraint& row, std::span<const double> x, double tol) {
  const double a = RowActivity(row, x);
  switch (row.sense) {
    case Sense::kLE:
      return a <= row.rhs + tol;
    case Sense::kGE:
      return a >= row.rhs - tol;
    case Sense::kEQ:
      return std::abs(a - row.rhs) <= tol;
  }
  return false;
}

}  // namespace clcr
