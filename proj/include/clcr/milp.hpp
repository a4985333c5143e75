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

#ifndef CLCR_MILP_HPP_
#define CLCR_MILP_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "clcr/common.hpp"

namespace clcr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLE, kGE, kEQ };

const char* SenseName(Sense s);  // "LE", "GE", "EQ"
Sense ParseSense(const std::string& s);

struct Entry {
  std::size_t col = 0;
  double coeff = 0.0;

  bool operator==(const Entry&) const = default;
};

/// One row a_i x {<=,>=,=} b_i. Entries are sorted by column and nonzero.
struct Constraint {
  std::vector<Entry> entries;
  Sense sense = Sense::kLE;
  double rhs = 0.0;
  // Position of the row in the instance as first read or generated. Never
  // rewritten by reordering.
  std::size_t original_index = 0;

  bool operator==(const Constraint&) const = default;
};

struct VarBounds {
  double lower = 0.0;
  double upper = kInf;

  bool operator==(const VarBounds&) const = default;
};

/// min c^T x s.t. rows, bounds, integrality. Maximization inputs are stored
/// negated with `maximize_input` set so reports can restore the sign.
struct MilpInstance {
  std::string name;
  std::size_t num_vars = 0;
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<Constraint> rows;
  std::vector<VarBounds> bounds;
  std::vector<bool> is_integer;
  bool maximize_input = false;

  std::size_t num_cons() const { return rows.size(); }
  std::vector<std::size_t> IntegerVars() const;
  bool operator==(const MilpInstance&) const = default;
};

/// Throws Error describing the first violated structural invariant.
void Validate(const MilpInstance& inst);

/// Sorts entries by column, drops explicit zeros, rejects duplicates.
void NormalizeEntries(std::vector<Entry>& entries);

/// A bijection on {0..L-1}.
class Permutation {
 public:
  Permutation() = default;
  /// Throws Error if `order` is not a bijection.
  explicit Permutation(std::vector<std::size_t> order);

  static Permutation Identity(std::size_t size);

  std::size_t size() const { return order_.size(); }
  std::size_t operator[](std::size_t i) const { return order_[i]; }
  const std::vector<std::size_t>& order() const { return order_; }

  /// (p.Compose(q))[i] == p[q[i]]; applying p then q equals applying
  /// p.Compose(q) once.
  Permutation Compose(const Permutation& q) const;
  Permutation Inverse() const;

  bool operator==(const Permutation&) const = default;

  static bool IsBijection(std::span<const std::size_t> order);

 private:
  std::vector<std::size_t> order_;
};

/// Row i of the result is row p[i] of `inst`; everything else is copied.
MilpInstance ApplyConstraintPermutation(const MilpInstance& inst,
                                        const Permutation& p);

/// The sequence of original_index values in current row order.
std::vector<std::size_t> RowProvenance(const MilpInstance& inst);

/// Stable 16-hex-digit digest of the row provenance, identifying an ordering.
std::string PermutationDigest(const MilpInstance& inst);
std::string PermutationDigest(std::span<const std::size_t> order);

/// Row activity a_i x.
double RowActivity(const Constraint& row, std::span<const double> x);
bool RowSatisfied(const Constraint& row, std::span<const double> x,
                  double tol = kRealTolerance);

}  // namespace clcr

#endif  // CLCR_MILP_HPP_
