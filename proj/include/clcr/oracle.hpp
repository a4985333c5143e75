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

#ifndef CLCR_ORACLE_HPP_
#define CLCR_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "clcr/milp.hpp"

namespace clcr {

class UnsupportedInstance : public Error {
 public:
  using Error::Error;
};

enum class OracleStatus { kOptimal, kInfeasible, kUnboundedOrTooLarge };

const char* OracleStatusName(OracleStatus s);

struct OracleResult {
  OracleStatus status = OracleStatus::kInfeasible;
  double objective = 0.0;        // c^T x + offset, minimization form
  std::vector<double> argmin;    // set when Optimal
  std::uint64_t points_checked = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Exhaustive enumeration of the integer box. Every variable must be
/// integer (UnsupportedInstance otherwise). Infinite bounds or a box larger
/// than `enumeration_cap` yield kUnboundedOrTooLarge.
///
/// All-integer data is evaluated in exact 64-bit integer arithmetic; other
/// data uses a 1e-9 feasibility tolerance. Ties keep the lexicographically
/// first minimizer in enumeration order (last variable varies fastest).
OracleResult BruteForceOracle(const MilpInstance& inst,
                              std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace clcr

#endif  // CLCR_ORACLE_HPP_
