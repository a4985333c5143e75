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

#ifndef CLCR_MPS_HPP_
#define CLCR_MPS_HPP_

#include <string>
#include <string_view>

#include "clcr/milp.hpp"

namespace clcr {

/// Reads fixed- or free-format MPS.
///
/// Supported sections: NAME, OBJSENSE, ROWS, COLUMNS (with INTORG/INTEND
/// markers), RHS, RANGES, BOUNDS, ENDATA. Rows keep file order. A ranged row
/// becomes two single-sense rows with consecutive original_index values.
/// Maximization objectives are negated and flagged. If every row name has
/// the form `c<k>` and the k form a permutation of 0..m-1 (the names
/// WriteMps emits), k is taken as the row's original_index.
///
/// Integer columns declared by markers default to bounds [0, +inf).
/// Throws ParseError carrying the offending line number.
MilpInstance ParseMps(std::string_view text);

/// Emits free-format MPS in the instance's current row order. Rows are named
/// `c<original_index>`, columns `x<j>`, the objective `obj`.
std::string WriteMps(const MilpInstance& inst);

MilpInstance ReadMpsFile(const std::string& path);
void WriteMpsFile(const MilpInstance& inst, const std::string& path);

}  // namespace clcr

#endif  // CLCR_MPS_HPP_
