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

#ifndef CLCR_GENERATORS_HPP_
#define CLCR_GENERATORS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "clcr/milp.hpp"

namespace clcr {

struct SetCoverParams {
  std::size_t rows = 500;
  std::size_t cols = 1000;
  double density = 0.05;
  std::pair<std::int64_t, std::int64_t> cost_range = {1, 100};
  std::uint64_t seed = 0;
};

/// min c^T x s.t. sum_{j in S_i} x_j >= 1, x binary. Each column joins a
/// row independently with probability `density`; a row that ends up empty
/// is redrawn until it covers something.
MilpInstance GenerateSetCover(const SetCoverParams& params);

struct RandomMilpParams {
  std::size_t num_vars = 10;
  std::size_t num_cons = 8;
  double integrality_fraction = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_row_nnz = 4;
  std::int64_t max_upper = 3;       // integer variable domain [0, U], U in [1, max_upper]
  std::int64_t max_coeff = 5;
};

struct GeneratedMilp {
  MilpInstance instance;
  std::vector<double> construction_point;  // feasible by construction
};

/// Bounded sparse instance with integer data. Right-hand sides are set from
/// a random point inside the bounds, so that point is always feasible.
GeneratedMilp GenerateRandomMilp(const RandomMilpParams& params);

}  // namespace clcr

#endif  // CLCR_GENERATORS_HPP_
