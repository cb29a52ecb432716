// Copyright 2026 The otsum Authors
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

#ifndef OTSUM_SRC_OT_INTERNAL_HPP_
#define OTSUM_SRC_OT_INTERNAL_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "otsum/embedding_store.hpp"
#include "otsum/text_model.hpp"

namespace otsum::internal {

// The transport problem restricted to the positive-mass coordinates of both
// marginals. Tokens carrying no mass cannot receive or send flow, so the
// restriction has the same optimum as the full problem.
struct SupportView {
  std::vector<std::uint32_t> rows;  // ids of mu's support
  std::vector<std::uint32_t> cols;  // ids of nu's support
  Eigen::VectorXd a;                // mu weights over rows
  Eigen::VectorXd b;                // nu weights over cols
  Eigen::MatrixXd costs;            // rows.size() x cols.size()
};

// Validates ids against the cost dimension and positive total mass; throws
// kInfeasibleMarginals / kDimensionMismatch.
SupportView restrict_to_support(const Distribution& mu, const Distribution& nu,
                                const CostMatrix& cost);

void bump_ot_solve_count();

}  // namespace otsum::internal

#endif  // OTSUM_SRC_OT_INTERNAL_HPP_
