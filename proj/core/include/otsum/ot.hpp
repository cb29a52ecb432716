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

#ifndef OTSUM_OT_HPP_
#define OTSUM_OT_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "otsum/embedding_store.hpp"
#include "otsum/text_model.hpp"

namespace otsum {

enum class SolverKind { kExact, kSinkhorn, kAuto };

const char* to_string(SolverKind kind);
SolverKind solver_kind_from_string(std::string_view name);

struct SolverConfig {
  SolverKind kind = SolverKind::kAuto;
  // Entropic regularization weight. <= 0 selects the default
  // 0.1 * mean(cost matrix).
  double epsilon = 0.0;
  int max_iters = 2000;
  // Stop when the max marginal violation of the plan falls below this.
  double tolerance = 1e-6;
  // kAuto uses the exact solver up to this support size, Sinkhorn beyond.
  std::size_t exact_cap = 64;
};

struct SinkhornStats {
  bool converged = false;
  double marginal_violation = 0.0;
  int iterations = 0;
  double epsilon = 0.0;  // effective value after defaulting
};

struct TransportPlan {
  Eigen::MatrixXd flows;  // p x p, nonnegative
  double distance = 0.0;  // sum(flows o costs)
  // Sinkhorn potentials (source, target), length p each. Entries outside a
  // marginal's support hold the smoothed-min extension described in
  // grad_target_marginal.
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> duals;
  // Value of the entropic objective (dual form); the quantity whose
  // gradient with respect to the marginals is given by the potentials.
  std::optional<double> entropic_value;
  std::optional<SinkhornStats> sinkhorn;
};

// Exact optimal transport via the transportation simplex, restricted to the
// support of the marginals. Deterministic: northwest-corner start and
// Bland's rule (lexicographically smallest pivot).
TransportPlan solve_exact(const Distribution& mu, const Distribution& nu,
                          const CostMatrix& cost);

// Entropic OT in the log domain with epsilon scaling, returning dual
// potentials. Non-convergence is reported in the stats, not thrown; the
// plan remains usable.
TransportPlan solve_sinkhorn(const Distribution& mu, const Distribution& nu,
                             const CostMatrix& cost, const SolverConfig& config);

// Dispatch on config.kind (kAuto: exact while the larger marginal support
// is within config.exact_cap).
TransportPlan solve(const Distribution& mu, const Distribution& nu,
                    const CostMatrix& cost, const SolverConfig& config);

double wasserstein(const Distribution& mu, const Distribution& nu,
                   const CostMatrix& cost, const SolverConfig& config);

// 1 - wasserstein(doc, summary). May be negative when costs exceed 1.
double coverage(const Distribution& doc_dist, const Distribution& summary_dist,
                const CostMatrix& cost, const SolverConfig& config);

// Gradient of the entropic value with respect to the target marginal: the
// target potential centered to zero mean. Requires a plan with duals.
Eigen::VectorXd grad_target_marginal(const TransportPlan& plan);

// One row per nonzero flow: source token, target token, flow, unit cost
// (and flow*cost when requested).
void write_plan_csv(const TransportPlan& plan, const CostMatrix& cost,
                    std::span<const std::string> source_labels,
                    std::span<const std::string> target_labels, std::ostream& out,
                    bool with_product = false);

// Process-wide count of exact + Sinkhorn solves, for complexity accounting.
std::uint64_t ot_solve_count();
void reset_ot_solve_count();

}  // namespace otsum

#endif  // OTSUM_OT_HPP_
