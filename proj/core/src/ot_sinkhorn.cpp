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

// Log-domain Sinkhorn iteration with epsilon scaling: alternating
// softmin updates of the dual potentials f, g for the entropic problem,
// starting at a coarse regularization and halving it down to the target.
// The plan is t_ij = exp((f_i + g_j - c_ij) / epsilon).

#include <algorithm>
#include <cmath>

#include "otsum/error.hpp"
#include "otsum/ot.hpp"
#include "src/ot_internal.hpp"

namespace otsum {

namespace {

double log_sum_exp(const Eigen::ArrayXd& x) {
  const double m = x.maxCoeff();
  return m + std::log((x - m).exp().sum());
}

Eigen::MatrixXd plan_from_duals(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                const Eigen::MatrixXd& costs, double epsilon) {
  return (((-costs).colwise() + f).rowwise() + g.transpose()).array() / epsilon;
}

}  // namespace

TransportPlan solve_sinkhorn(const Distribution& mu, const Distribution& nu,
                             const CostMatrix& cost, const SolverConfig& config) {
  if (config.tolerance <= 0.0 || config.max_iters < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "sinkhorn needs tolerance > 0 and max_iters >= 1");
  }
  const internal::SupportView view =
      internal::restrict_to_support(mu, nu, cost);
  const Eigen::Index m = view.a.size();
  const Eigen::Index k = view.b.size();

  double target = config.epsilon;
  if (target <= 0.0) target = 0.1 * cost.entries.mean();
  if (target <= 0.0) target = 1e-3;  // all-zero cost matrix

  const Eigen::ArrayXd log_a = view.a.array().log();
  const Eigen::ArrayXd log_b = view.b.array().log();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(k);

  const auto sweep = [&](double epsilon) {
    for (Eigen::Index i = 0; i < m; ++i) {
      f[i] = epsilon * log_a[i] -
             epsilon * log_sum_exp((g.array() - view.costs.row(i).transpose().array()) /
                                   epsilon);
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      g[j] = epsilon * log_b[j] -
             epsilon * log_sum_exp((f.array() - view.costs.col(j).array()) / epsilon);
    }
  };
  const auto violation_at = [&](double epsilon) {
    const Eigen::MatrixXd t =
        plan_from_duals(f, g, view.costs, epsilon).array().exp();
    const double row = (t.rowwise().sum() - view.a).cwiseAbs().maxCoeff();
    const double col = (t.colwise().sum().transpose() - view.b).cwiseAbs().maxCoeff();
    return std::max(row, col);
  };

  SinkhornStats stats;
  stats.epsilon = target;
  int total_sweeps = 0;

  constexpr int kWarmupSweeps = 25;
  double epsilon = std::max(target, view.costs.mean());
  while (epsilon > target && total_sweeps < config.max_iters) {
    for (int s = 0; s < kWarmupSweeps && total_sweeps < config.max_iters; ++s) {
      sweep(epsilon);
      ++total_sweeps;
    }
    epsilon = std::max(target, epsilon / 2.0);
  }
  double achieved = violation_at(epsilon);
  while (!(epsilon == target && achieved < config.tolerance) &&
         total_sweeps < config.max_iters) {
    epsilon = target;
    sweep(epsilon);
    ++total_sweeps;
    achieved = violation_at(epsilon);
  }
  stats.iterations = total_sweeps;
  stats.marginal_violation = achieved;
  stats.converged = epsilon == target && achieved < config.tolerance;

  const Eigen::MatrixXd t =
      plan_from_duals(f, g, view.costs, epsilon).array().exp();

  TransportPlan plan;
  plan.flows = Eigen::MatrixXd::Zero(cost.entries.rows(), cost.entries.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      plan.flows(view.rows[static_cast<std::size_t>(i)],
                 view.cols[static_cast<std::size_t>(j)]) = t(i, j);
    }
  }
  plan.distance = (t.array() * view.costs.array()).sum();
  plan.entropic_value =
      f.dot(view.a) + g.dot(view.b) - epsilon * t.sum();

  // Potentials over the full token space. Out-of-support entries take the
  // softmin extension with no mass term (the value the update would assign
  // a unit atom), which grad_target_marginal relies on.
  const std::size_t p = cost.size();
  Eigen::VectorXd f_full(static_cast<Eigen::Index>(p));
  Eigen::VectorXd g_full(static_cast<Eigen::Index>(p));
  std::vector<std::uint8_t> in_rows(p, 0);
  std::vector<std::uint8_t> in_cols(p, 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    f_full[view.rows[static_cast<std::size_t>(i)]] = f[i];
    in_rows[view.rows[static_cast<std::size_t>(i)]] = 1;
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    g_full[view.cols[static_cast<std::size_t>(j)]] = g[j];
    in_cols[view.cols[static_cast<std::size_t>(j)]] = 1;
  }
  Eigen::ArrayXd col_costs(m);
  Eigen::ArrayXd row_costs(k);
  for (std::size_t token = 0; token < p; ++token) {
    if (!in_cols[token]) {
      for (Eigen::Index i = 0; i < m; ++i) {
        col_costs[i] = cost.entries(view.rows[static_cast<std::size_t>(i)],
                                    static_cast<Eigen::Index>(token));
      }
      g_full[static_cast<Eigen::Index>(token)] =
          -epsilon * log_sum_exp((f.array() - col_costs) / epsilon);
    }
    if (!in_rows[token]) {
      for (Eigen::Index j = 0; j < k; ++j) {
        row_costs[j] = cost.entries(static_cast<Eigen::Index>(token),
                                    view.cols[static_cast<std::size_t>(j)]);
      }
      f_full[static_cast<Eigen::Index>(token)] =
          -epsilon * log_sum_exp((g.array() - row_costs) / epsilon);
    }
  }
  plan.duals = std::make_pair(std::move(f_full), std::move(g_full));
  plan.sinkhorn = stats;
  internal::bump_ot_solve_count();
  return plan;
}

}  // namespace otsum
