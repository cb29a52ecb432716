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

#include "otsum/bip.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "otsum/error.hpp"

namespace otsum {

namespace {

// Substituted loss for the all-zero sample, where the summary distribution
// is undefined; large enough to dominate any real loss at small budgets.
double degenerate_loss(std::size_t budget, double alpha) {
  return 10.0 + alpha * static_cast<double>(budget);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Uniform draw in (0,1), strictly excluding the endpoints: the high 53
// bits of the engine output, centered inside the lattice cell.
double uniform_open(std::mt19937_64& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

SolverConfig dual_solver(const SolverConfig& config) {
  if (config.kind == SolverKind::kExact) {
    throw Error(ErrorCode::kInvalidConfig,
                "this optimizer needs dual potentials; configure the "
                "sinkhorn solver");
  }
  SolverConfig dual = config;
  dual.kind = SolverKind::kSinkhorn;
  return dual;
}

}  // namespace

GumbelSample gumbel_binary_sample(double probability, double tau, bool hard,
                                  std::mt19937_64& engine) {
  if (!(probability > 0.0 && probability < 1.0) || !(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "need probability in (0,1) and tau > 0");
  }
  const double u = uniform_open(engine);
  // Difference of two Gumbel draws = one standard-logistic draw.
  const double noise = std::log(u) - std::log1p(-u);
  const double logit = std::log(probability) - std::log1p(-probability);
  GumbelSample sample;
  sample.soft = sigmoid((logit + noise) / tau);
  sample.value = hard ? (sample.soft >= 0.5 ? 1.0 : 0.0) : sample.soft;
  return sample;
}

BipLoss bip_loss(const Eigen::VectorXd& b,
                 std::span<const Distribution> sentence_dists,
                 const Distribution& doc_dist, const CostMatrix& cost,
                 std::size_t budget, double alpha,
                 const SolverConfig& solver_config, bool squared_penalty) {
  const auto n = static_cast<std::size_t>(b.size());
  if (n != sentence_dists.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "selection vector length does not match sentence count");
  }
  BipLoss out;
  out.grad_b = Eigen::VectorXd::Zero(b.size());

  double mass = 0.0;  // sum of b over sentences with a usable distribution
  for (std::size_t i = 0; i < n; ++i) {
    if (b[static_cast<Eigen::Index>(i)] < 0.0) {
      throw Error(ErrorCode::kInvalidConfig, "negative selection weight");
    }
    if (!sentence_dists[i].is_zero()) mass += b[static_cast<Eigen::Index>(i)];
  }
  if (mass <= 0.0) {
    out.loss = degenerate_loss(budget, alpha);
    out.degenerate = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!sentence_dists[i].is_zero()) {
        out.grad_b[static_cast<Eigen::Index>(i)] = -alpha;
      }
    }
    return out;
  }

  std::vector<Distribution::Entry> acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = b[static_cast<Eigen::Index>(i)];
    if (weight == 0.0 || sentence_dists[i].is_zero()) continue;
    for (const auto& e : sentence_dists[i].entries()) {
      acc.push_back({e.id, e.weight * weight / mass});
    }
  }
  const Distribution summary{std::move(acc)};

  const TransportPlan plan = solve(doc_dist, summary, cost, solver_config);
  // Without dual potentials (exact solver) only the penalty term is
  // differentiated; optimization paths always configure sinkhorn.
  const bool with_transport_grad = plan.duals.has_value();
  const Eigen::VectorXd grad_nu =
      with_transport_grad ? grad_target_marginal(plan)
                          : Eigen::VectorXd::Zero(cost.entries.rows());

  const double total = b.sum();
  const double gap = static_cast<double>(budget) - total;
  double penalty;
  double penalty_grad;  // d penalty / d b_i, identical for every i
  if (squared_penalty) {
    penalty = gap * gap;
    penalty_grad = -2.0 * gap;
  } else {
    penalty = std::abs(gap);
    penalty_grad = gap > 0.0 ? -1.0 : (gap < 0.0 ? 1.0 : 0.0);
  }
  out.loss = plan.distance + alpha * penalty;

  // d summary_j / d b_i = (TF_i_j - summary_j) / mass for usable sentences.
  const std::size_t p = cost.size();
  const Eigen::VectorXd summary_dense = summary.to_dense(p);
  const double base = grad_nu.dot(summary_dense);
  for (std::size_t i = 0; i < n; ++i) {
    double grad = alpha * penalty_grad;
    if (!sentence_dists[i].is_zero()) {
      double dot = 0.0;
      for (const auto& e : sentence_dists[i].entries()) {
        dot += grad_nu[static_cast<Eigen::Index>(e.id)] * e.weight;
      }
      grad += (dot - base) / mass;
    }
    out.grad_b[static_cast<Eigen::Index>(i)] = grad;
  }
  return out;
}

BipResult bip_optimize(const Document& doc,
                       std::span<const Distribution> sentence_dists,
                       const Distribution& doc_dist, const CostMatrix& cost,
                       const BipConfig& bip_config,
                       const SolverConfig& solver_config) {
  if (bip_config.budget < 1 || bip_config.iterations < 1 ||
      bip_config.alpha < 0.0 || bip_config.learning_rate <= 0.0 ||
      bip_config.tau <= 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "invalid optimizer settings");
  }
  const SolverConfig solver = dual_solver(solver_config);
  const std::size_t n = doc.size();
  if (n != sentence_dists.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sentence distributions do not match document");
  }
  std::vector<std::uint32_t> eligible;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!sentence_dists[i].is_zero()) eligible.push_back(i);
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::kEmptyDocument, "no eligible sentence to select");
  }

  std::mt19937_64 engine(bip_config.seed);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(eligible.size()));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd soft(static_cast<Eigen::Index>(eligible.size()));

  BipResult result;
  result.loss_history.reserve(static_cast<std::size_t>(bip_config.iterations));
  for (int iter = 0; iter < bip_config.iterations; ++iter) {
    b.setZero();
    for (Eigen::Index e = 0; e < w.size(); ++e) {
      // Clamping keeps sigmoid away from exact 0/1 however far w drifts.
      const double pr = sigmoid(std::clamp(w[e], -30.0, 30.0));
      const GumbelSample sample =
          gumbel_binary_sample(pr, bip_config.tau, true, engine);
      soft[e] = sample.soft;
      b[eligible[static_cast<std::size_t>(e)]] = sample.value;
    }
    const BipLoss loss =
        bip_loss(b, sentence_dists, doc_dist, cost, bip_config.budget,
                 bip_config.alpha, solver, bip_config.squared_penalty);
    if (loss.degenerate) {
      ++result.degenerate_evals;
    } else {
      ++result.ot_solves;
    }
    result.loss_history.push_back(loss.loss);
    // Straight-through: the backward pass swaps the hard threshold for the
    // soft sample's sigmoid derivative.
    for (Eigen::Index e = 0; e < w.size(); ++e) {
      const double through = soft[e] * (1.0 - soft[e]) / bip_config.tau;
      w[e] -= bip_config.learning_rate *
              loss.grad_b[eligible[static_cast<std::size_t>(e)]] * through;
    }
  }

  // Final selection: noiseless probabilities, largest first, ties to the
  // smaller sentence index.
  result.final_probabilities = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<std::uint32_t> order(eligible.size());
  std::iota(order.begin(), order.end(), 0);
  for (Eigen::Index e = 0; e < w.size(); ++e) {
    result.final_probabilities[eligible[static_cast<std::size_t>(e)]] =
        sigmoid(w[e]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t x, std::uint32_t y) {
                     return w[x] > w[y];
                   });
  const std::size_t take = std::min(bip_config.budget, eligible.size());
  std::vector<std::uint32_t> chosen;
  chosen.reserve(take);
  for (std::size_t r = 0; r < take; ++r) chosen.push_back(eligible[order[r]]);
  result.extraction = ExtractionVector::from_indices(chosen, n);
  return result;
}

void write_loss_csv(std::span<const double> loss_history, std::ostream& out) {
  char buffer[32];
  out << "iteration,loss\n";
  for (std::size_t i = 0; i < loss_history.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", loss_history[i]);
    out << (i + 1) << ',' << buffer << '\n';
  }
}

}  // namespace otsum
