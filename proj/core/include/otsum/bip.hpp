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

#ifndef OTSUM_BIP_HPP_
#define OTSUM_BIP_HPP_

#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "otsum/embedding_store.hpp"
#include "otsum/ot.hpp"
#include "otsum/text_model.hpp"

namespace otsum {

struct BipConfig {
  std::size_t budget = 3;
  int iterations = 200;
  double alpha = 1.0;        // budget penalty weight
  double learning_rate = 0.1;
  double tau = 1.0;          // relaxation temperature
  std::uint64_t seed = 0;
  // Penalize (budget - sum b)^2 instead of |budget - sum b|.
  bool squared_penalty = false;
};

struct GumbelSample {
  double value = 0.0;  // hard 0/1 draw, or the soft value when !hard
  double soft = 0.0;   // relaxed sigmoid sample backing the gradient
};

// Binary concrete draw with straight-through hard thresholding at 0.5.
// Consumes exactly one engine value per call.
GumbelSample gumbel_binary_sample(double probability, double tau, bool hard,
                                  std::mt19937_64& engine);

struct BipLoss {
  double loss = 0.0;
  Eigen::VectorXd grad_b;  // d loss / d b_i at the sampled point
  bool degenerate = false; // all-zero sample, no transport solve performed
};

// Transport distance of the summary induced by b plus the budget penalty,
// with its gradient in b via the target-marginal potentials. The transport
// term is differentiated only when the solve produces dual potentials
// (sinkhorn); under the exact solver the gradient carries the penalty term
// alone. An all-zero sample short-circuits to a large constant loss pushing
// counts upward.
BipLoss bip_loss(const Eigen::VectorXd& b,
                 std::span<const Distribution> sentence_dists,
                 const Distribution& doc_dist, const CostMatrix& cost,
                 std::size_t budget, double alpha,
                 const SolverConfig& solver_config, bool squared_penalty);

struct BipResult {
  ExtractionVector extraction;
  std::vector<double> loss_history;       // one entry per iteration
  Eigen::VectorXd final_probabilities;    // sigmoid of the final logits
  std::uint64_t ot_solves = 0;
  std::uint64_t degenerate_evals = 0;     // iterations skipped by zero samples
};

// Stochastic subgradient descent on per-sentence logits with hard
// straight-through samples; the final extraction takes the top sentences by
// probability, ties to the smaller index.
BipResult bip_optimize(const Document& doc,
                       std::span<const Distribution> sentence_dists,
                       const Distribution& doc_dist, const CostMatrix& cost,
                       const BipConfig& bip_config,
                       const SolverConfig& solver_config);

// Two columns: iteration, loss.
void write_loss_csv(std::span<const double> loss_history, std::ostream& out);

}  // namespace otsum

#endif  // OTSUM_BIP_HPP_
