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

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "otsum/error.hpp"
#include "test_util.hpp"

using namespace otsum;
using namespace otsum::testing;

namespace {

const CostMatrix kUnitCost = make_cost({{0.0, 1.0}, {1.0, 0.0}});

SolverConfig exact_solver() {
  SolverConfig config;
  config.kind = SolverKind::kExact;
  return config;
}

SolverConfig sinkhorn_solver(double epsilon, double tolerance = 1e-6,
                             int max_iters = 20000) {
  SolverConfig config;
  config.kind = SolverKind::kSinkhorn;
  config.epsilon = epsilon;
  config.tolerance = tolerance;
  config.max_iters = max_iters;
  return config;
}

// Two sentences whose term distributions mirror each other around the
// document mean (0.5, 0.5): (1/4, 3/4) and (3/4, 1/4).
struct MirrorDoc {
  std::vector<Distribution> dists = {
      make_dist({{0, 0.25}, {1, 0.75}}),
      make_dist({{0, 0.75}, {1, 0.25}}),
  };
  Distribution doc_dist = make_dist({{0, 0.5}, {1, 0.5}});
};

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) out[i++] = v;
  return out;
}

// Five sentences over two tokens where sentence 0 alone reproduces the
// document distribution; the others pair off around it.
ToyDocument planted_document() {
  ToyDocument toy;
  toy.document.sentences = {{0, 1}, {0}, {1}, {0}, {1}};
  toy.document.source_text = {"s0", "s1", "s2", "s3", "s4"};
  toy.dists = sentence_distributions(toy.document, 2);
  toy.doc_dist = document_distribution(toy.dists);
  return toy;
}

// n-1 random four-token sentences plus sentence 0 concatenating all their
// bags, so sentence 0's distribution equals the document mean.
ToyDocument concat_planted_document(std::mt19937_64& rng, std::size_t n,
                                    std::size_t p) {
  std::uniform_int_distribution<std::uint32_t> token(
      0, static_cast<std::uint32_t>(p) - 1);
  ToyDocument toy;
  toy.document.sentences.resize(n);
  toy.document.source_text.assign(n, "s");
  std::vector<std::uint32_t> all;
  for (std::size_t i = 1; i < n; ++i) {
    for (int t = 0; t < 4; ++t) {
      const std::uint32_t tok = token(rng);
      toy.document.sentences[i].push_back(tok);
      all.push_back(tok);
    }
  }
  toy.document.sentences[0] = all;
  toy.dists = sentence_distributions(toy.document, p);
  toy.doc_dist = document_distribution(toy.dists);
  return toy;
}

// Euclidean cost over random points in [0, scale]^3. The scale sets the
// transport term's magnitude relative to the unit budget penalty.
CostMatrix scaled_metric_cost(std::mt19937_64& rng, std::size_t p,
                              double scale) {
  std::uniform_real_distribution<double> coord(0.0, scale);
  Eigen::MatrixXd points(static_cast<Eigen::Index>(p), 3);
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (int d = 0; d < 3; ++d) points(i, d) = coord(rng);
  return cost_from_points(points);
}

}  // namespace

TEST_SUITE("bip_opt") {

TEST_CASE("gumbel_binary_sample consumes exactly one engine draw") {
  std::mt19937_64 sampled(99);
  std::mt19937_64 twin(99);
  (void)gumbel_binary_sample(0.5, 1.0, true, sampled);
  (void)twin();
  CHECK(sampled() == twin());
}

TEST_CASE("gumbel_binary_sample is deterministic for a fixed engine state") {
  std::mt19937_64 a(7);
  std::mt19937_64 b(7);
  const GumbelSample first = gumbel_binary_sample(0.3, 0.8, true, a);
  const GumbelSample second = gumbel_binary_sample(0.3, 0.8, true, b);
  CHECK(first.soft == second.soft);
  CHECK(first.value == second.value);
}

TEST_CASE("hard samples threshold the relaxed value at one half") {
  std::mt19937_64 engine(11);
  for (int draw = 0; draw < 200; ++draw) {
    const GumbelSample sample = gumbel_binary_sample(0.4, 0.9, true, engine);
    CHECK(sample.soft > 0.0);
    CHECK(sample.soft < 1.0);
    CHECK(sample.value == (sample.soft >= 0.5 ? 1.0 : 0.0));
  }
  std::mt19937_64 soft_engine(11);
  const GumbelSample relaxed =
      gumbel_binary_sample(0.4, 0.9, false, soft_engine);
  CHECK(relaxed.value == relaxed.soft);
}

TEST_CASE("hard sample frequency matches the probability") {
  std::mt19937_64 engine(13);
  double ones = 0.0;
  const int draws = 20000;
  for (int draw = 0; draw < draws; ++draw) {
    ones += gumbel_binary_sample(0.3, 0.7, true, engine).value;
  }
  CHECK(std::abs(ones / draws - 0.3) < 0.02);

  std::mt19937_64 confident(17);
  double hits = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    hits += gumbel_binary_sample(0.999, 0.1, true, confident).value;
  }
  CHECK(hits / 1000.0 >= 0.99);
}

TEST_CASE("temperature drives the relaxation to the extremes") {
  std::mt19937_64 engine(19);
  for (int draw = 0; draw < 200; ++draw) {
    const GumbelSample sample = gumbel_binary_sample(0.6, 1e-6, true, engine);
    CHECK(std::min(sample.soft, 1.0 - sample.soft) < 1e-9);
  }
}

TEST_CASE("gumbel_binary_sample validates its arguments") {
  std::mt19937_64 engine(23);
  CHECK(throws_code([&] { gumbel_binary_sample(0.0, 1.0, true, engine); },
                    ErrorCode::kInvalidConfig));
  CHECK(throws_code([&] { gumbel_binary_sample(1.0, 1.0, true, engine); },
                    ErrorCode::kInvalidConfig));
  CHECK(throws_code([&] { gumbel_binary_sample(0.5, 0.0, true, engine); },
                    ErrorCode::kInvalidConfig));
}

TEST_CASE("bip_loss is zero when the summary is the whole document") {
  const MirrorDoc doc;
  const BipLoss loss = bip_loss(vec({1.0, 1.0}), doc.dists, doc.doc_dist,
                                kUnitCost, 2, 1.0, exact_solver(), false);
  CHECK(loss.loss == 0.0);
  CHECK_FALSE(loss.degenerate);
  // Under the exact solver only the penalty is differentiated, and the
  // budget is met exactly.
  CHECK(loss.grad_b.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bip_loss reproduces the pinned transport distance") {
  const MirrorDoc doc;
  const BipLoss exact = bip_loss(vec({1.0, 0.0}), doc.dists, doc.doc_dist,
                                 kUnitCost, 1, 1.0, exact_solver(), false);
  CHECK(exact.loss == 0.25);

  const BipLoss entropic =
      bip_loss(vec({1.0, 0.0}), doc.dists, doc.doc_dist, kUnitCost, 1, 1.0,
               sinkhorn_solver(1e-3), false);
  CHECK(std::abs(entropic.loss - 0.25) <= 1e-2);
}

TEST_CASE("bip_loss adds the configured budget penalty") {
  const MirrorDoc doc;
  const double alpha = 0.5;
  // One selected sentence against budget 3: gap of 2.
  const BipLoss absolute = bip_loss(vec({1.0, 0.0}), doc.dists, doc.doc_dist,
                                    kUnitCost, 3, alpha, exact_solver(), false);
  CHECK(absolute.loss == 0.25 + alpha * 2.0);
  CHECK(absolute.grad_b[0] == -alpha);
  CHECK(absolute.grad_b[1] == -alpha);

  const BipLoss squared = bip_loss(vec({1.0, 0.0}), doc.dists, doc.doc_dist,
                                   kUnitCost, 3, alpha, exact_solver(), true);
  CHECK(squared.loss == 0.25 + alpha * 4.0);
  CHECK(squared.grad_b[0] == -alpha * 4.0);
}

TEST_CASE("bip_loss short-circuits the all-zero sample") {
  const MirrorDoc doc;
  reset_ot_solve_count();
  const BipLoss loss = bip_loss(vec({0.0, 0.0}), doc.dists, doc.doc_dist,
                                kUnitCost, 3, 2.0, exact_solver(), false);
  CHECK(loss.degenerate);
  CHECK(loss.loss == 10.0 + 2.0 * 3.0);
  CHECK(loss.grad_b[0] == -2.0);
  CHECK(loss.grad_b[1] == -2.0);
  CHECK(ot_solve_count() == 0);  // no transport solve for the zero sample
}

TEST_CASE("bip_loss skips zero-vector sentences") {
  const std::vector<Distribution> dists = {
      make_dist({{0, 1.0}}),
      Distribution{},
      make_dist({{1, 1.0}}),
  };
  const Distribution doc_dist = make_dist({{0, 0.5}, {1, 0.5}});
  const BipLoss loss = bip_loss(vec({1.0, 1.0, 1.0}), dists, doc_dist,
                                kUnitCost, 3, 1.0, exact_solver(), false);
  CHECK(loss.loss == 0.0);  // usable pair averages to the document exactly
  CHECK(loss.grad_b[1] == 0.0);

  // Only the zero-vector sentence selected: no usable mass at all.
  const BipLoss dead = bip_loss(vec({0.0, 1.0, 0.0}), dists, doc_dist,
                                kUnitCost, 1, 1.0, exact_solver(), false);
  CHECK(dead.degenerate);
}

TEST_CASE("bip_loss rejects malformed selection vectors") {
  const MirrorDoc doc;
  CHECK(throws_code(
      [&] {
        bip_loss(vec({-0.5, 1.0}), doc.dists, doc.doc_dist, kUnitCost, 1, 1.0,
                 exact_solver(), false);
      },
      ErrorCode::kInvalidConfig));
  CHECK(throws_code(
      [&] {
        bip_loss(vec({1.0}), doc.dists, doc.doc_dist, kUnitCost, 1, 1.0,
                 exact_solver(), false);
      },
      ErrorCode::kDimensionMismatch));
}

TEST_CASE("bip_loss gradient matches finite differences on soft selections") {
  std::mt19937_64 rng(79);
  const SolverConfig solver = sinkhorn_solver(0.15, 1e-11, 100000);
  std::uniform_real_distribution<double> logits(-1.0, 1.0);
  const double h = 1e-5;
  for (int round = 0; round < 6; ++round) {
    const std::size_t n = 2 + round % 3;
    const std::size_t p = 2 + round % 4;
    const ToyDocument toy = random_toy_document(rng, n, p);
    const CostMatrix cost = random_metric_cost(rng, p);

    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      b[i] = 1.0 / (1.0 + std::exp(-logits(rng)));
    }

    const BipLoss loss = bip_loss(b, toy.dists, toy.doc_dist, cost, 2, 0.0,
                                  solver, false);

    // The dual-form objective whose b-gradient the loss reports.
    auto entropic_of = [&](const Eigen::VectorXd& weights) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!toy.dists[i].is_zero()) {
          mass += weights[static_cast<Eigen::Index>(i)];
        }
      }
      std::vector<Distribution::Entry> acc;
      for (std::size_t i = 0; i < n; ++i) {
        if (toy.dists[i].is_zero()) continue;
        for (const auto& e : toy.dists[i].entries()) {
          acc.push_back(
              {e.id, e.weight * weights[static_cast<Eigen::Index>(i)] / mass});
        }
      }
      const TransportPlan plan =
          solve(toy.doc_dist, Distribution(std::move(acc)), cost, solver);
      return *plan.entropic_value;
    };

    Eigen::VectorXd fd(b.size());
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      Eigen::VectorXd up = b;
      Eigen::VectorXd down = b;
      up[j] += h;
      down[j] -= h;
      fd[j] = (entropic_of(up) - entropic_of(down)) / (2.0 * h);
    }
    const double scale = std::max(loss.grad_b.norm(), 1e-6);
    CHECK((fd - loss.grad_b).norm() <= 1e-3 * scale);
  }
}

TEST_CASE("bip_optimize is deterministic for a fixed seed") {
  const ToyDocument toy = planted_document();
  const CostMatrix cost = kUnitCost;
  BipConfig config;
  config.budget = 1;
  config.iterations = 50;
  config.seed = 5;
  const BipResult first = bip_optimize(toy.document, toy.dists, toy.doc_dist,
                                       cost, config, sinkhorn_solver(0.05));
  const BipResult second = bip_optimize(toy.document, toy.dists, toy.doc_dist,
                                        cost, config, sinkhorn_solver(0.05));
  CHECK(first.extraction == second.extraction);
  CHECK(first.loss_history == second.loss_history);
  REQUIRE(first.final_probabilities.size() == second.final_probabilities.size());
  CHECK((first.final_probabilities - second.final_probabilities)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(first.ot_solves == second.ot_solves);
}

TEST_CASE("bip_optimize accounts for every iteration") {
  const ToyDocument toy = planted_document();
  BipConfig config;
  config.budget = 2;
  config.iterations = 40;
  config.seed = 3;
  reset_ot_solve_count();
  const BipResult result = bip_optimize(toy.document, toy.dists, toy.doc_dist,
                                        kUnitCost, config,
                                        sinkhorn_solver(0.05));
  CHECK(result.loss_history.size() == 40);
  CHECK(result.ot_solves + result.degenerate_evals == 40);
  CHECK(ot_solve_count() == result.ot_solves);
  CHECK(result.extraction.count() == 2);
}

TEST_CASE("bip_optimize clamps the selection to the eligible count") {
  const ToyDocument toy = planted_document();
  BipConfig config;
  config.budget = 10;
  config.iterations = 10;
  const BipResult result = bip_optimize(toy.document, toy.dists, toy.doc_dist,
                                        kUnitCost, config,
                                        sinkhorn_solver(0.05));
  CHECK(result.extraction.count() == 5);
  CHECK(result.final_probabilities.size() == 5);
}

TEST_CASE("bip_optimize needs a solver with dual potentials") {
  const ToyDocument toy = planted_document();
  BipConfig config;
  config.iterations = 5;
  CHECK(throws_code(
      [&] {
        bip_optimize(toy.document, toy.dists, toy.doc_dist, kUnitCost, config,
                     exact_solver());
      },
      ErrorCode::kInvalidConfig));

  // The automatic kind silently upgrades to sinkhorn.
  SolverConfig auto_config;
  auto_config.epsilon = 0.05;
  const BipResult result = bip_optimize(toy.document, toy.dists, toy.doc_dist,
                                        kUnitCost, config, auto_config);
  CHECK(result.loss_history.size() == 5);
}

TEST_CASE("bip_optimize validates its configuration") {
  const ToyDocument toy = planted_document();
  const SolverConfig solver = sinkhorn_solver(0.05);

  BipConfig config;
  config.iterations = 0;
  CHECK(throws_code(
      [&] {
        bip_optimize(toy.document, toy.dists, toy.doc_dist, kUnitCost, config,
                     solver);
      },
      ErrorCode::kInvalidConfig));

  config = BipConfig{};
  config.learning_rate = 0.0;
  CHECK(throws_code(
      [&] {
        bip_optimize(toy.document, toy.dists, toy.doc_dist, kUnitCost, config,
                     solver);
      },
      ErrorCode::kInvalidConfig));

  config = BipConfig{};
  config.tau = 0.0;
  CHECK(throws_code(
      [&] {
        bip_optimize(toy.document, toy.dists, toy.doc_dist, kUnitCost, config,
                     solver);
      },
      ErrorCode::kInvalidConfig));

  config = BipConfig{};
  config.alpha = -1.0;
  CHECK(throws_code(
      [&] {
        bip_optimize(toy.document, toy.dists, toy.doc_dist, kUnitCost, config,
                     solver);
      },
      ErrorCode::kInvalidConfig));

  Document empty_doc;
  empty_doc.sentences = {{}, {}};
  empty_doc.source_text = {"", ""};
  const std::vector<Distribution> zero_dists(2);
  config = BipConfig{};
  CHECK(throws_code(
      [&] {
        bip_optimize(empty_doc, zero_dists, make_dist({{0, 1.0}}), kUnitCost,
                     config, solver);
      },
      ErrorCode::kEmptyDocument));
}

TEST_CASE("singleton enumeration ranks the self-representative sentence first") {
  // Brute force over all singletons: the sentence whose distribution equals
  // the document mean has loss exactly 0; every mirror sentence costs the
  // exact LP value 0.5 under the unit cost.
  const ToyDocument toy = planted_document();
  const std::size_t n = toy.dists.size();
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    b[static_cast<Eigen::Index>(j)] = 1.0;
    const BipLoss loss = bip_loss(b, toy.dists, toy.doc_dist, kUnitCost, 1,
                                  1.0, exact_solver(), false);
    if (j == 0) {
      CHECK(loss.loss == 0.0);
    } else {
      CHECK(loss.loss == 0.5);
    }
  }
}

TEST_CASE("bip_optimize selects the planted sentence on a fixed seed") {
  std::mt19937_64 rng(77);
  const ToyDocument toy = concat_planted_document(rng, 12, 6);
  const CostMatrix cost = scaled_metric_cost(rng, 6, 10.0);

  // Exhaustive singleton enumeration confirms sentence 0 is the argmin.
  std::vector<double> singleton(toy.dists.size());
  for (std::size_t j = 0; j < toy.dists.size(); ++j)
    singleton[j] = wasserstein(toy.doc_dist, toy.dists[j], cost,
                               exact_solver());
  for (std::size_t j = 1; j < singleton.size(); ++j)
    CHECK(singleton[0] < singleton[j]);

  BipConfig config;
  config.budget = 1;
  config.iterations = 200;
  config.seed = 0;
  const BipResult result = bip_optimize(toy.document, toy.dists, toy.doc_dist,
                                        cost, config,
                                        sinkhorn_solver(0.5, 1e-6, 2000));
  CHECK(result.extraction.indices() == std::vector<std::uint32_t>{0});
}

TEST_CASE("loss descends on random documents at four-sentence budgets") {
  // 50 random five-sentence documents; the mean loss over the last 20
  // iterations must not exceed the mean over the first 20 in >= 45 runs.
  int descended = 0;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(900 + static_cast<unsigned>(seed));
    std::uniform_int_distribution<std::size_t> vocab(2, 6);
    const std::size_t p = vocab(rng);
    std::uniform_int_distribution<std::uint32_t> token(
        0, static_cast<std::uint32_t>(p) - 1);
    std::uniform_int_distribution<int> length(1, 4);
    ToyDocument toy;
    toy.document.sentences.resize(5);
    toy.document.source_text.assign(5, "s");
    for (auto& sentence : toy.document.sentences) {
      const int count = length(rng);
      for (int t = 0; t < count; ++t) sentence.push_back(token(rng));
    }
    toy.dists = sentence_distributions(toy.document, p);
    toy.doc_dist = document_distribution(toy.dists);
    const CostMatrix cost = scaled_metric_cost(rng, p, 1.0);

    BipConfig config;
    config.budget = 4;
    config.iterations = 200;
    config.seed = static_cast<unsigned long long>(seed);
    const BipResult result = bip_optimize(toy.document, toy.dists,
                                          toy.doc_dist, cost, config,
                                          sinkhorn_solver(0.05, 1e-6, 2000));
    const auto& history = result.loss_history;
    const double head =
        std::accumulate(history.begin(), history.begin() + 20, 0.0) / 20.0;
    const double tail =
        std::accumulate(history.end() - 20, history.end(), 0.0) / 20.0;
    if (tail <= head) ++descended;
  }
  CHECK(descended >= 45);
}

TEST_CASE("write_loss_csv emits one row per iteration") {
  const std::vector<double> history = {0.5, 0.25};
  std::ostringstream out;
  write_loss_csv(history, out);
  CHECK(out.str() == "iteration,loss\n1,0.5\n2,0.25\n");
}

}  // TEST_SUITE
