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

#include <atomic>
#include <cmath>
#include <cstdio>

#include "otsum/error.hpp"
#include "otsum/ot.hpp"
#include "src/ot_internal.hpp"

namespace otsum {

namespace {

std::atomic<std::uint64_t> g_ot_solve_count{0};

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kAllSentencesEmpty: return "AllSentencesEmpty";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingToken: return "MissingToken";
    case ErrorCode::kZeroNormVector: return "ZeroNormVector";
    case ErrorCode::kInfeasibleMarginals: return "InfeasibleMarginals";
    case ErrorCode::kMissingDuals: return "MissingDuals";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kExact: return "exact";
    case SolverKind::kSinkhorn: return "sinkhorn";
    case SolverKind::kAuto: return "auto";
  }
  return "unknown";
}

SolverKind solver_kind_from_string(std::string_view name) {
  if (name == "exact") return SolverKind::kExact;
  if (name == "sinkhorn") return SolverKind::kSinkhorn;
  if (name == "auto") return SolverKind::kAuto;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown solver kind \"" + std::string(name) + "\"");
}

namespace internal {

SupportView restrict_to_support(const Distribution& mu, const Distribution& nu,
                                const CostMatrix& cost) {
  const std::size_t p = cost.size();
  if (mu.is_zero() || nu.is_zero()) {
    throw Error(ErrorCode::kInfeasibleMarginals,
                "zero-vector marginal has no transport plan");
  }
  auto check_sum = [](const Distribution& d, const char* name) {
    const double total = d.sum();
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorCode::kInfeasibleMarginals,
                  std::string(name) + " marginal sums to " +
                      std::to_string(total) + ", expected 1");
    }
  };
  check_sum(mu, "source");
  check_sum(nu, "target");

  SupportView view;
  view.rows.reserve(mu.support_size());
  view.cols.reserve(nu.support_size());
  for (const auto& e : mu.entries()) view.rows.push_back(e.id);
  for (const auto& e : nu.entries()) view.cols.push_back(e.id);
  if (!view.rows.empty() && view.rows.back() >= p) {
    throw Error(ErrorCode::kDimensionMismatch,
                "source marginal id exceeds cost dimension " + std::to_string(p));
  }
  if (!view.cols.empty() && view.cols.back() >= p) {
    throw Error(ErrorCode::kDimensionMismatch,
                "target marginal id exceeds cost dimension " + std::to_string(p));
  }
  const auto m = static_cast<Eigen::Index>(view.rows.size());
  const auto k = static_cast<Eigen::Index>(view.cols.size());
  view.a.resize(m);
  view.b.resize(k);
  for (Eigen::Index i = 0; i < m; ++i) view.a[i] = mu.entries()[i].weight;
  for (Eigen::Index j = 0; j < k; ++j) view.b[j] = nu.entries()[j].weight;
  view.costs.resize(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      view.costs(i, j) = cost.entries(view.rows[static_cast<std::size_t>(i)],
                                      view.cols[static_cast<std::size_t>(j)]);
    }
  }
  return view;
}

void bump_ot_solve_count() {
  g_ot_solve_count.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace internal

TransportPlan solve(const Distribution& mu, const Distribution& nu,
                    const CostMatrix& cost, const SolverConfig& config) {
  switch (config.kind) {
    case SolverKind::kExact:
      return solve_exact(mu, nu, cost);
    case SolverKind::kSinkhorn:
      return solve_sinkhorn(mu, nu, cost, config);
    case SolverKind::kAuto: {
      const std::size_t support =
          std::max(mu.support_size(), nu.support_size());
      if (support <= config.exact_cap) return solve_exact(mu, nu, cost);
      return solve_sinkhorn(mu, nu, cost, config);
    }
  }
  throw Error(ErrorCode::kInvalidConfig, "unhandled solver kind");
}

double wasserstein(const Distribution& mu, const Distribution& nu,
                   const CostMatrix& cost, const SolverConfig& config) {
  return solve(mu, nu, cost, config).distance;
}

double coverage(const Distribution& doc_dist, const Distribution& summary_dist,
                const CostMatrix& cost, const SolverConfig& config) {
  return 1.0 - wasserstein(doc_dist, summary_dist, cost, config);
}

Eigen::VectorXd grad_target_marginal(const TransportPlan& plan) {
  if (!plan.duals.has_value()) {
    throw Error(ErrorCode::kMissingDuals,
                "plan carries no dual potentials (exact solver output)");
  }
  const Eigen::VectorXd& g = plan.duals->second;
  return g.array() - g.mean();
}

void write_plan_csv(const TransportPlan& plan, const CostMatrix& cost,
                    std::span<const std::string> source_labels,
                    std::span<const std::string> target_labels, std::ostream& out,
                    bool with_product) {
  if (static_cast<Eigen::Index>(source_labels.size()) != plan.flows.rows() ||
      static_cast<Eigen::Index>(target_labels.size()) != plan.flows.cols() ||
      cost.entries.rows() != plan.flows.rows() ||
      cost.entries.cols() != plan.flows.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "labels or costs do not match plan dimensions");
  }
  char buffer[32];
  auto format = [&buffer](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return std::string(buffer);
  };
  out << (with_product ? "source,target,flow,cost,flow_cost\n"
                       : "source,target,flow,cost\n");
  for (Eigen::Index i = 0; i < plan.flows.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.flows.cols(); ++j) {
      const double flow = plan.flows(i, j);
      if (flow <= 0.0) continue;
      const double c = cost.entries(i, j);
      out << source_labels[static_cast<std::size_t>(i)] << ','
          << target_labels[static_cast<std::size_t>(j)] << ',' << format(flow)
          << ',' << format(c);
      if (with_product) out << ',' << format(flow * c);
      out << '\n';
    }
  }
}

std::uint64_t ot_solve_count() {
  return g_ot_solve_count.load(std::memory_order_relaxed);
}

void reset_ot_solve_count() {
  g_ot_solve_count.store(0, std::memory_order_relaxed);
}

}  // namespace otsum
