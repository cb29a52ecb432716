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

// Transportation-problem simplex. The basis is a spanning tree over the
// bipartite source/target node graph with exactly m + k - 1 cells
// (degenerate zero-flow cells included), started from the northwest-corner
// plan. Pivots follow Bland's rule in lexicographic (row, col) order, which
// rules out cycling and fixes the output deterministically.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "otsum/error.hpp"
#include "otsum/ot.hpp"
#include "src/ot_internal.hpp"

namespace otsum {

namespace {

struct Basis {
  Eigen::Index m = 0;
  Eigen::Index k = 0;
  Eigen::MatrixXd flow;
  std::vector<std::uint8_t> member;        // m*k flags, row-major
  std::vector<std::vector<Eigen::Index>> row_adj;  // basis cols per row
  std::vector<std::vector<Eigen::Index>> col_adj;  // basis rows per col

  bool contains(Eigen::Index i, Eigen::Index j) const {
    return member[static_cast<std::size_t>(i * k + j)] != 0;
  }
  void insert(Eigen::Index i, Eigen::Index j, double value) {
    member[static_cast<std::size_t>(i * k + j)] = 1;
    flow(i, j) = value;
    row_adj[static_cast<std::size_t>(i)].push_back(j);
    col_adj[static_cast<std::size_t>(j)].push_back(i);
  }
  void erase(Eigen::Index i, Eigen::Index j) {
    member[static_cast<std::size_t>(i * k + j)] = 0;
    flow(i, j) = 0.0;
    std::erase(row_adj[static_cast<std::size_t>(i)], j);
    std::erase(col_adj[static_cast<std::size_t>(j)], i);
  }
};

Basis northwest_corner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Basis basis;
  basis.m = a.size();
  basis.k = b.size();
  basis.flow = Eigen::MatrixXd::Zero(basis.m, basis.k);
  basis.member.assign(static_cast<std::size_t>(basis.m * basis.k), 0);
  basis.row_adj.resize(static_cast<std::size_t>(basis.m));
  basis.col_adj.resize(static_cast<std::size_t>(basis.k));

  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double remaining_a = a[0];
  double remaining_b = b[0];
  const Eigen::Index cells = basis.m + basis.k - 1;
  for (Eigen::Index step = 0; step < cells; ++step) {
    const double t = std::max(0.0, std::min(remaining_a, remaining_b));
    basis.insert(i, j, t);
    if (step + 1 == cells) break;
    bool advance_row;
    if (i == basis.m - 1) {
      advance_row = false;
    } else if (j == basis.k - 1) {
      advance_row = true;
    } else {
      advance_row = remaining_a <= remaining_b;
    }
    if (advance_row) {
      remaining_b -= t;
      ++i;
      remaining_a = a[i];
    } else {
      remaining_a -= t;
      ++j;
      remaining_b = b[j];
    }
  }
  return basis;
}

// Dual potentials from the spanning tree: u[0] = 0, then u_i + v_j = c_ij
// along every basis edge, filled by breadth-first traversal.
void compute_duals(const Basis& basis, const Eigen::MatrixXd& costs,
                   Eigen::VectorXd& u, Eigen::VectorXd& v) {
  const Eigen::Index m = basis.m;
  const Eigen::Index k = basis.k;
  std::vector<std::uint8_t> row_done(static_cast<std::size_t>(m), 0);
  std::vector<std::uint8_t> col_done(static_cast<std::size_t>(k), 0);
  std::vector<Eigen::Index> queue;  // rows as i, cols as m + j
  queue.reserve(static_cast<std::size_t>(m + k));
  u[0] = 0.0;
  row_done[0] = 1;
  queue.push_back(0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Eigen::Index node = queue[head];
    if (node < m) {
      for (Eigen::Index j : basis.row_adj[static_cast<std::size_t>(node)]) {
        if (col_done[static_cast<std::size_t>(j)]) continue;
        v[j] = costs(node, j) - u[node];
        col_done[static_cast<std::size_t>(j)] = 1;
        queue.push_back(m + j);
      }
    } else {
      const Eigen::Index j = node - m;
      for (Eigen::Index i : basis.col_adj[static_cast<std::size_t>(j)]) {
        if (row_done[static_cast<std::size_t>(i)]) continue;
        u[i] = costs(i, j) - v[j];
        row_done[static_cast<std::size_t>(i)] = 1;
        queue.push_back(i);
      }
    }
  }
  if (queue.size() != static_cast<std::size_t>(m + k)) {
    throw Error(ErrorCode::kInternal, "basis tree is disconnected");
  }
}

// Unique tree path from the entering cell's column node back to its row
// node, returned as the cycle's cell list. The entering cell itself (sign
// '+') is cells[0]; signs alternate along the list.
std::vector<std::pair<Eigen::Index, Eigen::Index>> find_cycle(
    const Basis& basis, Eigen::Index enter_i, Eigen::Index enter_j) {
  const Eigen::Index m = basis.m;
  const Eigen::Index k = basis.k;
  const std::size_t nodes = static_cast<std::size_t>(m + k);
  constexpr Eigen::Index kUnset = -1;
  std::vector<Eigen::Index> parent(nodes, kUnset);
  std::vector<std::uint8_t> seen(nodes, 0);
  std::vector<Eigen::Index> queue;
  queue.reserve(nodes);
  seen[static_cast<std::size_t>(enter_i)] = 1;
  queue.push_back(enter_i);
  const Eigen::Index target = m + enter_j;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Eigen::Index node = queue[head];
    if (node == target) break;
    if (node < m) {
      for (Eigen::Index j : basis.row_adj[static_cast<std::size_t>(node)]) {
        const std::size_t col_node = static_cast<std::size_t>(m + j);
        if (seen[col_node]) continue;
        seen[col_node] = 1;
        parent[col_node] = node;
        queue.push_back(m + j);
      }
    } else {
      const Eigen::Index j = node - m;
      for (Eigen::Index i : basis.col_adj[static_cast<std::size_t>(j)]) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        seen[static_cast<std::size_t>(i)] = 1;
        parent[static_cast<std::size_t>(i)] = node;
        queue.push_back(i);
      }
    }
  }
  if (!seen[static_cast<std::size_t>(target)]) {
    throw Error(ErrorCode::kInternal, "entering cell closes no cycle");
  }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  cells.emplace_back(enter_i, enter_j);
  Eigen::Index node = target;
  while (node != enter_i) {
    const Eigen::Index prev = parent[static_cast<std::size_t>(node)];
    if (node < m) {
      cells.emplace_back(node, prev - m);
    } else {
      cells.emplace_back(prev, node - m);
    }
    node = prev;
  }
  return cells;
}

}  // namespace

TransportPlan solve_exact(const Distribution& mu, const Distribution& nu,
                          const CostMatrix& cost) {
  internal::SupportView view = internal::restrict_to_support(mu, nu, cost);
  const Eigen::Index m = view.a.size();
  const Eigen::Index k = view.b.size();

  // The transportation problem needs equal totals; fold the (tiny,
  // precondition-bounded) difference into the last target weight.
  view.b[k - 1] = std::max(0.0, view.b[k - 1] + (view.a.sum() - view.b.sum()));

  Basis basis = northwest_corner(view.a, view.b);
  Eigen::VectorXd u(m);
  Eigen::VectorXd v(k);
  const double tol =
      1e-11 * (1.0 + view.costs.cwiseAbs().maxCoeff());
  const long max_pivots = 50L * static_cast<long>(m) * static_cast<long>(k) + 1000;

  for (long pivot = 0;; ++pivot) {
    if (pivot > max_pivots) {
      throw Error(ErrorCode::kInternal, "simplex pivot budget exhausted");
    }
    compute_duals(basis, view.costs, u, v);

    Eigen::Index enter_i = -1;
    Eigen::Index enter_j = -1;
    for (Eigen::Index i = 0; i < m && enter_i < 0; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        if (basis.contains(i, j)) continue;
        if (view.costs(i, j) - u[i] - v[j] < -tol) {
          enter_i = i;
          enter_j = j;
          break;
        }
      }
    }
    if (enter_i < 0) break;

    const auto cycle = find_cycle(basis, enter_i, enter_j);
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 1; idx < cycle.size(); idx += 2) {
      theta = std::min(theta, basis.flow(cycle[idx].first, cycle[idx].second));
    }
    Eigen::Index leave_i = -1;
    Eigen::Index leave_j = -1;
    for (std::size_t idx = 1; idx < cycle.size(); idx += 2) {
      const auto [i, j] = cycle[idx];
      if (basis.flow(i, j) != theta) continue;
      if (leave_i < 0 || i < leave_i || (i == leave_i && j < leave_j)) {
        leave_i = i;
        leave_j = j;
      }
    }

    for (std::size_t idx = 1; idx < cycle.size(); ++idx) {
      const auto [i, j] = cycle[idx];
      if (idx % 2 == 1) {
        basis.flow(i, j) = std::max(0.0, basis.flow(i, j) - theta);
      } else {
        basis.flow(i, j) += theta;
      }
    }
    basis.erase(leave_i, leave_j);
    basis.insert(enter_i, enter_j, theta);
  }

  TransportPlan plan;
  plan.flows = Eigen::MatrixXd::Zero(cost.entries.rows(), cost.entries.cols());
  double distance = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j : basis.row_adj[static_cast<std::size_t>(i)]) {
      const double f = basis.flow(i, j);
      if (f <= 0.0) continue;
      plan.flows(view.rows[static_cast<std::size_t>(i)],
                 view.cols[static_cast<std::size_t>(j)]) = f;
      distance += f * view.costs(i, j);
    }
  }
  plan.distance = distance;
  internal::bump_ot_solve_count();
  return plan;
}

}  // namespace otsum
