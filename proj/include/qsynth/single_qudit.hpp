// Copyright 2026 The qsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qsynth/coupling_graph.hpp"
#include "qsynth/errors.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/pulse.hpp"
#include "qsynth/schedule.hpp"

namespace qsynth {

// Entries below this magnitude count as already zero: no rotation is spent
// on them and no axis phase is extracted from their noise.
inline constexpr double kEliminationTol = 1e-13;

struct GivensParams {
  double gamma = 0.0;
  double phi = 0.0;
  bool degenerate = false;  // both inputs ~0; gamma, phi are no-op placeholders
};

// Rotation parameters that zero `b` against `a`, where (a, b) sit at the
// (kept, zeroed) positions of the ordered pair. gamma = atan2(|b|, |a|) stays
// in [0, pi/2] and covers a = 0; the axis phase steers b's amplitude onto a
// with a's phase preserved.
inline GivensParams givens_params(Complex a, Complex b) {
  GivensParams p;
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma < kEliminationTol && mb < kEliminationTol) {
    p.degenerate = true;
    return p;
  }
  p.gamma = std::atan2(mb, ma);
  p.phi = kPi / 2 + std::arg(a) - std::arg(b);
  return p;
}

// Expands a Givens rotation on an arbitrary pair (j,k) into rotations on
// consecutive pairs of `path` (path[0] == j, path.back() == k): swap k's
// amplitude down to the node adjacent to j, rotate there, swap back. The
// composite equals the (j,k) Givens gate exactly, including the swap signs,
// at a cost of 2*(path length - 1) extra gates.
inline std::vector<GivensGate> givens_via_path(double gamma, double phi,
                                               const std::vector<int>& path) {
  const size_t ell = path.size() - 1;
  std::vector<GivensGate> gates;
  if (ell == 1) {
    gates.push_back(GivensGate{path[0], path[1], gamma, phi});
    return gates;
  }
  for (size_t i = ell - 1; i >= 1; --i) {
    gates.push_back(GivensGate{path[i], path[i + 1], kPi / 2, kPi / 2});
  }
  gates.push_back(GivensGate{path[0], path[1], gamma, phi});
  for (size_t i = 1; i <= ell - 1; ++i) {
    gates.push_back(GivensGate{path[i], path[i + 1], -kPi / 2, kPi / 2});
  }
  return gates;
}

// Pulses for a Givens rotation whose pair need not be a graph edge. Edge
// pairs lower directly; others go through the swap-chain expansion along a
// shortest path.
inline std::vector<Pulse> lower_on_graph(int j, int k, double gamma, double phi,
                                         const CouplingGraph& g, int qudit = 0) {
  std::vector<Pulse> out;
  if (angle_is_zero(gamma)) return out;
  if (g.has_edge(j, k)) {
    return lower_givens(GivensGate{j, k, gamma, phi}, g.caps(), qudit);
  }
  for (const GivensGate& gate : givens_via_path(gamma, phi, shortest_path(g, j, k))) {
    for (const Pulse& p : lower_givens(gate, g.caps(), qudit)) out.push_back(p);
  }
  return out;
}

struct QRResult {
  // In application order: gates[m-1] * ... * gates[0] * V is diagonal.
  std::vector<GivensGate> gates;
  std::vector<double> residual_diagonal;  // arg of each surviving diagonal entry
  int swap_overhead = 0;                  // swap gates spent on off-graph pairs
  std::vector<int> gate_column;           // which elimination column emitted each gate
};

namespace detail {

// Spanning tree of the subgraph induced on `alive`, rooted at `col`, built by
// alternating phases: claim everything reachable over edges of the reference
// tree first, then attach a single node over any other graph edge and repeat.
// Preferring reference-tree edges keeps per-column elimination aligned with
// the tree the caller planned around even after earlier columns removed some
// of its nodes; the one-at-a-time fallback keeps the construction
// deterministic (claim order, then ascending neighbors).
inline std::vector<int> column_tree(const CouplingGraph& g, const SpanningTree& ref, int col,
                                    const std::vector<char>& alive) {
  const int d = g.dim();
  auto is_ref_edge = [&](int u, int v) {
    return ref.parent[static_cast<size_t>(u)] == v || ref.parent[static_cast<size_t>(v)] == u;
  };
  std::vector<int> parent(static_cast<size_t>(d), -1);
  std::vector<char> claimed(static_cast<size_t>(d), 0);
  std::vector<int> claim_order{col};
  claimed[static_cast<size_t>(col)] = 1;
  for (;;) {
    for (size_t qi = 0; qi < claim_order.size(); ++qi) {
      const int u = claim_order[qi];
      for (int v : g.neighbors(u)) {
        if (!alive[static_cast<size_t>(v)] || claimed[static_cast<size_t>(v)]) continue;
        if (!is_ref_edge(u, v)) continue;
        claimed[static_cast<size_t>(v)] = 1;
        parent[static_cast<size_t>(v)] = u;
        claim_order.push_back(v);
      }
    }
    bool attached = false;
    for (size_t qi = 0; qi < claim_order.size() && !attached; ++qi) {
      const int u = claim_order[qi];
      for (int v : g.neighbors(u)) {
        if (!alive[static_cast<size_t>(v)] || claimed[static_cast<size_t>(v)]) continue;
        claimed[static_cast<size_t>(v)] = 1;
        parent[static_cast<size_t>(v)] = u;
        claim_order.push_back(v);
        attached = true;
        break;
      }
    }
    if (!attached) break;
  }
  return parent;  // alive nodes with parent == -1 and != col were unreachable
}

// Post-order traversal of the column tree: children sorted deepest subtree
// first (ties broken by higher index first), node emitted after its subtree.
// Deep-first emission zeroes long branches before the entries they feed into,
// which is what keeps every rotation's kept-entry live until used.
inline std::vector<int> column_elimination_order(const std::vector<int>& parent, int col,
                                                 const std::vector<char>& alive) {
  const int d = static_cast<int>(parent.size());
  std::vector<std::vector<int>> children(static_cast<size_t>(d));
  for (int v = 0; v < d; ++v) {
    if (alive[static_cast<size_t>(v)] && parent[static_cast<size_t>(v)] >= 0) {
      children[static_cast<size_t>(parent[static_cast<size_t>(v)])].push_back(v);
    }
  }
  std::vector<int> height(static_cast<size_t>(d), 0);
  // Heights bottom-up; a reverse BFS ordering of the tree suffices.
  std::vector<int> bfs{col};
  for (size_t i = 0; i < bfs.size(); ++i) {
    for (int c : children[static_cast<size_t>(bfs[i])]) bfs.push_back(c);
  }
  for (size_t i = bfs.size(); i-- > 0;) {
    const int v = bfs[i];
    for (int c : children[static_cast<size_t>(v)]) {
      height[static_cast<size_t>(v)] =
          std::max(height[static_cast<size_t>(v)], height[static_cast<size_t>(c)] + 1);
    }
  }
  for (auto& ch : children) {
    std::sort(ch.begin(), ch.end(), [&](int a, int b) {
      if (height[static_cast<size_t>(a)] != height[static_cast<size_t>(b)]) {
        return height[static_cast<size_t>(a)] > height[static_cast<size_t>(b)];
      }
      return a > b;
    });
  }
  std::vector<int> order;
  // Iterative post-order; emit each node after its children, skip the root.
  std::vector<std::pair<int, size_t>> stack{{col, 0}};
  while (!stack.empty()) {
    auto& [v, next_child] = stack.back();
    if (next_child < children[static_cast<size_t>(v)].size()) {
      const int c = children[static_cast<size_t>(v)][next_child++];
      stack.emplace_back(c, 0);
    } else {
      if (v != col) order.push_back(v);
      stack.pop_back();
    }
  }
  return order;
}

inline void apply_gate_rows(Matrix& a, const GivensGate& g) {
  const Eigen::Matrix2cd b = givens_block(g.gamma, g.phi);
  const Eigen::Index cols = a.cols();
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Complex vj = a(g.j, c);
    const Complex vk = a(g.k, c);
    a(g.j, c) = b(0, 0) * vj + b(0, 1) * vk;
    a(g.k, c) = b(1, 0) * vj + b(1, 1) * vk;
  }
}

}  // namespace detail

// Reduces V to diagonal form with rotations restricted to graph edges,
// working column by column in the tree's elimination order. Within a column
// every elimination pairs a node with its parent in a tree spanning the
// still-alive nodes, so entries drain toward the column's diagonal; columns
// already finished are never written again (their rows are touched only by
// swap chains that restore them exactly). When the alive subgraph
// disconnects, the stranded entries are zeroed against the diagonal through
// swap-chain rotations along shortest paths in the full graph.
inline QRResult qr_reduce(const Matrix& v, const CouplingGraph& g, const SpanningTree& tree) {
  const int d = g.dim();
  if (v.rows() != d || v.cols() != d) {
    throw DimensionMismatch("qr_reduce: matrix dimension " + std::to_string(v.rows()) +
                            " does not match graph dimension " + std::to_string(d));
  }
  if (!is_connected(g)) {
    throw DisconnectedGraph(
        "qr_reduce: coupling graph is not connected; reduction to diagonal form needs a "
        "connected graph");
  }
  const double defect = unitarity_defect(v);
  if (!(defect <= 1e-10)) {
    throw NotUnitary("qr_reduce: ||V V^dag - I||_max = " + std::to_string(defect));
  }
  validate_tree(g, tree);

  QRResult r;
  Matrix a = v;
  std::vector<char> alive(static_cast<size_t>(d), 1);
  auto emit = [&](const GivensGate& gate, int col) {
    detail::apply_gate_rows(a, gate);
    r.gates.push_back(gate);
    r.gate_column.push_back(col);
  };

  for (int oi = 0; oi + 1 < d; ++oi) {
    const int col = tree.order[static_cast<size_t>(oi)];
    const std::vector<int> parent = detail::column_tree(g, tree, col, alive);
    for (int k : detail::column_elimination_order(parent, col, alive)) {
      const int p = parent[static_cast<size_t>(k)];
      if (std::abs(a(k, col)) < kEliminationTol) continue;
      const GivensParams gp = givens_params(a(p, col), a(k, col));
      emit(GivensGate{p, k, gp.gamma, gp.phi}, col);
    }
    // Alive nodes the column tree could not reach: rotate them against the
    // pivot itself, routed along a shortest path in the full graph. The
    // intermediate hops may cross rows of finished columns; the conjugated
    // swap pair puts them back exactly.
    for (int u = 0; u < d; ++u) {
      if (u == col || !alive[static_cast<size_t>(u)]) continue;
      if (parent[static_cast<size_t>(u)] >= 0) continue;
      if (std::abs(a(u, col)) < kEliminationTol) continue;
      const GivensParams gp = givens_params(a(col, col), a(u, col));
      const std::vector<int> path = shortest_path(g, col, u);
      for (const GivensGate& gate : givens_via_path(gp.gamma, gp.phi, path)) {
        emit(gate, col);
      }
      r.swap_overhead += 2 * (static_cast<int>(path.size()) - 2);
    }
    alive[static_cast<size_t>(col)] = 0;
  }

  r.residual_diagonal.resize(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) r.residual_diagonal[static_cast<size_t>(i)] = std::arg(a(i, i));
  return r;
}

struct PhaseSolve {
  std::vector<std::pair<int, int>> tree_edges;  // (parent, child), one per non-root node
  std::vector<double> theta;                    // z angle per edge, +theta lands on the child
  double residual_global_phase = 0.0;           // target = e^{i this} * realized diagonal
  int rank = 0;                                 // of the reduced incidence system
};

// Solves for the z rotation angles realizing diag(e^{i phases_0}, ...) on the
// tree's edges. Each z rotation is traceless (-theta at the parent, +theta at
// the child), so only the mean-free part of the phase vector is realizable;
// the mean comes back as residual_global_phase. On the mean-free part the
// tree system is triangular from the leaves up and the solution is unique.
inline PhaseSolve diag_solve(const std::vector<double>& phases, const SpanningTree& tree) {
  const int d = static_cast<int>(phases.size());
  if (static_cast<int>(tree.parent.size()) != d) {
    throw DimensionMismatch("diag_solve: phase count does not match tree size");
  }
  double mean = 0.0;
  for (double p : phases) mean += p;
  mean /= d;

  std::vector<std::vector<int>> children(static_cast<size_t>(d));
  for (int v = 0; v < d; ++v) {
    if (v != tree.root) children[static_cast<size_t>(tree.parent[static_cast<size_t>(v)])].push_back(v);
  }
  // theta[v] for the edge (parent(v), v), children before parents.
  std::vector<double> theta_at(static_cast<size_t>(d), 0.0);
  std::vector<int> post;
  std::vector<std::pair<int, size_t>> stack{{tree.root, 0}};
  while (!stack.empty()) {
    auto& [v, next_child] = stack.back();
    if (next_child < children[static_cast<size_t>(v)].size()) {
      stack.emplace_back(children[static_cast<size_t>(v)][next_child++], 0);
    } else {
      post.push_back(v);
      stack.pop_back();
    }
  }
  for (int v : post) {
    double acc = phases[static_cast<size_t>(v)] - mean;
    for (int c : children[static_cast<size_t>(v)]) acc += theta_at[static_cast<size_t>(c)];
    theta_at[static_cast<size_t>(v)] = acc;
  }
  // The root equation is the negated sum of the others, so it must close on
  // its own once the input is mean-free.
  if (std::abs(theta_at[static_cast<size_t>(tree.root)]) > 1e-9) {
    throw Error("diag_solve: tree system failed to close (internal error)");
  }

  PhaseSolve s;
  s.residual_global_phase = mean;
  for (int v = 0; v < d; ++v) {
    if (v == tree.root) continue;
    s.tree_edges.emplace_back(tree.parent[static_cast<size_t>(v)], v);
    s.theta.push_back(theta_at[static_cast<size_t>(v)]);
  }
  // Rank of the incidence system with the root column removed, reported so
  // callers can confirm uniqueness rather than trust it.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d - 1, d - 1);
  auto reduced_index = [&](int node) { return node < tree.root ? node : node - 1; };
  for (size_t e = 0; e < s.tree_edges.size(); ++e) {
    const auto [p, c] = s.tree_edges[e];
    if (c != tree.root) m(static_cast<Eigen::Index>(e), reduced_index(c)) += 1.0;
    if (p != tree.root) m(static_cast<Eigen::Index>(e), reduced_index(p)) -= 1.0;
  }
  s.rank = static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
  return s;
}

// Full single-qudit pipeline: triangularize with graph-legal Givens
// rotations, realize the leftover diagonal with z rotations on the tree
// edges, then emit everything in application order (diagonal first, then the
// inverted gate list back to front). The schedule reproduces V up to the
// recorded global phase.
inline Schedule synthesize_single(const Matrix& v, const CouplingGraph& g,
                                  const SpanningTree& tree) {
  const QRResult qr = qr_reduce(v, g, tree);
  const PhaseSolve ps = diag_solve(qr.residual_diagonal, tree);

  Schedule s;
  s.n_qudits = 1;
  s.d = g.dim();
  s.global_phase = ps.residual_global_phase;
  s.givens_gates = static_cast<int>(qr.gates.size());
  for (size_t e = 0; e < ps.tree_edges.size(); ++e) {
    if (angle_is_zero(ps.theta[e])) continue;
    const auto [p, c] = ps.tree_edges[e];
    s.append(z_by_conjugation(p, c, ps.theta[e], g.caps()),
             "diag z(" + std::to_string(p) + "," + std::to_string(c) + ")");
    ++s.diagonal_rotations;
  }
  for (size_t i = qr.gates.size(); i-- > 0;) {
    const GivensGate inv = qr.gates[i].inverse();
    s.append(lower_givens(inv, g.caps()),
             "givens(" + std::to_string(inv.j) + "," + std::to_string(inv.k) + ") col " +
                 std::to_string(qr.gate_column[i]));
  }
  return s;
}

inline Schedule synthesize_single(const Matrix& v, const CouplingGraph& g) {
  return synthesize_single(v, g, spanning_tree(g, g.dim() - 1));
}

}  // namespace qsynth
