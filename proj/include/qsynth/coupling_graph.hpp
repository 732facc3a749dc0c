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
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qsynth/errors.hpp"

namespace qsynth {

// Hardware controls beyond the always-available x/y couplings. direct_z means
// z rotations exist as native pulses instead of being built by conjugation;
// simultaneous_xy means a rotation about any equatorial axis is one pulse.
struct Capabilities {
  bool simultaneous_xy = false;
  bool direct_z = false;
};

// Undirected coupling graph on the d levels of a qudit. Edges are stored
// normalized (lo, hi), sorted, deduplicated; neighbor lists come out in
// ascending order so every traversal in the library is deterministic.
class CouplingGraph {
 public:
  CouplingGraph(int d, std::vector<std::pair<int, int>> edges, Capabilities caps = {})
      : d_(d), caps_(caps) {
    if (d < 2) throw DimensionMismatch("CouplingGraph: need d >= 2, got " + std::to_string(d));
    std::set<std::pair<int, int>> normalized;
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= d || b >= d) {
        throw IndexOutOfRange("CouplingGraph: edge (" + std::to_string(a) + "," +
                              std::to_string(b) + ") outside [0," + std::to_string(d) + ")");
      }
      if (a == b) {
        throw IndexOutOfRange("CouplingGraph: self-loop at node " + std::to_string(a));
      }
      normalized.emplace(std::min(a, b), std::max(a, b));
    }
    edges_.assign(normalized.begin(), normalized.end());
    adj_.resize(d);
    for (auto [a, b] : edges_) {
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  int dim() const { return d_; }
  const Capabilities& caps() const { return caps_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int j) const { return adj_.at(static_cast<size_t>(j)); }

  bool has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(a, b));
  }

 private:
  int d_;
  Capabilities caps_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

inline bool is_connected(const CouplingGraph& g) {
  const int d = g.dim();
  std::vector<char> seen(static_cast<size_t>(d), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = 1;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == d;
}

// Rooted spanning tree plus an elimination numbering of the nodes.
// order[i] is the node numbered i; the root is always numbered last. The
// numbering has the property that the tree path from the root to any node j
// passes only through nodes numbered higher than j, which is what makes
// column-by-column triangularization never disturb already-cleared columns.
struct SpanningTree {
  int root = 0;
  std::vector<int> parent;  // parent[root] == -1
  std::vector<int> order;
};

// BFS spanning tree from `root` (ascending neighbor order), numbered by
// repeatedly deleting the lowest-indexed remaining leaf. Any leaf-deletion
// order yields a valid numbering; pinning the tie-break makes output
// reproducible across runs.
inline SpanningTree spanning_tree(const CouplingGraph& g, int root) {
  const int d = g.dim();
  if (root < 0 || root >= d) {
    throw IndexOutOfRange("spanning_tree: root " + std::to_string(root) + " outside [0," +
                          std::to_string(d) + ")");
  }
  if (!is_connected(g)) {
    throw DisconnectedGraph("spanning_tree: coupling graph is not connected");
  }

  SpanningTree t;
  t.root = root;
  t.parent.assign(static_cast<size_t>(d), -1);
  std::vector<char> seen(static_cast<size_t>(d), 0);
  std::deque<int> queue{root};
  seen[static_cast<size_t>(root)] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = 1;
        t.parent[static_cast<size_t>(v)] = u;
        queue.push_back(v);
      }
    }
  }

  std::vector<int> degree(static_cast<size_t>(d), 0);
  for (int v = 0; v < d; ++v) {
    if (t.parent[static_cast<size_t>(v)] >= 0) {
      ++degree[static_cast<size_t>(v)];
      ++degree[static_cast<size_t>(t.parent[static_cast<size_t>(v)])];
    }
  }
  std::vector<char> alive(static_cast<size_t>(d), 1);
  std::set<int> leaves;
  for (int v = 0; v < d; ++v) {
    if (v != root && degree[static_cast<size_t>(v)] <= 1) leaves.insert(v);
  }
  while (!leaves.empty()) {
    const int v = *leaves.begin();
    leaves.erase(leaves.begin());
    alive[static_cast<size_t>(v)] = 0;
    t.order.push_back(v);
    const int p = t.parent[static_cast<size_t>(v)];
    if (p >= 0 && alive[static_cast<size_t>(p)]) {
      if (--degree[static_cast<size_t>(p)] <= 1 && p != root) leaves.insert(p);
    }
  }
  t.order.push_back(root);
  return t;
}

// Checks that t is structurally a spanning tree of g rooted where it claims,
// with `order` some permutation ending at the root. Used to vet
// caller-supplied trees before synthesis trusts them. Deliberately does not
// require the root-path numbering property: synthesis re-derives a usable
// per-column order when handed a tree whose numbering lacks it.
inline void validate_tree(const CouplingGraph& g, const SpanningTree& t) {
  const int d = g.dim();
  if (static_cast<int>(t.parent.size()) != d || static_cast<int>(t.order.size()) != d) {
    throw DimensionMismatch("validate_tree: tree arrays must have length d");
  }
  if (t.root < 0 || t.root >= d || t.parent[static_cast<size_t>(t.root)] != -1) {
    throw Error("validate_tree: root must be in range with parent[root] == -1");
  }
  std::vector<int> number(static_cast<size_t>(d), -1);
  for (int i = 0; i < d; ++i) {
    const int v = t.order[static_cast<size_t>(i)];
    if (v < 0 || v >= d || number[static_cast<size_t>(v)] != -1) {
      throw Error("validate_tree: order is not a permutation of the nodes");
    }
    number[static_cast<size_t>(v)] = i;
  }
  if (t.order.back() != t.root) throw Error("validate_tree: root must be numbered last");
  for (int v = 0; v < d; ++v) {
    if (v == t.root) continue;
    const int p = t.parent[static_cast<size_t>(v)];
    if (p < 0 || p >= d || !g.has_edge(p, v)) {
      throw Error("validate_tree: parent link (" + std::to_string(p) + "," + std::to_string(v) +
                  ") is not a graph edge");
    }
    // Walking parent links must reach the root without revisiting; combined
    // with d-1 links total this certifies the tree is connected and acyclic.
    int steps = 0;
    for (int u = v; u != t.root; u = t.parent[static_cast<size_t>(u)]) {
      if (++steps > d) throw Error("validate_tree: parent links contain a cycle");
    }
  }
}

// True when the elimination numbering satisfies the root-path property: the
// tree path from the root to any node v visits, besides v itself, only nodes
// numbered higher than v. Orders produced by spanning_tree always qualify;
// hand-written orders such as rb87_tree's do not have to.
inline bool has_numbering_property(const SpanningTree& t) {
  const int d = static_cast<int>(t.order.size());
  std::vector<int> number(static_cast<size_t>(d), -1);
  for (int i = 0; i < d; ++i) number[static_cast<size_t>(t.order[static_cast<size_t>(i)])] = i;
  for (int v = 0; v < d; ++v) {
    if (v == t.root) continue;
    for (int u = t.parent[static_cast<size_t>(v)]; u != t.root;
         u = t.parent[static_cast<size_t>(u)]) {
      if (number[static_cast<size_t>(u)] < number[static_cast<size_t>(v)]) return false;
    }
  }
  return true;
}

// Minimal-length path between j and k, deterministic via ascending-neighbor
// BFS. Returns [j] when j == k.
inline std::vector<int> shortest_path(const CouplingGraph& g, int j, int k) {
  const int d = g.dim();
  if (j < 0 || j >= d || k < 0 || k >= d) {
    throw IndexOutOfRange("shortest_path: endpoint outside [0," + std::to_string(d) + ")");
  }
  if (j == k) return {j};
  std::vector<int> prev(static_cast<size_t>(d), -1);
  std::vector<char> seen(static_cast<size_t>(d), 0);
  std::deque<int> queue{j};
  seen[static_cast<size_t>(j)] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (seen[static_cast<size_t>(v)]) continue;
      seen[static_cast<size_t>(v)] = 1;
      prev[static_cast<size_t>(v)] = u;
      if (v == k) {
        std::vector<int> path{k};
        for (int u2 = k; u2 != j;) {
          u2 = prev[static_cast<size_t>(u2)];
          path.push_back(u2);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  throw DisconnectedGraph("shortest_path: no path from " + std::to_string(j) + " to " +
                          std::to_string(k));
}

// The 8-level rubidium coupling graph: ground states {0,1,2} each coupled to
// a subset of the excited states {3..7} by allowed transitions. z rotations
// are not native; equatorial-axis pulses are.
inline CouplingGraph rb87_graph() {
  return CouplingGraph(
      8, {{0, 5}, {0, 6}, {0, 7}, {1, 4}, {1, 6}, {2, 3}, {2, 4}, {2, 5}},
      Capabilities{/*simultaneous_xy=*/true, /*direct_z=*/false});
}

// Companion tree for rb87_graph: drop edge (1,6) and eliminate in the fixed
// order 7,0,6,5,3,2,4 with node 1 last. This order is not one spanning_tree
// would produce (it is not a leaf-deletion numbering), but it is the
// benchmark order the synthesis golden tests are pinned to.
inline SpanningTree rb87_tree() {
  SpanningTree t;
  t.root = 1;
  t.parent = {5, -1, 4, 2, 1, 2, 0, 0};
  t.order = {7, 0, 6, 5, 3, 2, 4, 1};
  return t;
}

// Named graph presets accepted anywhere a graph file is accepted:
// "rb87", "path-N" (a chain on N levels), "complete-N" (all pairs coupled).
inline CouplingGraph preset(const std::string& name) {
  if (name == "rb87") return rb87_graph();
  auto parse_n = [&](const std::string& prefix) -> int {
    const std::string digits = name.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw UnknownPreset("preset: malformed size in '" + name + "'");
    }
    const int n = std::stoi(digits);
    if (n < 2) throw UnknownPreset("preset: '" + name + "' needs at least 2 levels");
    return n;
  };
  if (name.rfind("path-", 0) == 0) {
    const int n = parse_n("path-");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return CouplingGraph(n, std::move(edges));
  }
  if (name.rfind("complete-", 0) == 0) {
    const int n = parse_n("complete-");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return CouplingGraph(n, std::move(edges));
  }
  throw UnknownPreset("preset: unknown graph preset '" + name +
                      "' (expected rb87, path-N, or complete-N)");
}

}  // namespace qsynth
