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

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qsynth/coupling_graph.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/pulse.hpp"
#include "qsynth/schedule.hpp"
#include "qsynth/single_qudit.hpp"
#include "test_helpers.hpp"

using namespace qsynth;

namespace {

Matrix compose_gates(int d, const std::vector<GivensGate>& gates) {
  Matrix acc = Matrix::Identity(d, d);
  for (const GivensGate& g : gates) acc = givens_matrix(d, g) * acc;
  return acc;
}

Matrix compose_pulses(int d, const std::vector<Pulse>& pulses) {
  Matrix acc = Matrix::Identity(d, d);
  for (const Pulse& p : pulses) acc = pulse_matrix(d, p) * acc;
  return acc;
}

std::vector<std::pair<int, int>> column_pairs(const QRResult& r, int col) {
  std::vector<std::pair<int, int>> out;
  for (size_t i = 0; i < r.gates.size(); ++i) {
    if (r.gate_column[i] == col) out.emplace_back(r.gates[i].j, r.gates[i].k);
  }
  return out;
}

}  // namespace

TEST_CASE("givens_params zeroes the second entry and keeps the joint magnitude") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int it = 0; it < 500; ++it) {
    const Complex a(gauss(rng), gauss(rng));
    const Complex b(gauss(rng), gauss(rng));
    const GivensParams p = givens_params(a, b);
    REQUIRE_FALSE(p.degenerate);
    CHECK(p.gamma >= 0.0);
    CHECK(p.gamma <= kPi / 2 + 1e-12);
    const Eigen::Matrix2cd block = givens_block(p.gamma, p.phi);
    const Complex kept = block(0, 0) * a + block(0, 1) * b;
    const Complex zeroed = block(1, 0) * a + block(1, 1) * b;
    CHECK(std::abs(zeroed) < 1e-12);
    CHECK(std::abs(kept) == Catch::Approx(std::hypot(std::abs(a), std::abs(b))).margin(1e-12));
    // The kept entry inherits a's phase, so a real-positive accumulates stays
    // real-positive across a whole elimination column.
    if (std::abs(a) > 1e-3) {
      CHECK(std::arg(kept) == Catch::Approx(std::arg(a)).margin(1e-9));
    }
  }

  // a = 0: the rotation is a quarter turn moving b onto the kept slot.
  const GivensParams quarter = givens_params(0.0, Complex(0.0, 2.0));
  CHECK(quarter.gamma == Catch::Approx(kPi / 2));
  CHECK_FALSE(quarter.degenerate);

  const GivensParams degen = givens_params(Complex(1e-15, 0), Complex(0, 1e-15));
  CHECK(degen.degenerate);
  CHECK(degen.gamma == 0.0);
}

TEST_CASE("givens_via_path equals the direct rotation, swaps included") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int d : {2, 3, 5, 8}) {
    for (int it = 0; it < 50; ++it) {
      // A path 0-1-...-(d-1) relabeled at random.
      std::vector<int> path(static_cast<size_t>(d));
      std::iota(path.begin(), path.end(), 0);
      std::shuffle(path.begin(), path.end(), rng);
      const double gamma = angle(rng);
      const double phi = angle(rng);
      const std::vector<GivensGate> gates = givens_via_path(gamma, phi, path);
      const GivensGate direct{path.front(), path.back(), gamma, phi};
      CHECK((compose_gates(d, gates) - givens_matrix(d, direct)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(gates.size() == 1 + 2 * (path.size() - 2));
    }
  }
}

TEST_CASE("lower_on_graph routes non-adjacent pairs through the graph") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int it = 0; it < 100; ++it) {
    const int d = 6;
    const CouplingGraph g =
        test_helpers::random_connected_graph(d, rng, test_helpers::random_caps(rng), 0.15);
    std::uniform_int_distribution<int> level(0, d - 1);
    const int j = level(rng);
    int k = level(rng);
    while (k == j) k = level(rng);
    const double gamma = angle(rng);
    const double phi = angle(rng);
    const std::vector<Pulse> pulses = lower_on_graph(j, k, gamma, phi, g);
    const Matrix want = givens_matrix(d, GivensGate{j, k, gamma, phi});
    CHECK((compose_pulses(d, pulses) - want).cwiseAbs().maxCoeff() < 1e-11);
    // Every pulse stays on a coupled pair.
    for (const Pulse& p : pulses) CHECK(g.has_edge(p.j, p.k));
  }
  CHECK(lower_on_graph(0, 1, 0.0, 0.5, preset("path-3")).empty());
}

TEST_CASE("qr_reduce diagonalizes random unitaries with graph-legal rotations") {
  std::mt19937_64 rng(109);
  for (int it = 0; it < 60; ++it) {
    std::uniform_int_distribution<int> dim(2, 8);
    const int d = dim(rng);
    const CouplingGraph g = test_helpers::random_connected_graph(d, rng);
    std::uniform_int_distribution<int> pick(0, d - 1);
    const SpanningTree tree = spanning_tree(g, pick(rng));
    const Matrix v = random_unitary(d, rng);
    const QRResult r = qr_reduce(v, g, tree);

    REQUIRE(r.gates.size() == r.gate_column.size());
    for (const GivensGate& gate : r.gates) CHECK(g.has_edge(gate.j, gate.k));

    const Matrix reduced = compose_gates(d, r.gates) * v;
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (a != b) CHECK(std::abs(reduced(a, b)) < 1e-9);
      }
    }
    for (int a = 0; a < d; ++a) {
      CHECK(std::abs(reduced(a, a)) == Catch::Approx(1.0).margin(1e-9));
      CHECK(r.residual_diagonal[static_cast<size_t>(a)] ==
            Catch::Approx(std::arg(reduced(a, a))).margin(1e-9));
    }
  }
}

TEST_CASE("qr_reduce on the rb87 benchmark pins gate count and column sequences") {
  const CouplingGraph g = rb87_graph();
  const SpanningTree tree = rb87_tree();
  std::mt19937_64 rng(113);
  for (int it = 0; it < 5; ++it) {
    const Matrix v = random_unitary(8, rng);
    const QRResult r = qr_reduce(v, g, tree);
    CHECK(r.gates.size() == 28);
    CHECK(r.swap_overhead == 0);

    using Pairs = std::vector<std::pair<int, int>>;
    CHECK(column_pairs(r, 7) ==
          Pairs{{4, 1}, {2, 4}, {2, 3}, {5, 2}, {0, 5}, {0, 6}, {7, 0}});
    CHECK(column_pairs(r, 0) == Pairs{{4, 1}, {2, 4}, {2, 3}, {5, 2}, {0, 5}, {0, 6}});
    CHECK(column_pairs(r, 6) == Pairs{{2, 5}, {2, 3}, {4, 2}, {1, 4}, {6, 1}});
    CHECK(column_pairs(r, 5) == Pairs{{4, 1}, {2, 4}, {2, 3}, {5, 2}});
    CHECK(column_pairs(r, 3) == Pairs{{4, 1}, {2, 4}, {3, 2}});
    CHECK(column_pairs(r, 2) == Pairs{{4, 1}, {2, 4}});
    CHECK(column_pairs(r, 4) == Pairs{{4, 1}});
  }
}

TEST_CASE("qr_reduce recovers when elimination strands part of the graph") {
  // Star graph with the hub eliminated first: the remaining leaves are
  // mutually disconnected, forcing the swap-chain fallback through the hub.
  const CouplingGraph g(4, {{0, 1}, {0, 2}, {0, 3}});
  SpanningTree t;
  t.root = 3;
  t.parent = {3, 0, 0, -1};
  t.order = {0, 1, 2, 3};
  validate_tree(g, t);

  std::mt19937_64 rng(127);
  const Matrix v = random_unitary(4, rng);
  const QRResult r = qr_reduce(v, g, t);
  CHECK(r.swap_overhead > 0);
  for (const GivensGate& gate : r.gates) CHECK(g.has_edge(gate.j, gate.k));
  const Matrix reduced = compose_gates(4, r.gates) * v;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a != b) CHECK(std::abs(reduced(a, b)) < 1e-9);
    }
  }
}

TEST_CASE("qr_reduce validates its inputs") {
  const CouplingGraph g = preset("path-3");
  const SpanningTree tree = spanning_tree(g, 2);
  std::mt19937_64 rng(131);

  CHECK_THROWS_AS(qr_reduce(Matrix::Identity(4, 4), g, tree), DimensionMismatch);
  CHECK_THROWS_AS(qr_reduce(2.0 * Matrix::Identity(3, 3), g, tree), NotUnitary);

  const CouplingGraph split(3, {{0, 1}});
  SpanningTree dummy;
  dummy.root = 2;
  dummy.parent = {1, 2, -1};
  dummy.order = {0, 1, 2};
  CHECK_THROWS_AS(qr_reduce(Matrix::Identity(3, 3), split, dummy), DisconnectedGraph);

  SpanningTree bad = tree;
  bad.order = {2, 1, 0};  // root no longer last
  CHECK_THROWS_AS(qr_reduce(random_unitary(3, rng), g, bad), Error);
}

TEST_CASE("diag_solve satisfies the incidence system on its mean-free part") {
  std::mt19937_64 rng(137);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int d = 2; d <= 10; ++d) {
    for (int it = 0; it < 20; ++it) {
      const CouplingGraph g = test_helpers::random_connected_graph(d, rng);
      std::uniform_int_distribution<int> pick(0, d - 1);
      const SpanningTree tree = spanning_tree(g, pick(rng));
      std::vector<double> phases(static_cast<size_t>(d));
      for (double& p : phases) p = phase(rng);

      const PhaseSolve s = diag_solve(phases, tree);
      REQUIRE(s.tree_edges.size() == static_cast<size_t>(d - 1));
      REQUIRE(s.theta.size() == static_cast<size_t>(d - 1));
      CHECK(s.rank == d - 1);

      double mean = 0.0;
      for (double p : phases) mean += p;
      mean /= d;
      CHECK(s.residual_global_phase == Catch::Approx(mean).margin(1e-12));

      // Apply the incidence matrix: edge (p, c) adds +theta at c, -theta at p.
      std::vector<double> realized(static_cast<size_t>(d), 0.0);
      for (size_t e = 0; e < s.tree_edges.size(); ++e) {
        realized[static_cast<size_t>(s.tree_edges[e].second)] += s.theta[e];
        realized[static_cast<size_t>(s.tree_edges[e].first)] -= s.theta[e];
      }
      for (int v = 0; v < d; ++v) {
        CHECK(std::abs(realized[static_cast<size_t>(v)] -
                       (phases[static_cast<size_t>(v)] - mean)) < 1e-12);
      }
    }
  }
  const SpanningTree tree = spanning_tree(preset("path-3"), 2);
  CHECK_THROWS_AS(diag_solve(std::vector<double>{0.1, 0.2}, tree), DimensionMismatch);
}

TEST_CASE("synthesize_single reproduces the target including the recorded phase") {
  std::mt19937_64 rng(139);
  for (int it = 0; it < 40; ++it) {
    std::uniform_int_distribution<int> dim(2, 8);
    const int d = dim(rng);
    const CouplingGraph g =
        test_helpers::random_connected_graph(d, rng, test_helpers::random_caps(rng));
    const Matrix v = random_unitary(d, rng);
    const Schedule s = synthesize_single(v, g);

    CHECK(s.n_qudits == 1);
    CHECK(s.d == d);
    const Matrix realized = std::exp(Complex(0, s.global_phase)) * simulate(s);
    CHECK((realized - v).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(verify(s, v, 1e-9).pass);
    for (const Pulse& p : s.pulses) CHECK(g.has_edge(p.j, p.k));
  }
}

TEST_CASE("synthesize_single on rb87 stays within the pulse budgets") {
  std::mt19937_64 rng(149);
  const Matrix v = random_unitary(8, rng);

  const CouplingGraph with_xy = rb87_graph();
  const Schedule fast = synthesize_single(v, with_xy, rb87_tree());
  CHECK(fast.givens_gates == 28);
  CHECK(fast.pulses.size() <= 49);
  CHECK(verify(fast, v, 1e-9).pass);
  for (const Pulse& p : fast.pulses) CHECK(p.gen == Gen::XY);

  const CouplingGraph plain(8, rb87_graph().edges(), Capabilities{false, false});
  const Schedule slow = synthesize_single(v, plain, rb87_tree());
  CHECK(slow.pulses.size() <= 105);
  CHECK(verify(slow, v, 1e-9).pass);
  for (const Pulse& p : slow.pulses) CHECK(p.gen != Gen::Z);
}
