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

#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qsynth/matrix.hpp"
#include "qsynth/pulse.hpp"
#include "qsynth/schedule.hpp"
#include "test_helpers.hpp"

using namespace qsynth;

namespace {

// Full-space pulse matrix assembled without apply_pulse_inplace: embed the
// block at the pair, then Kronecker into place. The simulator's row-operation
// path is checked against this.
Matrix pulse_matrix_oracle(const Pulse& p, int d, int n_qudits) {
  if (p.gen == Gen::Int) {
    Matrix m = Matrix::Identity(d * d, d * d);
    m(d * d - 1, d * d - 1) = std::exp(Complex(0, p.angle));
    return m;
  }
  const Matrix local = embed_block(d, p.j, p.k, pulse_block(p));
  if (n_qudits == 1) return local;
  const Matrix eye = Matrix::Identity(d, d);
  return p.qudit == 0 ? test_helpers::kron(local, eye) : test_helpers::kron(eye, local);
}

Pulse random_pulse(int d, int n_qudits, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> gen_pick(0, n_qudits == 2 ? 4 : 3);
  std::uniform_int_distribution<int> level(0, d - 1);
  std::uniform_int_distribution<int> qudit(0, n_qudits - 1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  const int which = gen_pick(rng);
  if (which == 4) return Pulse::interaction(angle(rng));
  int j = level(rng);
  int k = level(rng);
  while (k == j) k = level(rng);
  switch (which) {
    case 0: return Pulse::x(j, k, angle(rng), qudit(rng));
    case 1: return Pulse::y(j, k, angle(rng), qudit(rng));
    case 2: return Pulse::z(j, k, angle(rng), qudit(rng));
    default: return Pulse::xy(j, k, angle(rng), angle(rng), qudit(rng));
  }
}

Schedule random_schedule(int d, int n_qudits, int n_pulses, std::mt19937_64& rng) {
  Schedule s;
  s.n_qudits = n_qudits;
  s.d = d;
  for (int i = 0; i < n_pulses; ++i) s.append(random_pulse(d, n_qudits, rng));
  return s;
}

}  // namespace

TEST_CASE("empty schedules simulate to the identity") {
  Schedule one;
  one.n_qudits = 1;
  one.d = 5;
  CHECK(simulate(one) == Matrix::Identity(5, 5));

  Schedule two;
  two.n_qudits = 2;
  two.d = 3;
  CHECK(simulate(two) == Matrix::Identity(9, 9));
  CHECK(one.space_dim() == 5);
  CHECK(two.space_dim() == 9);
}

TEST_CASE("append validates pulses against the schedule shape") {
  Schedule s;
  s.n_qudits = 1;
  s.d = 3;
  CHECK_THROWS_AS(s.append(Pulse::interaction(1.0)), InvalidPulse);
  CHECK_THROWS_AS(s.append(Pulse::x(0, 3, 1.0)), InvalidPulse);
  CHECK_THROWS_AS(s.append(Pulse::x(0, 1, 1.0, /*qudit=*/1)), InvalidPulse);
  CHECK_NOTHROW(s.append(Pulse::x(0, 1, 1.0)));
  CHECK(s.pulses.size() == 1);
}

TEST_CASE("simulate composes pulses first-to-last, rightmost first") {
  Schedule s;
  s.n_qudits = 1;
  s.d = 2;
  const Pulse p1 = Pulse::x(0, 1, 0.7);
  const Pulse p2 = Pulse::z(0, 1, 1.1);  // does not commute with p1
  s.append(p1);
  s.append(p2);
  const Matrix want = pulse_matrix_oracle(p2, 2, 1) * pulse_matrix_oracle(p1, 2, 1);
  CHECK((simulate(s) - want).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix wrong_order = pulse_matrix_oracle(p1, 2, 1) * pulse_matrix_oracle(p2, 2, 1);
  CHECK((simulate(s) - wrong_order).cwiseAbs().maxCoeff() > 1e-2);
}

TEST_CASE("row-operation pulse application matches full matrix products") {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> dim(2, 6);
  for (int n_qudits : {1, 2}) {
    for (int it = 0; it < 150; ++it) {
      const int d = dim(rng);
      const int space = n_qudits == 2 ? d * d : d;
      const Schedule s = random_schedule(d, n_qudits, 12, rng);
      Matrix want = Matrix::Identity(space, space);
      for (const Pulse& p : s.pulses) want = pulse_matrix_oracle(p, d, n_qudits) * want;
      CHECK((simulate(s) - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("pulse_unitary agrees with the oracle on every generator") {
  std::mt19937_64 rng(31415);
  for (int it = 0; it < 200; ++it) {
    const int d = 4;
    for (int n_qudits : {1, 2}) {
      const Pulse p = random_pulse(d, n_qudits, rng);
      CHECK((pulse_unitary(p, d, n_qudits) - pulse_matrix_oracle(p, d, n_qudits))
                .cwiseAbs()
                .maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("the interaction pulse phases exactly the top corner state") {
  Schedule s;
  s.n_qudits = 2;
  s.d = 3;
  s.append(Pulse::interaction(0.9));
  const Matrix m = simulate(s);
  for (int r = 0; r < 9; ++r) {
    const Complex want = r == 8 ? std::exp(Complex(0, 0.9)) : Complex(1, 0);
    CHECK(std::abs(m(r, r) - want) < 1e-15);
  }
  CHECK(s.int_pulse_count() == 1);
}

TEST_CASE("inverse reverses and negates, simulating to the adjoint") {
  std::mt19937_64 rng(161803);
  for (int n_qudits : {1, 2}) {
    const Schedule s = random_schedule(4, n_qudits, 20, rng);
    const Schedule inv = inverse(s);
    CHECK((simulate(inv) - simulate(s).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix round_trip = simulate(inv) * simulate(s);
    CHECK((round_trip - Matrix::Identity(s.space_dim(), s.space_dim())).cwiseAbs().maxCoeff() <
          1e-12);
  }
  Schedule s;
  s.global_phase = 0.4;
  CHECK(inverse(s).global_phase == -0.4);
}

TEST_CASE("verify reports distance up to phase and respects tolerance") {
  std::mt19937_64 rng(55);
  Schedule s = random_schedule(3, 1, 10, rng);
  const Matrix target = std::exp(Complex(0, 0.77)) * simulate(s);
  const VerifyReport ok = verify(s, target, 1e-9);
  CHECK(ok.pass);
  CHECK(ok.target_distance < 1e-12);
  CHECK(ok.pulse_count == 10);

  Matrix off = target;
  off(0, 0) += 1e-3;
  const VerifyReport bad = verify(s, off, 1e-9);
  CHECK_FALSE(bad.pass);
  CHECK(bad.target_distance > 1e-5);

  CHECK_THROWS_AS(verify(s, Matrix::Identity(4, 4), 1e-9), DimensionMismatch);
}

TEST_CASE("int pulses are counted, x pulses are not") {
  Schedule s;
  s.n_qudits = 2;
  s.d = 2;
  s.append(Pulse::x(0, 1, 1.0));
  s.append(Pulse::interaction(1.0));
  s.append(Pulse::interaction(-2.0));
  CHECK(s.int_pulse_count() == 2);
}
