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

#include <string>
#include <vector>

#include "qsynth/errors.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/pulse.hpp"

namespace qsynth {

// An ordered pulse program on one or two d-level systems. pulses[0] is
// applied first (the rightmost factor of the composed unitary). Synthesis
// routines that realize a target only up to a global phase record the
// leftover in global_phase: target = e^{i global_phase} * simulate(schedule).
// notes carry per-step provenance for reports; they are not semantic.
struct Schedule {
  int n_qudits = 1;
  int d = 2;
  std::vector<Pulse> pulses;
  std::vector<std::string> notes;
  double global_phase = 0.0;
  int givens_gates = 0;
  int diagonal_rotations = 0;

  int space_dim() const {
    int dim = 1;
    for (int i = 0; i < n_qudits; ++i) dim *= d;
    return dim;
  }

  void append(const Pulse& p, const std::string& note = "") {
    validate_pulse(p, d, n_qudits);
    pulses.push_back(p);
    if (!note.empty()) notes.push_back(note);
  }

  void append(const std::vector<Pulse>& ps, const std::string& note = "") {
    for (const Pulse& p : ps) append(p);
    if (!note.empty()) notes.push_back(note);
  }

  int int_pulse_count() const {
    int n = 0;
    for (const Pulse& p : pulses) n += (p.gen == Gen::Int) ? 1 : 0;
    return n;
  }
};

namespace detail {

// Left-multiplies the accumulator by the pulse unitary using row operations
// on the two (or, for int, one) affected rows per basis slice. Cost is
// O(D * d) per pulse instead of a dense D^3 multiply.
inline void apply_pulse_inplace(Matrix& acc, const Pulse& p, int d, int n_qudits) {
  validate_pulse(p, d, n_qudits);
  const Eigen::Index cols = acc.cols();
  if (p.gen == Gen::Int) {
    const Eigen::Index corner = static_cast<Eigen::Index>(d) * d - 1;
    acc.row(corner) *= std::exp(Complex(0, p.angle));
    return;
  }
  const Eigen::Matrix2cd b = pulse_block(p);
  auto rotate_rows = [&](Eigen::Index rj, Eigen::Index rk) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Complex vj = acc(rj, c);
      const Complex vk = acc(rk, c);
      acc(rj, c) = b(0, 0) * vj + b(0, 1) * vk;
      acc(rk, c) = b(1, 0) * vj + b(1, 1) * vk;
    }
  };
  if (n_qudits == 1) {
    rotate_rows(p.j, p.k);
    return;
  }
  // Two qudits, control-major index |j,k> -> d*j + k. A pulse on qudit 0
  // mixes first-factor levels for every fixed second index and vice versa.
  for (int m = 0; m < d; ++m) {
    if (p.qudit == 0) {
      rotate_rows(static_cast<Eigen::Index>(p.j) * d + m, static_cast<Eigen::Index>(p.k) * d + m);
    } else {
      rotate_rows(static_cast<Eigen::Index>(m) * d + p.j, static_cast<Eigen::Index>(m) * d + p.k);
    }
  }
}

}  // namespace detail

// Full-space unitary of a single pulse.
inline Matrix pulse_unitary(const Pulse& p, int d, int n_qudits) {
  const int dim = (n_qudits == 2) ? d * d : d;
  Matrix m = Matrix::Identity(dim, dim);
  detail::apply_pulse_inplace(m, p, d, n_qudits);
  return m;
}

// Composes the schedule into its unitary, first pulse rightmost.
inline Matrix simulate(const Schedule& s) {
  if (s.n_qudits != 1 && s.n_qudits != 2) {
    throw DimensionMismatch("simulate: n_qudits must be 1 or 2");
  }
  const int dim = s.space_dim();
  Matrix acc = Matrix::Identity(dim, dim);
  for (const Pulse& p : s.pulses) detail::apply_pulse_inplace(acc, p, s.d, s.n_qudits);
  return acc;
}

// Reversed schedule with negated angles; simulates to the inverse unitary.
inline Schedule inverse(const Schedule& s) {
  Schedule inv = s;
  inv.pulses.assign(s.pulses.rbegin(), s.pulses.rend());
  for (Pulse& p : inv.pulses) p.angle = -p.angle;
  inv.global_phase = -s.global_phase;
  inv.notes.clear();
  return inv;
}

struct VerifyReport {
  double target_distance = 0.0;  // Frobenius distance minimized over global phase
  int pulse_count = 0;
  int int_pulse_count = 0;
  bool pass = false;
};

inline VerifyReport verify(const Schedule& s, const Matrix& target, double tol) {
  if (target.rows() != s.space_dim() || target.cols() != s.space_dim()) {
    throw DimensionMismatch("verify: target dimension does not match schedule space");
  }
  VerifyReport r;
  r.target_distance = distance_up_to_phase(simulate(s), target);
  r.pulse_count = static_cast<int>(s.pulses.size());
  r.int_pulse_count = s.int_pulse_count();
  r.pass = r.target_distance <= tol;
  return r;
}

}  // namespace qsynth
