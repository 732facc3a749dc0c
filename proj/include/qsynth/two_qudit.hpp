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

#include <cmath>
#include <string>
#include <vector>

#include "qsynth/coupling_graph.hpp"
#include "qsynth/errors.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/pulse.hpp"
#include "qsynth/schedule.hpp"
#include "qsynth/single_qudit.hpp"

namespace qsynth {

// Controlled increment: |j,k> -> |j, k+1 mod d> when the control j is d-1,
// identity otherwise. Control-major indexing, row d*j + k.
inline Matrix cinc_matrix(int d) {
  if (d < 2) throw DimensionMismatch("cinc_matrix: need d >= 2");
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  Matrix m = Matrix::Zero(dim, dim);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const int kk = (j == d - 1) ? (k + 1) % d : k;
      m(static_cast<Eigen::Index>(d) * j + kk, static_cast<Eigen::Index>(d) * j + k) = 1.0;
    }
  }
  return m;
}

namespace detail {

// Target-local Givens rotation, routed through the coupling graph when one
// is in force and emitted as bare x/y pulses otherwise.
inline void append_local(Schedule& s, int j, int k, double gamma, double phi,
                         const CouplingGraph* g, const std::string& note) {
  if (g != nullptr) {
    s.append(lower_on_graph(j, k, gamma, phi, *g, /*qudit=*/1), note);
  } else {
    s.append(lower_givens(GivensGate{j, k, gamma, phi}, Capabilities{}, /*qudit=*/1), note);
  }
}

// Target-local SU(2) matrix on span{|p>,|q>} via its XYX Euler triple.
inline void append_su2_local(Schedule& s, int p, int q, const Eigen::Matrix2cd& w,
                             const CouplingGraph* g, const std::string& note) {
  const XyxAngles e = xyx_angles(w);
  append_local(s, p, q, e.t2, 0.0, g, note);
  append_local(s, p, q, e.t1, -kPi / 2, g, note);
  append_local(s, p, q, e.t, 0.0, g, note);
}

// Controlled transposition of target levels p and q (a plain sigma-x block on
// the control = d-1 slice, identity elsewhere), phase-exact. The interaction
// pulse supplies a controlled phase flip on target |d-1>; a pi/2 rotation
// relocates the flip onto |q> when q is not already d-1, and the +-pi/4 pair
// turns the flip into the transposition:
//   U_{pq}(-pi/4, pi/2) diag(1,-1) U_{pq}(pi/4, pi/2) = sigma-x on (p,q).
inline void append_controlled_transposition(Schedule& s, int p, int q, const CouplingGraph* g) {
  const int d = s.d;
  const std::string note = "ctrl-transposition(" + std::to_string(p) + "," + std::to_string(q) + ")";
  append_local(s, p, q, kPi / 4, kPi / 2, g, note);
  if (q != d - 1) append_local(s, q, d - 1, -kPi / 2, 0.0, g, note);
  s.append(Pulse::interaction(kPi), note);
  if (q != d - 1) append_local(s, q, d - 1, kPi / 2, 0.0, g, note);
  append_local(s, p, q, -kPi / 4, kPi / 2, g, note);
}

// Controlled phase e^{i phase} on target level k: the interaction pulse's
// corner phase, conjugated onto |k> the same way as above.
inline void append_controlled_phase(Schedule& s, int k, double phase, const CouplingGraph* g) {
  const int d = s.d;
  const std::string note = "ctrl-phase(" + std::to_string(k) + ")";
  if (k != d - 1) append_local(s, k, d - 1, -kPi / 2, 0.0, g, note);
  s.append(Pulse::interaction(phase), note);
  if (k != d - 1) append_local(s, k, d - 1, kPi / 2, 0.0, g, note);
}

}  // namespace detail

// Controlled transposition of adjacent target levels j, j+1; one INT pulse.
inline Schedule lambda1_transposition(int d, int j) {
  if (j < 0 || j > d - 2) {
    throw IndexOutOfRange("lambda1_transposition: need 0 <= j <= d-2, got j=" +
                          std::to_string(j) + " at d=" + std::to_string(d));
  }
  Schedule s;
  s.n_qudits = 2;
  s.d = d;
  detail::append_controlled_transposition(s, j, j + 1, nullptr);
  return s;
}

// CINC as the chain of controlled adjacent transpositions, applied from
// (d-2, d-1) down to (0, 1): the top level cascades to 0 and every other
// level steps up by one. Exactly d-1 INT pulses.
inline Schedule cinc_sequence(int d) {
  if (d < 2) throw DimensionMismatch("cinc_sequence: need d >= 2");
  Schedule s;
  s.n_qudits = 2;
  s.d = d;
  for (int j = d - 2; j >= 0; --j) {
    detail::append_controlled_transposition(s, j, j + 1, nullptr);
  }
  return s;
}

struct AbcFactors {
  Eigen::Matrix2cd a;
  Eigen::Matrix2cd b;
  Eigen::Matrix2cd c;
};

namespace detail {

inline Eigen::Matrix2cd rot_z(double phi) {
  Eigen::Matrix2cd m;
  m << std::exp(Complex(0, -phi / 2)), 0, 0, std::exp(Complex(0, phi / 2));
  return m;
}

inline Eigen::Matrix2cd rot_y(double phi) {
  Eigen::Matrix2cd m;
  m << std::cos(phi / 2), -std::sin(phi / 2), std::sin(phi / 2), std::cos(phi / 2);
  return m;
}

}  // namespace detail

// Splits w in SU(2) into a, b, c with a b c = I and a sx b sx c = w, where sx
// is the transposition block. Write w = Rz(alpha) Ry(theta) Rz(beta); halving
// the middle angle and letting the transpositions flip the half-rotations'
// signs gives both identities at once.
inline AbcFactors abc_decompose(const Eigen::Matrix2cd& w) {
  if ((w * w.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw NotSpecialUnitary("abc_decompose: input is not unitary");
  }
  if (std::abs(w.determinant() - Complex(1, 0)) > 1e-10) {
    throw NotSpecialUnitary("abc_decompose: determinant is not 1");
  }
  const double ch = std::abs(w(0, 0));  // cos(theta/2)
  const double sh = std::abs(w(1, 0));  // sin(theta/2)
  const double theta = 2.0 * std::atan2(sh, ch);
  double alpha = 0.0;
  double beta = 0.0;
  if (sh <= 1e-13) {
    alpha = beta = -std::arg(w(0, 0));
  } else if (ch <= 1e-13) {
    alpha = std::arg(w(1, 0));
    beta = -alpha;
  } else {
    const double sum = -2.0 * std::arg(w(0, 0));  // alpha + beta
    const double diff = 2.0 * std::arg(w(1, 0));  // alpha - beta
    alpha = 0.5 * (sum + diff);
    beta = 0.5 * (sum - diff);
  }
  AbcFactors f;
  f.a = detail::rot_z(alpha) * detail::rot_y(theta / 2);
  f.b = detail::rot_y(-theta / 2) * detail::rot_z(-(alpha + beta) / 2);
  f.c = detail::rot_z((beta - alpha) / 2);
  return f;
}

namespace detail {

// Controlled w in SU(2) on target levels (p,q): interleave the abc factors
// with two controlled transpositions. Controls away from d-1 see a b c = I;
// the controlled slice sees a sx b sx c = w.
inline void append_controlled_su2(Schedule& s, int p, int q, const Eigen::Matrix2cd& w,
                                  const CouplingGraph* g) {
  const AbcFactors f = abc_decompose(w);
  const std::string note = "ctrl-su2(" + std::to_string(p) + "," + std::to_string(q) + ")";
  append_su2_local(s, p, q, f.c, g, note);
  append_controlled_transposition(s, p, q, g);
  append_su2_local(s, p, q, f.b, g, note);
  append_controlled_transposition(s, p, q, g);
  append_su2_local(s, p, q, f.a, g, note);
}

}  // namespace detail

// Controlled w embedded at adjacent target levels (j, j+1); two INT pulses.
inline Schedule lambda1_unitary(int d, int j, const Eigen::Matrix2cd& w) {
  if (j < 0 || j > d - 2) {
    throw IndexOutOfRange("lambda1_unitary: need 0 <= j <= d-2, got j=" + std::to_string(j) +
                          " at d=" + std::to_string(d));
  }
  Schedule s;
  s.n_qudits = 2;
  s.d = d;
  detail::append_controlled_su2(s, j, j + 1, w, nullptr);
  return s;
}

// Controlled arbitrary v: Givens-factor v on the coupling graph exactly as in
// single-qudit synthesis, then promote each factor to its controlled version
// and realize the controlled diagonal remainder as one conjugated INT pulse
// per nonzero phase. Every local pulse is routed through the graph.
inline Schedule synthesize_lambda1(const Matrix& v, const CouplingGraph& g) {
  const int d = g.dim();
  const SpanningTree tree = spanning_tree(g, d - 1);
  const QRResult qr = qr_reduce(v, g, tree);

  Schedule s;
  s.n_qudits = 2;
  s.d = d;
  s.givens_gates = static_cast<int>(qr.gates.size());
  for (int k = 0; k < d; ++k) {
    const double phase = wrap_angle(qr.residual_diagonal[static_cast<size_t>(k)]);
    if (angle_is_zero(phase)) continue;
    detail::append_controlled_phase(s, k, phase, &g);
    ++s.diagonal_rotations;
  }
  for (size_t i = qr.gates.size(); i-- > 0;) {
    const GivensGate inv = qr.gates[i].inverse();
    detail::append_controlled_su2(s, inv.j, inv.k, givens_block(inv.gamma, inv.phi), &g);
  }
  return s;
}

// A diagonal two-qudit coupling with accumulated phases omega(m,n) on |m,n>
// entangles iff the phase matrix is not additively separable mod 2pi: some
// quadruple has omega(m,n) + omega(p,q) != omega(m,q) + omega(p,n) (mod 2pi).
// Separable phase matrices factor into local diagonals and entangle nothing.
inline bool is_entangling_diagonal(const Eigen::MatrixXd& omega, double tol = 1e-9) {
  const Eigen::Index d1 = omega.rows();
  const Eigen::Index d2 = omega.cols();
  for (Eigen::Index m = 0; m < d1; ++m) {
    for (Eigen::Index p = 0; p < d1; ++p) {
      for (Eigen::Index n = 0; n < d2; ++n) {
        for (Eigen::Index q = 0; q < d2; ++q) {
          const double defect = wrap_angle(omega(m, n) + omega(p, q) - omega(m, q) - omega(p, n));
          if (std::abs(defect) > tol) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace qsynth
