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

namespace qsynth {

// One hardware control applied for a dimensionless duration `angle` (Omega*t).
// x, y, z, xy act on the ordered level pair (j,k) of one qudit; `int` is the
// two-qudit phase on |d-1,d-1> and carries no pair. Level pairs are ordered:
// swapping j and k changes the sign conventions below, so (j,k) and (k,j)
// are different pulses.
enum class Gen { X, Y, Z, XY, Int };

struct Pulse {
  Gen gen = Gen::X;
  int qudit = 0;  // 0 or, in two-qudit schedules, 1
  int j = 0;
  int k = 0;
  double axis_phi = 0.0;  // equatorial axis angle, xy only
  double angle = 0.0;

  static Pulse x(int j, int k, double angle, int qudit = 0) {
    return Pulse{Gen::X, qudit, j, k, 0.0, angle};
  }
  static Pulse y(int j, int k, double angle, int qudit = 0) {
    return Pulse{Gen::Y, qudit, j, k, 0.0, angle};
  }
  static Pulse z(int j, int k, double angle, int qudit = 0) {
    return Pulse{Gen::Z, qudit, j, k, 0.0, angle};
  }
  static Pulse xy(int j, int k, double axis_phi, double angle, int qudit = 0) {
    return Pulse{Gen::XY, qudit, j, k, axis_phi, angle};
  }
  static Pulse interaction(double angle) { return Pulse{Gen::Int, 0, 0, 0, 0.0, angle}; }
};

inline std::string gen_name(Gen g) {
  switch (g) {
    case Gen::X: return "x";
    case Gen::Y: return "y";
    case Gen::Z: return "z";
    case Gen::XY: return "xy";
    case Gen::Int: return "int";
  }
  return "?";
}

inline void validate_pulse(const Pulse& p, int d, int n_qudits) {
  if (p.qudit < 0 || p.qudit >= n_qudits) {
    throw InvalidPulse("pulse targets qudit " + std::to_string(p.qudit) + " in a " +
                       std::to_string(n_qudits) + "-qudit schedule");
  }
  if (p.gen == Gen::Int) {
    if (n_qudits != 2) throw InvalidPulse("int pulse in a single-qudit schedule");
    return;
  }
  if (p.j == p.k || p.j < 0 || p.k < 0 || p.j >= d || p.k >= d) {
    throw InvalidPulse("pulse pair (" + std::to_string(p.j) + "," + std::to_string(p.k) +
                       ") invalid for d=" + std::to_string(d));
  }
}

// Rotation by gamma about the equatorial axis at angle phi, restricted to
// span{|j>,|k>}. The level pair is ordered: (j,k) names which state gets the
// e^{+i phi} weight. gamma = pi/2, phi = pi/2 swaps the pair up to sign
// (|k> -> |j>, |j> -> -|k>).
struct GivensGate {
  int j = 0;
  int k = 1;
  double gamma = 0.0;
  double phi = 0.0;

  GivensGate inverse() const { return GivensGate{j, k, -gamma, phi}; }
};

// The SU(2) block of a Givens gate in the ordered (j,k) basis:
// [[cos g, -i e^{i phi} sin g], [-i e^{-i phi} sin g, cos g]].
inline Eigen::Matrix2cd givens_block(double gamma, double phi) {
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  const Complex i(0, 1);
  Eigen::Matrix2cd b;
  b << c, -i * std::exp(i * phi) * s, -i * std::exp(-i * phi) * s, c;
  return b;
}

// The SU(2) block of one pulse in the ordered (j,k) basis.
inline Eigen::Matrix2cd pulse_block(const Pulse& p) {
  const Complex i(0, 1);
  const double c = std::cos(p.angle);
  const double s = std::sin(p.angle);
  Eigen::Matrix2cd b;
  switch (p.gen) {
    case Gen::X:
      b << c, -i * s, -i * s, c;
      return b;
    case Gen::Y:
      b << c, -s, s, c;
      return b;
    case Gen::Z:
      b << std::exp(-i * p.angle), 0, 0, std::exp(i * p.angle);
      return b;
    case Gen::XY:
      return givens_block(p.angle, p.axis_phi);
    case Gen::Int:
      throw InvalidPulse("pulse_block: int pulse has no 2x2 block");
  }
  throw InvalidPulse("pulse_block: unknown generator");
}

inline Matrix embed_block(int d, int j, int k, const Eigen::Matrix2cd& b) {
  if (j == k || j < 0 || k < 0 || j >= d || k >= d) {
    throw IndexOutOfRange("embed_block: pair (" + std::to_string(j) + "," + std::to_string(k) +
                          ") invalid for d=" + std::to_string(d));
  }
  Matrix m = Matrix::Identity(d, d);
  m(j, j) = b(0, 0);
  m(j, k) = b(0, 1);
  m(k, j) = b(1, 0);
  m(k, k) = b(1, 1);
  return m;
}

inline Matrix givens_matrix(int d, const GivensGate& gate) {
  return embed_block(d, gate.j, gate.k, givens_block(gate.gamma, gate.phi));
}

// Full d x d matrix of a single-qudit pulse (for oracles and small checks;
// the simulator applies pulses by row operations instead).
inline Matrix pulse_matrix(int d, const Pulse& p) {
  validate_pulse(p, d, 1);
  return embed_block(d, p.j, p.k, pulse_block(p));
}

// XYX Euler angles for an SU(2) matrix [[a, b], [-conj(b), conj(a)]]:
// returns (t, t1, t2) with X(t) Y(t1) X(t2) equal to the input exactly.
// Expanding the product gives
//   entry(0,0) = cos t1 cos(t+t2) - i sin t1 sin(t-t2)
//   entry(0,1) = -sin t1 cos(t-t2) - i cos t1 sin(t+t2)
// so the four real components separate into two polar pairs.
struct XyxAngles {
  double t = 0.0;   // last-applied x angle
  double t1 = 0.0;  // middle y angle, in [0, pi/2]
  double t2 = 0.0;  // first-applied x angle
};

inline XyxAngles xyx_angles(const Eigen::Matrix2cd& u, double tol = 1e-10) {
  const Complex a = u(0, 0);
  const Complex b = u(0, 1);
  if (std::abs(u(1, 0) + std::conj(b)) > tol || std::abs(u(1, 1) - std::conj(a)) > tol ||
      std::abs(a * std::conj(a) + b * std::conj(b) - Complex(1, 0)) > tol) {
    throw NotSpecialUnitary("xyx_angles: matrix is not of SU(2) form [[a,b],[-b*,a*]]");
  }
  const double cos_t1 = std::hypot(a.real(), b.imag());
  const double sin_t1 = std::hypot(a.imag(), b.real());
  const double sum = std::atan2(-b.imag(), a.real());   // t + t2, defined when cos_t1 > 0
  const double diff = std::atan2(-a.imag(), -b.real()); // t - t2, defined when sin_t1 > 0
  XyxAngles r;
  r.t1 = std::atan2(sin_t1, cos_t1);
  r.t = 0.5 * (sum + diff);
  r.t2 = 0.5 * (sum - diff);
  return r;
}

namespace detail {
inline void push_nonzero(std::vector<Pulse>& out, const Pulse& p) {
  if (!angle_is_zero(p.angle)) out.push_back(p);
}
}  // namespace detail

// Compiles one Givens gate to pulses, in application order. Hardware that
// drives both quadratures at once takes the gate as a single xy pulse.
// Otherwise rotations about the x or y axis are still one pulse, and a
// generic axis costs an XYX Euler triple. The pulse product reproduces
// givens_matrix(gate) exactly, not just up to phase.
inline std::vector<Pulse> lower_givens(const GivensGate& g, const Capabilities& caps,
                                       int qudit = 0) {
  std::vector<Pulse> out;
  if (angle_is_zero(g.gamma)) return out;
  if (caps.simultaneous_xy) {
    out.push_back(Pulse::xy(g.j, g.k, g.phi, g.gamma, qudit));
    return out;
  }
  const double phi = wrap_angle(g.phi);
  const double eps = 1e-13;
  if (std::abs(phi) <= eps) {
    detail::push_nonzero(out, Pulse::x(g.j, g.k, g.gamma, qudit));
    return out;
  }
  if (std::abs(std::abs(phi) - kPi) <= eps) {
    detail::push_nonzero(out, Pulse::x(g.j, g.k, -g.gamma, qudit));
    return out;
  }
  if (std::abs(phi - kPi / 2) <= eps) {
    // e^{+i pi/2} weight on |j>: the y block with the minus sine at (k,j),
    // which is the y pulse on the reversed pair.
    detail::push_nonzero(out, Pulse::y(g.k, g.j, g.gamma, qudit));
    return out;
  }
  if (std::abs(phi + kPi / 2) <= eps) {
    detail::push_nonzero(out, Pulse::y(g.j, g.k, g.gamma, qudit));
    return out;
  }
  const XyxAngles e = xyx_angles(givens_block(g.gamma, g.phi));
  detail::push_nonzero(out, Pulse::x(g.j, g.k, e.t2, qudit));
  detail::push_nonzero(out, Pulse::y(g.j, g.k, e.t1, qudit));
  detail::push_nonzero(out, Pulse::x(g.j, g.k, e.t, qudit));
  return out;
}

// Pulses realizing diag(e^{-i gamma}, e^{+i gamma}) on span{|j>,|k>}, exactly.
// Without a native z control the rotation is conjugated into the equatorial
// plane: U(-pi/4, pi/2) X(-gamma) U(pi/4, pi/2) closes to the z rotation with
// no stray phase, and both conjugators are single y pulses.
inline std::vector<Pulse> z_by_conjugation(int j, int k, double gamma, const Capabilities& caps,
                                           int qudit = 0) {
  std::vector<Pulse> out;
  if (angle_is_zero(gamma)) return out;
  if (caps.direct_z) {
    out.push_back(Pulse::z(j, k, gamma, qudit));
    return out;
  }
  for (const GivensGate& g : {GivensGate{j, k, kPi / 4, kPi / 2},
                              GivensGate{j, k, -gamma, 0.0},
                              GivensGate{j, k, -kPi / 4, kPi / 2}}) {
    for (const Pulse& p : lower_givens(g, caps, qudit)) out.push_back(p);
  }
  return out;
}

}  // namespace qsynth
