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

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qsynth/coupling_graph.hpp"
#include "qsynth/errors.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/pulse.hpp"
#include "qsynth/schedule.hpp"
#include "qsynth/single_qudit.hpp"
#include "qsynth/two_qudit.hpp"

namespace qsynth {

// Normalized d-level state with the global phase fixed so the amplitude on
// the fiducial level |d-1> is real and nonnegative (when it is nonzero).
// State-preparation recursions assume exactly this normalization.
class QuditState {
 public:
  explicit QuditState(Vector amplitudes) : c_(std::move(amplitudes)) {
    const double norm = c_.norm();
    if (!(norm > 1e-12)) {
      throw DimensionMismatch("QuditState: amplitude vector has (near-)zero norm");
    }
    c_ /= norm;
    const Complex last = c_(c_.size() - 1);
    if (std::abs(last) > 0.0) {
      c_ *= std::exp(Complex(0, -std::arg(last)));
    }
  }

  int dim() const { return static_cast<int>(c_.size()); }
  const Vector& amplitudes() const { return c_; }

 private:
  Vector c_;
};

struct PrepAngle {
  int level = 0;  // pair (level, d-1)
  double gamma = 0.0;
  double phi = 0.0;
};

// Angles (gamma_k, phi_k), k = d-2 down to 0, such that applying
// U_{k,d-1}(gamma_k, phi_k) in that order maps |d-1> to the state:
// each factor deposits c_k = -i e^{i phi_k} sin(gamma_k) * (product of the
// cosines already spent) onto level k and keeps the rest on |d-1>. The
// -i factor of the rotation block is folded into phi_k here, so the map is
// amplitude-exact, not just exact up to per-level phases.
inline std::vector<PrepAngle> state_prep_angles(const QuditState& psi) {
  const int d = psi.dim();
  const Vector& c = psi.amplitudes();
  std::vector<PrepAngle> out;
  double rest = 1.0;  // product of cos(gamma_l), l > k
  for (int k = d - 2; k >= 0; --k) {
    PrepAngle a;
    a.level = k;
    const double mag = std::abs(c(k));
    if (rest < 1e-300) {
      // The remaining amplitude budget has underflowed; any amplitudes left
      // are below it, so zero rotations lose nothing representable.
      if (mag > 1e-6) {
        throw DegenerateTail("state_prep_angles: amplitude " + std::to_string(mag) +
                             " at level " + std::to_string(k) +
                             " exceeds the exhausted cosine budget");
      }
      out.push_back(a);
      continue;
    }
    const double ratio = std::min(1.0, mag / rest);
    a.gamma = std::asin(ratio);
    a.phi = std::arg(c(k)) + kPi / 2;
    out.push_back(a);
    rest *= std::cos(a.gamma);
  }
  return out;
}

// Controlled reflection tilting the target fiducial state: one INT pulse
// conjugated by a single target-local rotation A = U_{j,d-1}(pi/2 - gamma/2,
// phi + pi). The controlled slice becomes the Householder reflection through
// u = i e^{i phi} cos(gamma/2)|j> + sin(gamma/2)|d-1>, which sends |d-1> to
//   -i e^{i phi} sin(gamma)|j> + cos(gamma)|d-1>,
// the same image the Givens rotation U_{j,d-1}(gamma, phi) produces. Only
// that column is contractual: a single conjugated INT pulse always yields a
// reflection (determinant -1 on the 2x2 slice), so no one-INT construction
// can reproduce the full rotation block. Compositions below use nothing but
// the fiducial column, where rotation and reflection agree exactly.
inline Schedule controlled_rotation(int d, int j, double gamma, double phi) {
  if (j < 0 || j >= d - 1) {
    throw IndexOutOfRange("controlled_rotation: need 0 <= j < d-1, got j=" + std::to_string(j) +
                          " at d=" + std::to_string(d));
  }
  Schedule s;
  s.n_qudits = 2;
  s.d = d;
  if (angle_is_zero(gamma)) return s;
  const GivensGate a{j, d - 1, kPi / 2 - gamma / 2, phi + kPi};
  const std::string note = "ctrl-rotation(" + std::to_string(j) + ")";
  s.append(lower_givens(a.inverse(), Capabilities{}, /*qudit=*/1), note);
  s.append(Pulse::interaction(kPi), note);
  s.append(lower_givens(a, Capabilities{}, /*qudit=*/1), note);
  return s;
}

// Controlled state preparation: when the control sits at d-1 the target goes
// from |d-1> to psi; other control levels see the identity. d-1 INT pulses
// for a generic state (zero-angle factors are dropped). The fiducial column
// is exact because each controlled reflection acts on a vector with no
// support on its own level j, where it is indistinguishable from the
// corresponding rotation.
inline Schedule controlled_state_map(const QuditState& psi) {
  const int d = psi.dim();
  Schedule s;
  s.n_qudits = 2;
  s.d = d;
  for (const PrepAngle& a : state_prep_angles(psi)) {
    if (angle_is_zero(a.gamma)) continue;
    const Schedule step = controlled_rotation(d, a.level, a.gamma, a.phi);
    for (const Pulse& p : step.pulses) s.append(p);
    s.notes.push_back("ctrl-prep level " + std::to_string(a.level));
  }
  return s;
}

struct SpectralFactor {
  double lambda = 0.0;  // eigenphase in [0, 2pi)
  Vector vec;           // unit eigenvector
};

// Spectral decomposition W = sum_j e^{i lambda_j} |v_j><v_j| via the complex
// Schur form, whose Q factor keeps eigenvectors orthonormal even across
// degenerate eigenvalues. Factors are sorted by eigenphase; reconstruction is
// checked before returning.
inline std::vector<SpectralFactor> spectral_factors(const Matrix& w) {
  const double defect = unitarity_defect(w);
  if (!(defect <= 1e-10)) {
    throw NotUnitary("spectral_factors: ||W W^dag - I||_max = " + std::to_string(defect));
  }
  const Eigen::Index n = w.rows();
  Eigen::ComplexSchur<Matrix> schur(w);
  if (schur.info() != Eigen::Success) {
    throw Error("spectral_factors: Schur decomposition failed to converge");
  }
  std::vector<SpectralFactor> factors(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double lambda = std::arg(schur.matrixT()(i, i));
    if (lambda < 0) lambda += 2 * kPi;
    factors[static_cast<size_t>(i)].lambda = lambda;
    factors[static_cast<size_t>(i)].vec = schur.matrixU().col(i);
  }
  std::sort(factors.begin(), factors.end(),
            [](const SpectralFactor& a, const SpectralFactor& b) { return a.lambda < b.lambda; });
  Matrix rebuilt = Matrix::Zero(n, n);
  for (const SpectralFactor& f : factors) {
    rebuilt += std::exp(Complex(0, f.lambda)) * f.vec * f.vec.adjoint();
  }
  if ((rebuilt - w).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error("spectral_factors: reconstruction residual exceeds 1e-10");
  }
  return factors;
}

namespace detail {

// Single-qudit preparation pulses taking |d-1> to psi, graph-routed.
inline std::vector<Pulse> prep_pulses(const QuditState& psi, const CouplingGraph& g, int qudit) {
  const int d = psi.dim();
  std::vector<Pulse> out;
  for (const PrepAngle& a : state_prep_angles(psi)) {
    if (angle_is_zero(a.gamma)) continue;
    for (const Pulse& p : lower_on_graph(a.level, d - 1, a.gamma, a.phi, g, qudit)) {
      out.push_back(p);
    }
  }
  return out;
}

inline std::vector<Pulse> inverted(const std::vector<Pulse>& ps) {
  std::vector<Pulse> out(ps.rbegin(), ps.rend());
  for (Pulse& p : out) p.angle = -p.angle;
  return out;
}

}  // namespace detail

// Spectral compilation: for each eigenphase factor, rotate the eigenvector
// onto the fiducial state, apply the phase there, rotate back. Only the
// fiducial column of the preparation matters, since
//   X (I + (e^{i l} - 1)|f><f|) X^dag = I + (e^{i l} - 1)(X|f>)(X|f>)^dag
// for any unitary X; the unitary-extension freedom on the other columns is
// never consumed. Single-qudit fiducial phases come from the tree z solve
// (costing lambda/d of global phase per factor); the two-qudit fiducial
// |d-1,d-1> takes its phase from a single INT pulse, exactly. Two-qudit
// targets are supported when every eigenvector is a product state.
inline Schedule spectral_synthesize(const Matrix& w, int n_qudits, const CouplingGraph& g) {
  const int d = g.dim();
  const Eigen::Index dim = (n_qudits == 2) ? static_cast<Eigen::Index>(d) * d : d;
  if (n_qudits != 1 && n_qudits != 2) {
    throw DimensionMismatch("spectral_synthesize: n_qudits must be 1 or 2");
  }
  if (w.rows() != dim || w.cols() != dim) {
    throw DimensionMismatch("spectral_synthesize: target dimension " + std::to_string(w.rows()) +
                            " does not match " + std::to_string(dim));
  }
  if (!is_connected(g)) {
    throw DisconnectedGraph("spectral_synthesize: coupling graph is not connected");
  }

  Schedule s;
  s.n_qudits = n_qudits;
  s.d = d;
  const SpanningTree tree = spanning_tree(g, d - 1);

  for (const SpectralFactor& f : spectral_factors(w)) {
    if (angle_is_zero(f.lambda, 1e-12)) continue;
    std::vector<Pulse> prep;
    std::vector<Pulse> phase;
    if (n_qudits == 1) {
      prep = detail::prep_pulses(QuditState(f.vec), g, /*qudit=*/0);
      std::vector<double> target(static_cast<size_t>(d), 0.0);
      target.back() = f.lambda;
      const PhaseSolve ps = diag_solve(target, tree);
      for (size_t e = 0; e < ps.tree_edges.size(); ++e) {
        if (angle_is_zero(ps.theta[e])) continue;
        const auto [p, c] = ps.tree_edges[e];
        for (const Pulse& zp : z_by_conjugation(p, c, ps.theta[e], g.caps())) phase.push_back(zp);
      }
      s.global_phase += ps.residual_global_phase;
    } else {
      // Split the eigenvector into control and target factors.
      Matrix m(d, d);
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) m(j, k) = f.vec(static_cast<Eigen::Index>(d) * j + k);
      }
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (d > 1 && svd.singularValues()(1) > 1e-10) {
        throw NotProductEigenvector(
            "spectral_synthesize: eigenvector at eigenphase " + std::to_string(f.lambda) +
            " is entangled (second singular value " + std::to_string(svd.singularValues()(1)) +
            "); only product-form eigenvectors are supported");
      }
      const Vector chi = svd.matrixU().col(0);
      const Vector psi = svd.singularValues()(0) * svd.matrixV().col(0).conjugate();
      const Schedule ctrl = controlled_state_map(QuditState(psi));
      prep = ctrl.pulses;
      for (const Pulse& p : detail::prep_pulses(QuditState(chi), g, /*qudit=*/0)) {
        prep.push_back(p);
      }
      phase.push_back(Pulse::interaction(f.lambda));
    }
    const std::string note = "spectral factor lambda=" + std::to_string(f.lambda);
    s.append(detail::inverted(prep), note);
    s.append(phase);
    s.append(prep);
    ++s.diagonal_rotations;
  }
  return s;
}

}  // namespace qsynth
